//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use coarsegraph::constructions::{
    build_2fat_witness, build_g, build_n_gadget, build_tree_leaf_path, paper_params,
    AssemblyParams, GadgetParams,
};
use coarsegraph::corpus::{corpus, random_connected_graph, random_weighted_graph, seeded};
use coarsegraph::fatminor::{
    exhaustive_oracle, find_fat_minor, inflate_model, merge_close_sets, model_separation,
    verify_model, MinorModel, PatternGraph,
};
use coarsegraph::graph::io::write_graph;
use coarsegraph::graph::{neighborhood, power_graph, scale_weights, set_distance, subdivide, AllPairs};
use coarsegraph::menger::{find_spread_paths, triple_oracle, verify_spread_paths, SpreadPathQuery};
use coarsegraph::quasiiso::{check_quasi_isometry, identity_into_power};
use coarsegraph::treedecomp::{decompose_n_gadget, decompose_tree_leaf_path, validate};
use coarsegraph::{Distance, Graph, Rational, Verdict, VertexSet};
use rand::Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn r(x: i64) -> Rational {
    Rational::from_integer(x)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Corpus up to eight vertices plus 200 seeded graphs on 9 or 10 vertices.
fn pipeline_hosts() -> Vec<Graph> {
    let mut hosts = corpus(8);
    let mut rng = seeded(1001);
    for _ in 0..200 {
        let n = rng.random_range(9..=10);
        let density = rng.random_range(0.05..0.4);
        hosts.push(random_connected_graph(&mut rng, n, density));
    }
    hosts
}

#[derive(Default)]
struct PipelineTally {
    runs: usize,
    power_found: usize,
    host_exhausted: usize,
    inconclusive: usize,
    failures: Vec<String>,
}

/// Model of `h` in the `k`-th power of its `(4k+2)`-subdivision: balls of
/// radius `k + 1` around the original vertices, joined by the middle of
/// each chain.
fn subdivided_power_model(h: &PatternGraph, k: usize) -> (Graph, MinorModel) {
    let m = 4 * k + 3;
    let radius = k + 1;
    let s = subdivide(h.graph(), m - 1).expect("patterns are unweighted");
    let branch = h
        .graph()
        .vertices()
        .map(|v| neighborhood(&s.graph, &VertexSet::singleton(v), r(radius as i64)).unwrap())
        .collect();
    let connector = h
        .graph()
        .edges()
        .iter()
        .zip(&s.chains)
        .map(|(&(u, v), chain)| {
            let full: Vec<usize> = std::iter::once(u)
                .chain(chain.iter().copied())
                .chain(std::iter::once(v))
                .collect();
            full[radius..=m - radius].iter().copied().collect()
        })
        .collect();
    (s.graph, MinorModel::new(branch, connector, r(3)))
}

fn criterion_1() -> Outcome {
    const BUDGET: u64 = 50_000_000;
    let hosts = pipeline_hosts();
    let patterns = ["k3", "p4", "c4", "k4"];
    let jobs: Vec<(usize, &str, usize)> = (0..hosts.len())
        .flat_map(|g| patterns.iter().flat_map(move |&p| (3..=5).map(move |k| (g, p, k))))
        .collect();
    let tallies: Vec<PipelineTally> = jobs
        .par_iter()
        .map(|&(gi, p, k)| {
            let g = &hosts[gi];
            let h = PatternGraph::named(p).unwrap();
            let mut t = PipelineTally {
                runs: 1,
                ..Default::default()
            };
            let host = find_fat_minor(g, &h, r(k as i64), BUDGET).unwrap();
            let gk = power_graph(g, k).unwrap();
            let power = find_fat_minor(&gk, &h, r(3), BUDGET).unwrap();
            if matches!(host, Verdict::Inconclusive { .. })
                || matches!(power, Verdict::Inconclusive { .. })
            {
                t.inconclusive += 1;
            }
            if let Verdict::Found(m3) = &power {
                t.power_found += 1;
                match inflate_model(g, &h, k, m3) {
                    Ok(m) if verify_model(g, &h, &m, r(k as i64)).is_ok() => {}
                    other => t.failures.push(format!("host {gi} {p} k={k}: {other:?}")),
                }
            }
            if host == Verdict::NoneExhaustive {
                t.host_exhausted += 1;
                if power != Verdict::NoneExhaustive {
                    t.failures
                        .push(format!("host {gi} {p} k={k}: host exhausted, power {}", power.tag()));
                }
            }
            t
        })
        .collect();
    let mut total = PipelineTally::default();
    for t in tallies {
        total.runs += t.runs;
        total.power_found += t.power_found;
        total.host_exhausted += t.host_exhausted;
        total.inconclusive += t.inconclusive;
        total.failures.extend(t.failures);
    }

    let mut supplementary = 0;
    for p in patterns {
        let h = PatternGraph::named(p).unwrap();
        for k in 3..=5 {
            let (g, m3) = subdivided_power_model(&h, k);
            let gk = power_graph(&g, k).unwrap();
            if let Err(e) = verify_model(&gk, &h, &m3, r(3)) {
                total.failures.push(format!("supplementary {p} k={k}: built model: {e}"));
                continue;
            }
            match inflate_model(&g, &h, k, &m3) {
                Ok(m) if verify_model(&g, &h, &m, r(k as i64)).is_ok() => supplementary += 1,
                other => total
                    .failures
                    .push(format!("supplementary {p} k={k}: {other:?}")),
            }
        }
    }
    ensure(total.failures.is_empty(), || {
        format!("{} failures, first: {}", total.failures.len(), total.failures[0])
    })?;
    ensure(total.inconclusive == 0, || {
        format!("{} runs ran out of budget", total.inconclusive)
    })?;
    Ok(format!(
        "{} hosts, {} runs: power models found {} (all inflate), host exhausted {} (power exhausted in all), \
         supplementary subdivided hosts inflated {supplementary}/12",
        hosts.len(),
        total.runs,
        total.power_found,
        total.host_exhausted
    ))
}

fn criterion_2() -> Outcome {
    let hosts = corpus(8);
    let failures: Vec<String> = hosts
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, g)| {
            let d = AllPairs::new(g).unwrap();
            [2usize, 3, 5].into_iter().filter_map(move |k| {
                let m = identity_into_power(g, k).unwrap();
                if let Err(v) = check_quasi_isometry(&m) {
                    return Some(format!("graph {i} k={k}: {v}"));
                }
                let dk = AllPairs::new(m.codomain()).unwrap();
                for u in g.vertices() {
                    for v in g.vertices() {
                        let want = d.hops(u, v).unwrap().div_ceil(k as u64);
                        if dk.hops(u, v) != Some(want) {
                            return Some(format!("graph {i} k={k}: pair ({u}, {v})"));
                        }
                    }
                }
                None
            })
        })
        .collect();
    ensure(failures.is_empty(), || {
        format!("{} failures, first: {}", failures.len(), failures[0])
    })?;
    Ok(format!("{} graphs x k in {{2,3,5}}, q = k and ceiling law exact", hosts.len()))
}

fn criterion_3() -> Outcome {
    let mut max_grid = 0;
    for d in 1..=6 {
        for s in 1..=5 {
            let g = build_n_gadget(GadgetParams::new(d, s).unwrap()).unwrap();
            let td = decompose_n_gadget(&g);
            validate(&g.graph, &td).map_err(|v| format!("gadget ({d}, {s}): {v}"))?;
            ensure(td.width() <= 7, || format!("gadget ({d}, {s}) width {}", td.width()))?;
            max_grid = max_grid.max(td.width());
        }
    }
    let start = Instant::now();
    let g = build_n_gadget(GadgetParams::new(13, 14).unwrap()).unwrap();
    let td = decompose_n_gadget(&g);
    validate(&g.graph, &td).map_err(|v| format!("gadget (13, 14): {v}"))?;
    let elapsed = start.elapsed();
    ensure(td.width() <= 7, || format!("gadget (13, 14) width {}", td.width()))?;
    ensure(elapsed < Duration::from_secs(300), || {
        format!("gadget (13, 14) took {elapsed:?}")
    })?;
    let mut max_tlp = 0;
    for d in 1..=10 {
        let t = build_tree_leaf_path(d).unwrap();
        let td = decompose_tree_leaf_path(&t);
        validate(&t.graph, &td).map_err(|v| format!("tree-leaf-path {d}: {v}"))?;
        ensure(td.width() <= 3, || format!("tree-leaf-path {d} width {}", td.width()))?;
        max_tlp = max_tlp.max(td.width());
    }
    Ok(format!(
        "grid max width {max_grid}; (13,14): {} vertices, width {}, {:.2}s; tree-leaf-path max width {max_tlp}",
        g.graph.vertex_count(),
        td.width(),
        elapsed.as_secs_f64()
    ))
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    let cases = [
        AssemblyParams::new(4, 2, 2, 6, 4).unwrap(),
        AssemblyParams::new(5, 3, 3, 8, 6).unwrap(),
        paper_params(1).unwrap(),
    ];
    for p in cases {
        let start = Instant::now();
        let a = build_g(p).map_err(|e| format!("{p:?}: {e}"))?;
        let w = build_2fat_witness(&a).map_err(|e| format!("{p:?}: {e}"))?;
        verify_model(&a.graph, &w.pattern, &w.model, r(2)).map_err(|e| format!("{p:?}: {e}"))?;
        let tight = model_separation(&a.graph, &w.pattern, &w.model)
            .map_err(|e| format!("{p:?}: {e}"))?
            .ok_or("no separated pair")?;
        ensure(tight.distance == Distance::from_int(2), || {
            format!("{p:?}: closest pair at {}", tight.distance)
        })?;
        ensure(verify_model(&a.graph, &w.pattern, &w.model, r(3)).is_err(), || {
            format!("{p:?}: passes at 3")
        })?;
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(600), || format!("{p:?} took {elapsed:?}"))?;
        notes.push(format!(
            "n={} v={} pair ({}, {}) at 2 in {:.2}s",
            p.clique,
            a.graph.vertex_count(),
            tight.first,
            tight.second,
            elapsed.as_secs_f64()
        ));
    }
    Ok(notes.join("; "))
}

fn spread_query(s: &[usize], t: &[usize], count: usize, distance: u64) -> SpreadPathQuery {
    SpreadPathQuery {
        sources: s.iter().copied().collect(),
        sinks: t.iter().copied().collect(),
        count,
        distance,
        budget: 500_000_000,
    }
}

fn criterion_5() -> Outcome {
    let hosts = corpus(8);
    let mut jobs = Vec::new();
    for (i, _) in hosts.iter().enumerate() {
        for p in ["k3", "p3"] {
            for k in 1..=3 {
                jobs.push((i, p, k));
            }
        }
    }
    let disagreements: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(i, p, k)| {
            let h = PatternGraph::named(p).unwrap();
            let fast = find_fat_minor(&hosts[i], &h, r(k), u64::MAX).unwrap();
            let slow = exhaustive_oracle(&hosts[i], &h, r(k)).unwrap();
            (fast.tag() != slow.tag())
                .then(|| format!("graph {i} {p} k={k}: {} vs {}", fast.tag(), slow.tag()))
        })
        .collect();
    ensure(disagreements.is_empty(), || {
        format!("{} disagreements, first: {}", disagreements.len(), disagreements[0])
    })?;

    let mut rng = seeded(5005);
    let mut found = 0;
    for i in 0..50 {
        let n = rng.random_range(6..=20);
        let density = rng.random_range(0.0..0.08);
        let g = random_connected_graph(&mut rng, n, density);
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<usize> {
            let size = rng.random_range(1..=3);
            (0..size).map(|_| rng.random_range(0..n)).collect()
        };
        let s = pick(&mut rng);
        let t = pick(&mut rng);
        let q = spread_query(&s, &t, rng.random_range(1..=3), rng.random_range(0..=3));
        let fast = find_spread_paths(&g, &q).map_err(|e| format!("instance {i}: {e}"))?;
        let slow = triple_oracle(&g, &q, n).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(fast.tag() == slow.tag(), || {
            format!("instance {i}: {} vs {}", fast.tag(), slow.tag())
        })?;
        if let Verdict::Found(w) = fast {
            verify_spread_paths(&g, &q, &w.paths).map_err(|e| format!("instance {i}: {e}"))?;
            found += 1;
        }
    }
    let ng = build_n_gadget(GadgetParams::new(2, 2).unwrap()).unwrap();
    let l = &ng.labels;
    let mut gadget = Vec::new();
    for d in 0..=4 {
        let q = spread_query(&l.sources, &l.sinks, 3, d);
        let fast = find_spread_paths(&ng.graph, &q).unwrap();
        let slow = triple_oracle(&ng.graph, &q, ng.graph.vertex_count()).unwrap();
        ensure(fast.tag() == slow.tag(), || {
            format!("gadget (2,2) D={d}: {} vs {}", fast.tag(), slow.tag())
        })?;
        gadget.push(format!("D={d} {}", fast.tag()));
    }
    Ok(format!(
        "{} fat minor instances agree; 50 spread instances agree ({found} found); gadget (2,2) k=3: {}",
        jobs.len(),
        gadget.join(", ")
    ))
}

fn criterion_6() -> Outcome {
    let eps_choices = [Rational::new(1, 2), r(1), Rational::new(3, 2), r(2), r(3)];
    let failures: Vec<String> = (0..1000u64)
        .into_par_iter()
        .filter_map(|seed| {
            let mut rng = seeded(60_000 + seed);
            let n = rng.random_range(2..=50);
            let density = rng.random_range(0.0..(3.0 / n as f64).min(1.0));
            let g = random_connected_graph(&mut rng, n, density);
            let count = rng.random_range(1..=8);
            let xs: Vec<VertexSet> = (0..count)
                .map(|_| {
                    let v = rng.random_range(0..n);
                    neighborhood(&g, &VertexSet::singleton(v), r(rng.random_range(0..=2))).unwrap()
                })
                .collect();
            let eps = eps_choices[rng.random_range(0..eps_choices.len())];
            let out = match merge_close_sets(&g, &xs, eps) {
                Ok(out) => out,
                Err(e) => return Some(format!("seed {seed}: {e}")),
            };
            for (i, a) in out.sets.iter().enumerate() {
                for b in &out.sets[i + 1..] {
                    if !set_distance(&g, a, b).unwrap().at_least(eps) {
                        return Some(format!("seed {seed}: output sets closer than {eps}"));
                    }
                }
            }
            let union = |sets: &[VertexSet]| sets.iter().fold(VertexSet::new(), |a, b| a.union(b));
            let (ux, uy) = (union(&xs), union(&out.sets));
            let slack = eps * r((xs.len() - out.sets.len()) as i64);
            let outer = neighborhood(&g, &ux, slack).unwrap();
            (!ux.is_subset(&uy) || !uy.is_subset(&outer))
                .then(|| format!("seed {seed}: sandwich fails"))
        })
        .collect();
    ensure(failures.is_empty(), || {
        format!("{} failures, first: {}", failures.len(), failures[0])
    })?;
    Ok("1000 seeds: separation and sandwich hold".into())
}

fn criterion_7() -> Outcome {
    let mut rng = seeded(7007);
    let mut by_pattern = BTreeMap::new();
    for i in 0..200 {
        let n = rng.random_range(4..=10);
        let density = rng.random_range(0.1..0.5);
        let g = random_weighted_graph(&mut rng, n, density, 9, 5);
        let unit = g.unweighted();
        let (name, h, m) = ["k3", "p3", "k2"]
            .into_iter()
            .find_map(|name| {
                let h = PatternGraph::named(name).unwrap();
                find_fat_minor(&unit, &h, r(1), u64::MAX)
                    .unwrap()
                    .found()
                    .map(|m| (name, h, m))
            })
            .ok_or_else(|| format!("graph {i}: no model"))?;
        let k = model_separation(&g, &h, &m)
            .unwrap()
            .and_then(|p| p.distance.finite())
            .ok_or_else(|| format!("graph {i}: no finite separation"))?;
        verify_model(&g, &h, &m, k).map_err(|e| format!("graph {i}: {e}"))?;
        let target = Rational::new(rng.random_range(1..=40), rng.random_range(1..=7));
        let scaled = scale_weights(&g, target / k).unwrap();
        verify_model(&scaled, &h, &m, target).map_err(|e| format!("graph {i}: scaled: {e}"))?;
        let exact = model_separation(&scaled, &h, &m).unwrap().map(|p| p.distance);
        ensure(exact == Some(Distance::Finite(target)), || {
            format!("graph {i}: scaled separation {exact:?}, want {target}")
        })?;
        let above = target + Rational::new(1, 1_000_000);
        ensure(verify_model(&scaled, &h, &m, above).is_err(), || {
            format!("graph {i}: passes above the transported fatness")
        })?;
        *by_pattern.entry(name).or_insert(0) += 1;
    }
    Ok(format!("200 weighted graphs, models by pattern {by_pattern:?}"))
}

fn cli(dir: &Path, threads: usize, args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_coarsegraph"))
        .current_dir(dir)
        .args(args)
        .args(["--json", "--threads", &threads.to_string()])
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

/// Every acceptance-style CLI run, in order, with the expected exit codes.
fn cli_script() -> Vec<(Vec<&'static str>, i32)> {
    let s = |args: &[&'static str], code| (args.to_vec(), code);
    vec![
        s(&["construct", "g", "--q", "1", "--out", "g.txt", "--labels", "g.json"], 0),
        s(&["witness-2fat", "--q", "1", "--graph", "g.txt", "--out", "w.json"], 0),
        s(&["verify-model", "--graph", "g.txt", "--cert", "w.json", "--k", "2"], 0),
        s(&["verify-model", "--graph", "g.txt", "--cert", "w.json", "--k", "3"], 1),
        s(&["certify", "witness-2fat", "--graph", "g.txt", "--cert", "w.json", "--out", "b.json"], 0),
        s(&["certify", "recheck", "--bundle", "b.json"], 0),
        s(&["construct", "g", "--params", "5,3,3,8,6", "--out", "m.txt"], 0),
        s(&["witness-2fat", "--params", "5,3,3,8,6", "--out", "mw.json"], 0),
        s(&["tree-decomp", "build", "n-gadget", "--params", "13,14", "--out", "td.json", "--graph-out", "ng.txt"], 0),
        s(&["tree-decomp", "validate", "--graph", "ng.txt", "--td", "td.json"], 0),
        s(&["tree-decomp", "build", "tree-leaf-path", "--params", "10", "--out", "tlp.json"], 0),
        s(&["construct", "n-gadget", "--params", "2,2", "--out", "g22.txt", "--labels", "g22.json"], 0),
        s(&["spread-paths", "--graph", "g22.txt", "--labels", "g22.json", "--k", "3", "--dist", "2", "--out", "sp.json"], 0),
        s(&["spread-paths", "--graph", "g22.txt", "--labels", "g22.json", "--k", "3", "--dist", "3"], 1),
        s(&["find-fat-minor", "--graph", "c7.txt", "--pattern", "k3", "--k", "1", "--out", "f.json"], 0),
        s(&["pipeline-theorem13", "--k", "3", "--pattern", "k3", "--host", "h8.txt"], 0),
        s(&["power-qi", "--graph", "h8.txt", "--k", "3", "--out", "map.json", "--power-out", "p.txt"], 0),
        s(&["check-qi", "--domain", "h8.txt", "--codomain", "p.txt", "--map", "map.json"], 0),
        s(&["merge-sets", "--graph", "h8.txt", "--sets", "sets.json", "--eps", "2", "--out", "merged.json"], 0),
        s(&["tree-decomp", "exact", "--graph", "h8.txt"], 0),
    ]
}

fn seed_inputs(dir: &Path) {
    std::fs::write(dir.join("c7.txt"), write_graph(&Graph::cycle(7))).unwrap();
    let h8 = corpus(8).into_iter().last().unwrap();
    std::fs::write(dir.join("h8.txt"), write_graph(&h8)).unwrap();
    std::fs::write(dir.join("sets.json"), "[[0], [3], [5], [7]]\n").unwrap();
}

fn digest_dir(dir: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let bytes = std::fs::read(&path).unwrap();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        out.insert(name, hex::encode(Sha256::digest(&bytes)));
    }
    out
}

fn criterion_8() -> Outcome {
    let script = cli_script();
    let mut runs = Vec::new();
    for threads in [1, 1, 4] {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        seed_inputs(dir.path());
        let mut stdout = Vec::new();
        for (args, want) in &script {
            let (code, out) = cli(dir.path(), threads, args);
            ensure(code == *want, || {
                format!("`{}` exited {code}, expected {want}", args.join(" "))
            })?;
            stdout.push(hex::encode(Sha256::digest(&out)));
        }
        runs.push((threads, digest_dir(dir.path()), stdout));
    }
    let (_, files, stdout) = &runs[0];
    for (threads, f, s) in &runs[1..] {
        for (name, hash) in files {
            ensure(f.get(name) == Some(hash), || {
                format!("{name} differs on a repeat with {threads} threads")
            })?;
        }
        for (i, hash) in stdout.iter().enumerate() {
            ensure(&s[i] == hash, || {
                format!("report of `{}` differs with {threads} threads", script[i].0.join(" "))
            })?;
        }
    }
    Ok(format!(
        "{} runs x 3 (threads 1, 1, 4): {} output files and all reports byte-identical",
        script.len(),
        files.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("power-graph pipeline", criterion_1),
        ("identity into power", criterion_2),
        ("gadget treewidth", criterion_3),
        ("2-fat witness", criterion_4),
        ("oracle equivalence", criterion_5),
        ("close-set merging", criterion_6),
        ("scaling transport", criterion_7),
        ("CLI determinism", criterion_8),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id} ({name}, {secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id} ({name}, {secs:.1}s): {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
