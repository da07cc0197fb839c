use anyhow::{anyhow, Result};
use coarsegraph::fatminor::{
    find_fat_minor, inflate_model, merge_close_sets, model_from_json, model_to_json,
    verify_model, InflateError, ModelCertificate,
};
use coarsegraph::graph::io::{format_rational, write_graph};
use coarsegraph::graph::power_graph;
use coarsegraph::menger::find_spread_paths;
use coarsegraph::quasiiso::{check_quasi_isometry, identity_into_power, MapCertificate};
use coarsegraph::{Rational, Verdict, VertexSet};
use serde_json::{json, Value};

use crate::args::{FindArgs, InflateArgs, MergeArgs, PipelineArgs, PowerQiArgs, SpreadArgs};
use crate::input::{
    json_text, load_graph, load_json, load_labels, load_pattern, read_text, resolve_set,
    sha256_hex, write_json, write_text,
};
use crate::report::{Report, Status};
use crate::verify::{self, model_error_report, qi_violation_json, SpreadParams};

fn verdict_fields<T>(report: Report, v: &Verdict<T>) -> Report {
    match v {
        Verdict::Inconclusive { expansions } => report.with("expansions", expansions),
        _ => report,
    }
}

pub fn find(a: &FindArgs) -> Result<Report> {
    let g = load_graph(&a.graph)?;
    let h = load_pattern(&a.pattern)?;
    let verdict = find_fat_minor(&g, &h, a.k, a.budget)?;
    let mut report = verdict_fields(
        Report::new(Status::of_verdict(&verdict)).with("fatness", format_rational(a.k)),
        &verdict,
    );
    if let Verdict::Found(m) = &verdict {
        let cert = model_to_json(&h, m);
        if let Some(path) = &a.out {
            write_json(path, &cert)?;
        }
        report.set("certificate_sha256", sha256_hex(json_text(&cert).as_bytes()));
        report.set("certificate", cert);
    }
    Ok(report)
}

pub fn inflate(a: &InflateArgs) -> Result<Report> {
    let g = load_graph(&a.graph)?;
    let cert: ModelCertificate = load_json(&a.cert)?;
    let (h, m3) = model_from_json(&cert).map_err(|e| anyhow!("{}: {e}", a.cert.display()))?;
    let k = usize::try_from(a.k)?;
    match inflate_model(&g, &h, k, &m3) {
        Ok(m) => {
            let cert = model_to_json(&h, &m);
            if let Some(path) = &a.out {
                write_json(path, &cert)?;
            }
            Ok(Report::new(Status::Ok)
                .with("fatness", format_rational(m.fatness))
                .with("certificate_sha256", sha256_hex(json_text(&cert).as_bytes()))
                .with("certificate", cert))
        }
        Err(InflateError::Precondition(e)) => {
            Ok(model_error_report(&e).with("stage", "input model in the power graph"))
        }
        Err(e @ (InflateError::Unroutable(..) | InflateError::Unverified(_))) => {
            Ok(Report::new(Status::Violation)
                .with("violation", json!({"kind": "inflation", "message": e.to_string()})))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn merge(a: &MergeArgs) -> Result<Report> {
    let g = load_graph(&a.graph)?;
    let raw: Vec<Vec<usize>> = load_json(&a.sets)?;
    let sets: Vec<VertexSet> = raw.into_iter().map(|s| s.into_iter().collect()).collect();
    let out = merge_close_sets(&g, &sets, a.eps)?;
    let lists: Vec<Vec<usize>> = out.sets.iter().map(|s| s.as_slice().to_vec()).collect();
    if let Some(path) = &a.out {
        write_json(path, &lists)?;
    }
    Ok(Report::new(Status::Ok)
        .with("eps", format_rational(a.eps))
        .with("merges", out.merges)
        .with("index_map", &out.index_map)
        .with("sets", lists))
}

pub fn power_qi(a: &PowerQiArgs) -> Result<Report> {
    let g = load_graph(&a.graph)?;
    let m = identity_into_power(&g, usize::try_from(a.k)?)?;
    if let Some(path) = &a.power_out {
        write_text(path, &write_graph(m.codomain()))?;
    }
    let cert = MapCertificate::from_map(&m);
    if let Some(path) = &a.out {
        write_json(path, &cert)?;
    }
    let report = match check_quasi_isometry(&m) {
        Ok(()) => Report::new(Status::Ok),
        Err(v) => Report::new(Status::Violation).with("violation", qi_violation_json(&v)),
    };
    Ok(report
        .with("q", format_rational(m.q()))
        .with("vertices", g.vertex_count())
        .with("power_edges", m.codomain().edge_count())
        .with("certificate", cert))
}

pub fn spread(a: &SpreadArgs) -> Result<Report> {
    let q = &a.query;
    let text = read_text(&q.graph)?;
    let labels = q.labels.as_deref().map(load_labels).transpose()?;
    let params = SpreadParams {
        sources: resolve_set(&q.s_labels, labels.as_ref())?.into_vec(),
        sinks: resolve_set(&q.t_labels, labels.as_ref())?.into_vec(),
        k: q.k,
        dist: q.dist,
    };
    if let Some(path) = &a.check {
        return verify::spread_paths(&text, &read_text(path)?, &params);
    }
    let g = crate::input::parse_graph(&q.graph.display().to_string(), &text)?;
    let verdict = find_spread_paths(&g, &params.query(a.budget)?)?;
    let mut report = verdict_fields(Report::new(Status::of_verdict(&verdict)), &verdict);
    if let Verdict::Found(w) = &verdict {
        let cert = w.to_json();
        if let Some(path) = &a.out {
            write_json(path, &cert)?;
        }
        report.set("min_pairwise_distance", cert.min_pairwise_distance);
        report.set("certificate", cert);
    }
    Ok(report)
}

fn verdict_json<T>(v: &Verdict<T>) -> Value {
    match v {
        Verdict::Inconclusive { expansions } => {
            json!({"verdict": "inconclusive", "expansions": expansions})
        }
        other => json!({"verdict": Status::of_verdict(other).as_str()}),
    }
}

/// Searches the host at fatness `k` and the `k`-th power at fatness 3. A
/// power model must inflate to a verified host model, and an exhausted host
/// search rules out a power model.
pub fn pipeline(a: &PipelineArgs) -> Result<Report> {
    let g = load_graph(&a.host)?;
    let h = load_pattern(&a.pattern)?;
    let k = usize::try_from(a.k)?;
    let kr = Rational::from_integer(i64::try_from(a.k)?);
    let host = find_fat_minor(&g, &h, kr, a.budget)?;
    let gk = power_graph(&g, k)?;
    let power = find_fat_minor(&gk, &h, Rational::from_integer(3), a.budget)?;

    let mut report = Report::new(Status::Ok)
        .with("host", verdict_json(&host))
        .with("power", verdict_json(&power));
    let mut problems = Vec::new();
    let mut checked = false;
    if let Verdict::Found(m3) = &power {
        checked = true;
        match inflate_model(&g, &h, k, m3) {
            Ok(m) => {
                if let Err(e) = verify_model(&g, &h, &m, kr) {
                    problems.push(format!("inflated model fails at fatness {k}: {e}"));
                }
                let cert = model_to_json(&h, &m);
                if let Some(path) = &a.out {
                    write_json(path, &cert)?;
                }
                report.set("certificate", cert);
            }
            Err(e) => problems.push(format!("inflation failed: {e}")),
        }
        if host == Verdict::NoneExhaustive {
            problems.push("host search exhausted but the power graph has a model".into());
        }
    }
    if host == Verdict::NoneExhaustive && power == Verdict::NoneExhaustive {
        checked = true;
    }
    if !problems.is_empty() {
        report.status = Status::Violation;
        report.set("problems", problems);
    } else if !checked {
        let conclusive = !matches!(host, Verdict::Inconclusive { .. })
            && !matches!(power, Verdict::Inconclusive { .. });
        if !conclusive {
            report.status = Status::Inconclusive;
        }
    }
    Ok(report)
}
