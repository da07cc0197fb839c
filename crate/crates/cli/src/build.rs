use anyhow::{bail, Result};
use coarsegraph::constructions::{
    build_2fat_witness, build_g, build_g_within, build_h, build_n_gadget_within, build_tree_leaf_path,
    paper_params, AssemblyParams, GAssembly, GadgetParams, HGraph, NGadget, TreeLeafPath,
};
use coarsegraph::fatminor::model_to_json;
use coarsegraph::graph::io::{write_graph, write_labels, Labels};
use coarsegraph::treedecomp::{decompose_n_gadget, decompose_tree_leaf_path, validate};
use coarsegraph::Graph;
use serde_json::json;

use crate::args::{AssemblyChoice, ConstructArgs, Family, FamilyParams, WitnessArgs};
use crate::input::{json_text, load_graph, sha256_hex, write_json, write_text};
use crate::report::{Report, Status};
use crate::verify::pair_json;

const LOUD_VERTICES: u128 = 100_000;

pub enum Built {
    TreeLeafPath(TreeLeafPath),
    NGadget(Box<NGadget>),
    H(HGraph),
    G(Box<GAssembly>),
}

impl Built {
    pub fn graph(&self) -> &Graph {
        match self {
            Built::TreeLeafPath(t) => &t.graph,
            Built::NGadget(n) => &n.graph,
            Built::H(h) => &h.graph,
            Built::G(g) => &g.graph,
        }
    }

    pub fn labels(&self) -> Labels {
        match self {
            Built::TreeLeafPath(t) => t.labels(),
            Built::NGadget(n) => n.labels(),
            Built::H(h) => h.labels(),
            Built::G(g) => g.labels(),
        }
    }
}

fn take<const N: usize>(params: &[u64], what: &str) -> Result<[u64; N]> {
    match <[u64; N]>::try_from(params) {
        Ok(p) => Ok(p),
        Err(_) => bail!("--params needs {N} values ({what}), got {}", params.len()),
    }
}

fn announce(count: Option<u128>) {
    if let Some(n) = count.filter(|&n| n >= LOUD_VERTICES) {
        eprintln!("building a graph with {n} vertices");
    }
}

pub fn assembly_params(q: Option<u32>, params: &[u64]) -> Result<AssemblyParams> {
    if let Some(q) = q {
        return Ok(paper_params(q)?);
    }
    let [n, d, s, t, c] = take::<5>(params, "clique,depth,path,subdivision,connector")?;
    Ok(AssemblyParams::new(
        n as usize,
        u32::try_from(d)?,
        s as usize,
        t as usize,
        c as usize,
    )?)
}

pub fn build_family(f: &FamilyParams) -> Result<Built> {
    if f.q.is_some() && f.family != Family::G {
        bail!("--q applies to the g family only");
    }
    Ok(match f.family {
        Family::TreeLeafPath => {
            let [d] = take::<1>(&f.params, "depth")?;
            Built::TreeLeafPath(build_tree_leaf_path(u32::try_from(d)?)?)
        }
        Family::NGadget => {
            let [d, s] = take::<2>(&f.params, "depth,path")?;
            let p = GadgetParams::new(u32::try_from(d)?, s as usize)?;
            announce(p.vertex_count());
            Built::NGadget(Box::new(build_n_gadget_within(p, f.max_vertices)?))
        }
        Family::H => {
            let [n] = take::<1>(&f.params, "clique")?;
            Built::H(build_h(n as usize)?)
        }
        Family::G => {
            let p = assembly_params(f.q, &f.params)?;
            announce(p.vertex_count());
            Built::G(Box::new(build_g_within(p, f.max_vertices)?))
        }
    })
}

pub fn construct(a: &ConstructArgs) -> Result<Report> {
    let built = build_family(&a.family)?;
    let g = built.graph();
    let text = write_graph(g);
    write_text(&a.out, &text)?;
    if let Some(path) = &a.labels {
        write_text(path, &write_labels(&built.labels()))?;
    }
    Ok(Report::new(Status::Ok)
        .with("vertices", g.vertex_count())
        .with("edges", g.edge_count())
        .with("graph_sha256", sha256_hex(text.as_bytes())))
}

pub fn tree_decomp_build(
    f: &FamilyParams,
    out: Option<&std::path::Path>,
    graph_out: Option<&std::path::Path>,
) -> Result<Report> {
    let built = build_family(f)?;
    let td = match &built {
        Built::TreeLeafPath(t) => decompose_tree_leaf_path(t),
        Built::NGadget(n) => decompose_n_gadget(n),
        _ => bail!("tree-decomp build supports tree-leaf-path and n-gadget"),
    };
    let g = built.graph();
    if let Some(path) = graph_out {
        write_text(path, &write_graph(g))?;
    }
    let cert = td.to_json();
    if let Some(path) = out {
        write_json(path, &cert)?;
    }
    let report = match validate(g, &td) {
        Ok(()) => Report::new(Status::Ok),
        Err(v) => Report::new(Status::Violation)
            .with("violation", json!({"kind": v.kind(), "message": v.to_string()})),
    };
    Ok(report
        .with("vertices", g.vertex_count())
        .with("width", td.width())
        .with("bags", td.bags().len())
        .with("certificate_sha256", sha256_hex(json_text(&cert).as_bytes())))
}

pub fn witness(a: &WitnessArgs) -> Result<Report> {
    let AssemblyChoice { q, params } = &a.assembly;
    let p = assembly_params(*q, params)?;
    announce(p.vertex_count());
    let asm = build_g(p)?;
    if let Some(path) = &a.graph {
        if load_graph(path)? != asm.graph {
            bail!("{} is not the assembly for these parameters", path.display());
        }
    }
    let w = build_2fat_witness(&asm)?;
    let cert = model_to_json(&w.pattern, &w.model);
    if let Some(path) = &a.out {
        write_json(path, &cert)?;
    }
    Ok(Report::new(Status::Ok)
        .with("fatness", "2/1")
        .with("vertices", asm.graph.vertex_count())
        .with("twisted", w.twisted)
        .with("tightest", pair_json(&w.tightest))
        .with("certificate_sha256", sha256_hex(json_text(&cert).as_bytes()))
        .with("certificate", cert))
}
