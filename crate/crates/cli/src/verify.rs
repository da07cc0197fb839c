//! Checks that run on input texts, shared by the verify subcommands and by
//! `certify`, so a bundle can be rechecked from its embedded inputs alone.

use anyhow::{anyhow, Result};
use coarsegraph::fatminor::{
    model_from_json, model_separation, verify_model, ModelCertificate, ModelViolation,
    PairDistance, VerifyError,
};
use coarsegraph::graph::io::format_rational;
use coarsegraph::menger::{
    min_pairwise_distance, verify_spread_paths, SpreadJson, SpreadPathQuery, WitnessViolation,
};
use coarsegraph::quasiiso::{check_quasi_isometry, MapCertificate, QiViolation};
use coarsegraph::treedecomp::{validate, DecompositionJson, TdViolation, TreeDecomposition};
use coarsegraph::{Distance, Rational, VertexSet};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::input::{parse_graph, parse_json};
use crate::report::{Report, Status};

pub fn distance_json(d: Distance) -> Value {
    match d.finite() {
        Some(r) => format_rational(r).into(),
        None => "inf".into(),
    }
}

pub fn pair_json(p: &PairDistance) -> Value {
    json!({
        "first": p.first.to_string(),
        "second": p.second.to_string(),
        "distance": distance_json(p.distance),
    })
}

fn model_violation_json(v: &ModelViolation) -> Value {
    let mut out = match v {
        ModelViolation::MissingPart(p) => json!({"kind": "missing-part", "part": p.to_string()}),
        ModelViolation::DisconnectedPart(p) => {
            json!({"kind": "disconnected-part", "part": p.to_string()})
        }
        ModelViolation::MissingIncidence { connector, branch } => json!({
            "kind": "missing-incidence",
            "connector": connector.to_string(),
            "branch": branch.to_string(),
        }),
        ModelViolation::SeparationTooSmall {
            first,
            second,
            achieved,
            required,
        } => json!({
            "kind": "separation-too-small",
            "first": first.to_string(),
            "second": second.to_string(),
            "achieved": distance_json(*achieved),
            "required": format_rational(*required),
        }),
    };
    out["message"] = v.to_string().into();
    out
}

pub fn model_error_report(e: &VerifyError) -> Report {
    let violation = match e {
        VerifyError::Violation(v) => model_violation_json(v),
        VerifyError::Shape(s) => json!({"kind": "shape", "message": s.to_string()}),
    };
    Report::new(Status::Violation).with("violation", violation)
}

pub fn model(graph: &str, cert: &str, k: Option<Rational>) -> Result<Report> {
    let g = parse_graph("graph", graph)?;
    let cert: ModelCertificate = parse_json("certificate", cert)?;
    let (h, m) = model_from_json(&cert).map_err(|e| anyhow!("certificate: {e}"))?;
    let k = k.unwrap_or(m.fatness);
    if k < Rational::from_integer(0) {
        return Err(anyhow!("fatness must be non-negative"));
    }
    let report = match verify_model(&g, &h, &m, k) {
        Ok(()) => {
            let tightest = model_separation(&g, &h, &m)?;
            Report::new(Status::Ok)
                .with("fatness", format_rational(k))
                .with("pattern_vertices", h.vertex_count())
                .with("pattern_edges", h.edges().len())
                .with("tightest", tightest.as_ref().map(pair_json))
        }
        Err(e) => model_error_report(&e).with("fatness", format_rational(k)),
    };
    Ok(report)
}

pub fn qi_violation_json(v: &QiViolation) -> Value {
    json!({
        "kind": v.kind,
        "witness": [v.witness.0, v.witness.1],
        "achieved": distance_json(v.achieved),
        "required": distance_json(v.required),
        "message": v.to_string(),
    })
}

pub fn qi_map(domain: &str, codomain: &str, map: &str) -> Result<Report> {
    let x = parse_graph("domain", domain)?;
    let y = parse_graph("codomain", codomain)?;
    let cert: MapCertificate = parse_json("map", map)?;
    let m = cert.into_map(x, y).map_err(|e| anyhow!("map: {e}"))?;
    Ok(match check_quasi_isometry(&m) {
        Ok(()) => Report::new(Status::Ok)
            .with("q", format_rational(m.q()))
            .with("domain_vertices", m.domain().vertex_count())
            .with("codomain_vertices", m.codomain().vertex_count()),
        Err(v) => Report::new(Status::Violation)
            .with("q", format_rational(m.q()))
            .with("violation", qi_violation_json(&v)),
    })
}

fn td_violation_json(v: &TdViolation) -> Value {
    json!({"kind": v.kind(), "message": v.to_string()})
}

pub fn tree_decomposition(graph: &str, td: &str) -> Result<Report> {
    let g = parse_graph("graph", graph)?;
    let j: DecompositionJson = parse_json("decomposition", td)?;
    let td = TreeDecomposition::from_json(&j).map_err(|e| anyhow!("decomposition: {e}"))?;
    Ok(match validate(&g, &td) {
        Ok(()) => Report::new(Status::Ok)
            .with("width", td.width())
            .with("bags", td.bags().len()),
        Err(v) => Report::new(Status::Violation)
            .with("width", td.width())
            .with("violation", td_violation_json(&v)),
    })
}

/// The query part of a spread path check, as recorded in bundles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadParams {
    #[serde(rename = "S")]
    pub sources: Vec<usize>,
    #[serde(rename = "T")]
    pub sinks: Vec<usize>,
    pub k: u64,
    pub dist: u64,
}

impl SpreadParams {
    pub fn query(&self, budget: u64) -> Result<SpreadPathQuery> {
        if self.sources.is_empty() || self.sinks.is_empty() {
            return Err(anyhow!("source and sink sets must be non-empty"));
        }
        Ok(SpreadPathQuery {
            sources: self.sources.iter().copied().collect::<VertexSet>(),
            sinks: self.sinks.iter().copied().collect::<VertexSet>(),
            count: usize::try_from(self.k)?,
            distance: self.dist,
            budget,
        })
    }
}

fn spread_violation_json(v: &WitnessViolation) -> Value {
    let kind = match v {
        WitnessViolation::Count { .. } => "count",
        WitnessViolation::NotAPath(_) => "not-a-path",
        WitnessViolation::Ends(_) => "ends",
        WitnessViolation::TooClose(..) => "too-close",
    };
    json!({"kind": kind, "message": v.to_string()})
}

pub fn spread_paths(graph: &str, witness: &str, params: &SpreadParams) -> Result<Report> {
    let g = parse_graph("graph", graph)?;
    let w: SpreadJson = parse_json("witness", witness)?;
    let q = params.query(0)?;
    q.sources.check_range(g.vertex_count())?;
    q.sinks.check_range(g.vertex_count())?;
    if g.is_weighted() {
        return Err(anyhow!("graph: spread paths need an unweighted graph"));
    }
    if let Err(v) = verify_spread_paths(&g, &q, &w.paths) {
        return Ok(Report::new(Status::Violation).with("violation", spread_violation_json(&v)));
    }
    let actual = min_pairwise_distance(&g, &w.paths);
    let actual_int = actual.finite().map(|r| r.to_integer() as u64);
    if actual_int != w.min_pairwise_distance {
        return Ok(Report::new(Status::Violation).with(
            "violation",
            json!({
                "kind": "distance-mismatch",
                "message": format!(
                    "witness claims minimum distance {:?}, actual {}",
                    w.min_pairwise_distance, actual
                ),
            }),
        ));
    }
    Ok(Report::new(Status::Ok)
        .with("paths", w.paths.len())
        .with("min_pairwise_distance", actual_int))
}
