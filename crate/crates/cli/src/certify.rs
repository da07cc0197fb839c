use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Result};
use coarsegraph::graph::io::{format_rational, parse_rational};
use coarsegraph::Rational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{CertifyCommand, SpreadQueryArgs};
use crate::input::{load_json, load_labels, read_text, resolve_set, sha256_hex, write_json};
use crate::report::{Report, Status};
use crate::verify::{self, SpreadParams};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleInput {
    pub sha256: String,
    pub content: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub kind: String,
    pub tool: String,
    pub version: String,
    pub inputs: BTreeMap<String, BundleInput>,
    pub parameters: Value,
    pub payload: Value,
    pub verdict: String,
    pub report: Value,
}

/// Input holding the certificate of each kind.
fn payload_key(kind: &str) -> Result<&'static str> {
    Ok(match kind {
        "model" | "witness-2fat" => "certificate",
        "qi-map" => "map",
        "tree-decomposition" => "decomposition",
        "spread-paths" => "witness",
        other => bail!("unknown bundle kind `{other}`"),
    })
}

fn fatness_param(parameters: &Value) -> Result<Option<Rational>> {
    match parameters.get("k") {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => parse_rational(s)
            .map(Some)
            .ok_or_else(|| anyhow!("bad fatness parameter `{s}`")),
        Some(other) => bail!("bad fatness parameter {other}"),
    }
}

fn check(kind: &str, inputs: &BTreeMap<String, String>, parameters: &Value) -> Result<Report> {
    let get = |name: &str| {
        inputs
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| anyhow!("bundle lacks input `{name}`"))
    };
    match kind {
        "model" | "witness-2fat" => {
            verify::model(get("graph")?, get("certificate")?, fatness_param(parameters)?)
        }
        "qi-map" => verify::qi_map(get("domain")?, get("codomain")?, get("map")?),
        "tree-decomposition" => verify::tree_decomposition(get("graph")?, get("decomposition")?),
        "spread-paths" => {
            let params: SpreadParams = serde_json::from_value(parameters.clone())?;
            verify::spread_paths(get("graph")?, get("witness")?, &params)
        }
        other => bail!("unknown bundle kind `{other}`"),
    }
}

fn bundle(kind: &str, files: &[(&str, &Path)], parameters: Value, out: &Path) -> Result<Report> {
    let mut inputs = BTreeMap::new();
    for (name, path) in files {
        inputs.insert(name.to_string(), read_text(path)?);
    }
    let key = payload_key(kind)?;
    let payload: Value = serde_json::from_str(&inputs[key])
        .map_err(|e| anyhow!("{key}: line {} column {}: {e}", e.line(), e.column()))?;
    let report = check(kind, &inputs, &parameters)?;
    let hashes: BTreeMap<String, String> = inputs
        .iter()
        .map(|(k, v)| (k.clone(), sha256_hex(v.as_bytes())))
        .collect();
    let doc = Bundle {
        kind: kind.to_string(),
        tool: "coarsegraph".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        inputs: inputs
            .into_iter()
            .map(|(k, content)| {
                let sha256 = hashes[&k].clone();
                (k, BundleInput { sha256, content })
            })
            .collect(),
        parameters,
        payload,
        verdict: report.status.as_str().into(),
        report: report.body(),
    };
    write_json(out, &doc)?;
    Ok(Report::new(report.status)
        .with("kind", kind)
        .with("verdict", report.status.as_str())
        .with("inputs", hashes))
}

fn spread_params(q: &SpreadQueryArgs) -> Result<SpreadParams> {
    let labels = q.labels.as_deref().map(load_labels).transpose()?;
    Ok(SpreadParams {
        sources: resolve_set(&q.s_labels, labels.as_ref())?.into_vec(),
        sinks: resolve_set(&q.t_labels, labels.as_ref())?.into_vec(),
        k: q.k,
        dist: q.dist,
    })
}

fn recheck(path: &Path) -> Result<Report> {
    let b: Bundle = load_json(path)?;
    let fail = |kind: &str, message: String| {
        Ok(Report::new(Status::Violation)
            .with("violation", json!({"kind": kind, "message": message})))
    };
    for (name, input) in &b.inputs {
        if sha256_hex(input.content.as_bytes()) != input.sha256 {
            return fail("hash-mismatch", format!("input `{name}` does not match its hash"));
        }
    }
    let key = payload_key(&b.kind)?;
    let embedded = b
        .inputs
        .get(key)
        .ok_or_else(|| anyhow!("bundle lacks input `{key}`"))?;
    if serde_json::from_str::<Value>(&embedded.content).ok().as_ref() != Some(&b.payload) {
        return fail("payload-mismatch", format!("payload differs from input `{key}`"));
    }
    let contents = b
        .inputs
        .iter()
        .map(|(k, v)| (k.clone(), v.content.clone()))
        .collect();
    let report = check(&b.kind, &contents, &b.parameters)?;
    if report.status.as_str() != b.verdict || report.body() != b.report {
        return fail(
            "verdict-mismatch",
            format!("recorded {}, recomputed {}", b.verdict, report.status.as_str()),
        );
    }
    Ok(Report::new(Status::Ok)
        .with("kind", &b.kind)
        .with("verdict", &b.verdict))
}

pub fn run(c: &CertifyCommand) -> Result<Report> {
    match c {
        CertifyCommand::Model { graph, cert, k, out } => bundle(
            "model",
            &[("graph", graph), ("certificate", cert)],
            json!({"k": k.map(format_rational)}),
            out,
        ),
        CertifyCommand::Witness { graph, cert, out } => bundle(
            "witness-2fat",
            &[("graph", graph), ("certificate", cert)],
            json!({"k": "2/1"}),
            out,
        ),
        CertifyCommand::QiMap {
            domain,
            codomain,
            map,
            out,
        } => bundle(
            "qi-map",
            &[("domain", domain), ("codomain", codomain), ("map", map)],
            json!({}),
            out,
        ),
        CertifyCommand::TreeDecomposition { graph, td, out } => bundle(
            "tree-decomposition",
            &[("graph", graph), ("decomposition", td)],
            json!({}),
            out,
        ),
        CertifyCommand::SpreadPaths {
            query,
            witness,
            out,
        } => bundle(
            "spread-paths",
            &[("graph", &query.graph), ("witness", witness)],
            serde_json::to_value(spread_params(query)?)?,
            out,
        ),
        CertifyCommand::Recheck { bundle } => recheck(bundle),
    }
}
