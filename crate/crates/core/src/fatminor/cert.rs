//! JSON certificate for a model:
//!
//! ```json
//! {"pattern": {"n": 3, "edges": [[0,1],[0,2],[1,2]]},
//!  "fatness": "3/1",
//!  "branch": {"0": [..], "1": [..], "2": [..]},
//!  "connector": {"0-1": [..], "0-2": [..], "1-2": [..]}}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{MinorModel, ModelError, PatternGraph};
use crate::graph::io::{format_rational, parse_rational};
use crate::graph::{Graph, GraphError, Vertex, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternJson {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelCertificate {
    pub pattern: PatternJson,
    pub fatness: String,
    pub branch: BTreeMap<String, Vec<Vertex>>,
    pub connector: BTreeMap<String, Vec<Vertex>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("bad fatness `{0}`")]
    Fatness(String),
    #[error("bad pattern: {0}")]
    Pattern(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown branch key `{0}`")]
    UnknownBranch(String),
    #[error("unknown connector key `{0}`")]
    UnknownConnector(String),
    #[error("no branch set for pattern vertex {0}")]
    MissingBranch(Vertex),
    #[error("no connector for pattern edge {0}-{1}")]
    MissingConnector(Vertex, Vertex),
}

pub fn model_to_json(h: &PatternGraph, m: &MinorModel) -> ModelCertificate {
    ModelCertificate {
        pattern: PatternJson {
            n: h.vertex_count(),
            edges: h.edges().iter().map(|&(u, v)| [u, v]).collect(),
        },
        fatness: format_rational(m.fatness),
        branch: m
            .branch
            .iter()
            .enumerate()
            .map(|(v, s)| (v.to_string(), s.as_slice().to_vec()))
            .collect(),
        connector: h
            .edges()
            .iter()
            .zip(&m.connector)
            .map(|(&(u, v), s)| (format!("{u}-{v}"), s.as_slice().to_vec()))
            .collect(),
    }
}

pub fn model_from_json(cert: &ModelCertificate) -> Result<(PatternGraph, MinorModel), CertError> {
    let graph = Graph::new(cert.pattern.n, cert.pattern.edges.iter().map(|e| (e[0], e[1])))?;
    let h = PatternGraph::new(graph)?;
    let fatness = parse_rational(&cert.fatness)
        .filter(|r| *r >= num_traits::Zero::zero())
        .ok_or_else(|| CertError::Fatness(cert.fatness.clone()))?;

    let mut branch = vec![None; h.vertex_count()];
    for (key, ids) in &cert.branch {
        let v: Vertex = key
            .parse()
            .ok()
            .filter(|&v| v < h.vertex_count())
            .ok_or_else(|| CertError::UnknownBranch(key.clone()))?;
        branch[v] = Some(ids.iter().copied().collect::<VertexSet>());
    }
    let mut connector = vec![None; h.edges().len()];
    for (key, ids) in &cert.connector {
        let e = key
            .split_once('-')
            .and_then(|(a, b)| Some((a.parse::<Vertex>().ok()?, b.parse::<Vertex>().ok()?)))
            .and_then(|(a, b)| h.graph().edge_index(a, b))
            .ok_or_else(|| CertError::UnknownConnector(key.clone()))?;
        connector[e] = Some(ids.iter().copied().collect::<VertexSet>());
    }
    let branch = branch
        .into_iter()
        .enumerate()
        .map(|(v, s)| s.ok_or(CertError::MissingBranch(v)))
        .collect::<Result<_, _>>()?;
    let connector = connector
        .into_iter()
        .zip(h.edges())
        .map(|(s, &(u, v))| s.ok_or(CertError::MissingConnector(u, v)))
        .collect::<Result<_, _>>()?;
    Ok((h, MinorModel::new(branch, connector, fatness)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Rational;

    #[test]
    fn round_trip() {
        let h = PatternGraph::named("k3").unwrap();
        let s = |v: &[usize]| v.iter().copied().collect::<VertexSet>();
        let m = MinorModel::new(
            vec![s(&[0]), s(&[2]), s(&[4])],
            vec![s(&[0, 1, 2]), s(&[4, 5, 0]), s(&[2, 3, 4])],
            Rational::new(3, 2),
        );
        let cert = model_to_json(&h, &m);
        assert_eq!(cert.fatness, "3/2");
        assert!(cert.connector.contains_key("0-2"));
        let text = serde_json::to_string(&cert).unwrap();
        let back: ModelCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(model_from_json(&back).unwrap(), (h, m));
    }

    #[test]
    fn reversed_connector_key_is_accepted() {
        let text = r#"{"pattern":{"n":2,"edges":[[0,1]]},"fatness":"1",
            "branch":{"0":[0],"1":[1]},"connector":{"1-0":[0,1]}}"#;
        let cert: ModelCertificate = serde_json::from_str(text).unwrap();
        let (_, m) = model_from_json(&cert).unwrap();
        assert_eq!(m.connector[0].as_slice(), &[0, 1]);
    }

    #[test]
    fn missing_parts_are_reported() {
        let text = r#"{"pattern":{"n":2,"edges":[[0,1]]},"fatness":"1/1",
            "branch":{"0":[0]},"connector":{"0-1":[0,1]}}"#;
        let cert: ModelCertificate = serde_json::from_str(text).unwrap();
        assert_eq!(model_from_json(&cert), Err(CertError::MissingBranch(1)));
        let text = r#"{"pattern":{"n":2,"edges":[[0,1]]},"fatness":"1/1",
            "branch":{"0":[0],"1":[1],"2":[2]},"connector":{"0-1":[0,1]}}"#;
        let cert: ModelCertificate = serde_json::from_str(text).unwrap();
        assert_eq!(
            model_from_json(&cert),
            Err(CertError::UnknownBranch("2".into()))
        );
    }
}
