use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use coarsegraph::fatminor::PatternGraph;
use coarsegraph::graph::io::{read_graph, read_labels, Labels};
use coarsegraph::{Graph, Vertex, VertexSet};
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn parse_graph(name: &str, text: &str) -> Result<Graph> {
    read_graph(text).map_err(|e| anyhow!("{name}: {e}"))
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&path.display().to_string(), &read_text(path)?)
}

pub fn parse_json<T: DeserializeOwned>(name: &str, text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| anyhow!("{name}: line {} column {}: {e}", e.line(), e.column()))
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse_json(&path.display().to_string(), &read_text(path)?)
}

pub fn load_labels(path: &Path) -> Result<Labels> {
    read_labels(&read_text(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

/// A named pattern, or a graph file.
pub fn load_pattern(spec: &str) -> Result<PatternGraph> {
    if let Some(p) = PatternGraph::named(spec) {
        return Ok(p);
    }
    let path = Path::new(spec);
    if !path.exists() {
        bail!("unknown pattern `{spec}`: not a built-in name or a file");
    }
    Ok(PatternGraph::new(load_graph(path)?)?)
}

/// A label name from `labels`, or comma-separated vertex ids.
pub fn resolve_set(spec: &str, labels: Option<&Labels>) -> Result<VertexSet> {
    if let Some(value) = labels.and_then(|l| l.get(spec)) {
        return Ok(value.vertices().into_iter().collect());
    }
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<Vertex>()
                .map_err(|_| anyhow!("`{spec}` is neither a label nor a list of vertex ids"))
        })
        .collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn json_text(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("certificates serialize");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    write_text(path, &json_text(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use coarsegraph::graph::io::LabelValue;

    #[test]
    fn sets_from_labels_or_ids() {
        let mut labels = Labels::new();
        labels.insert("S".into(), LabelValue::List(vec![4, 1, 2]));
        labels.insert("root".into(), LabelValue::Vertex(0));
        let set = |s| resolve_set(s, Some(&labels)).unwrap().into_vec();
        assert_eq!(set("S"), vec![1, 2, 4]);
        assert_eq!(set("root"), vec![0]);
        assert_eq!(set("3, 5"), vec![3, 5]);
        assert!(resolve_set("T", Some(&labels)).is_err());
        assert!(resolve_set("", None).is_err());
    }

    #[test]
    fn diagnostics_name_the_input() {
        let e = parse_graph("h.txt", "3 2 0\n1 2\n0 1\n").unwrap_err().to_string();
        assert!(e.starts_with("h.txt: "), "{e}");
        let e = parse_json::<Vec<u32>>("s.json", "[1,\n 2,,]").unwrap_err().to_string();
        assert!(e.starts_with("s.json: line 2 column"), "{e}");
    }

    #[test]
    fn patterns_by_name() {
        assert_eq!(load_pattern("K4").unwrap().graph().edge_count(), 6);
        assert!(load_pattern("no-such-pattern").is_err());
    }

    #[test]
    fn json_text_is_pretty_with_newline() {
        assert_eq!(json_text(&[1]), "[\n  1\n]\n");
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
