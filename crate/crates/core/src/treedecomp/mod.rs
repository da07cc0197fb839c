//! Tree decompositions: the structure, its validator, explicit
//! decompositions of the tree-with-leaf-path and gadget families, and an
//! exact treewidth oracle for tiny graphs.

mod build;
mod exact;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use build::{decompose_n_gadget, decompose_tree_leaf_path};
pub use exact::{exact_treewidth, ExactError, EXACT_DEFAULT_CAP};

use crate::graph::{Graph, Vertex, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    tree: Graph,
    bags: Vec<VertexSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("{bags} bags for a tree on {nodes} nodes")]
    BagCount { nodes: usize, bags: usize },
    #[error("index structure is not a tree")]
    NotATree,
    #[error("bad tree edge: {0}")]
    Edge(String),
}

impl TreeDecomposition {
    pub fn new(tree: Graph, bags: Vec<VertexSet>) -> Result<Self, TreeError> {
        if tree.vertex_count() != bags.len() {
            return Err(TreeError::BagCount {
                nodes: tree.vertex_count(),
                bags: bags.len(),
            });
        }
        let nodes = tree.vertex_count();
        let connected = nodes == 0
            || crate::graph::is_connected_set(&tree, &VertexSet::full(nodes));
        if tree.is_weighted() || !connected || tree.edge_count() + 1 != nodes.max(1) {
            return Err(TreeError::NotATree);
        }
        Ok(TreeDecomposition { tree, bags })
    }

    pub fn from_parts(
        tree_edges: &[(usize, usize)],
        bags: Vec<VertexSet>,
    ) -> Result<Self, TreeError> {
        let edges = tree_edges.iter().map(|&(a, b)| (a.min(b), a.max(b)));
        let tree = Graph::new(bags.len(), edges).map_err(|e| TreeError::Edge(e.to_string()))?;
        Self::new(tree, bags)
    }

    pub fn tree(&self) -> &Graph {
        &self.tree
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    /// Largest bag size minus one; zero when every bag is empty or there
    /// are no bags.
    pub fn width(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn to_json(&self) -> DecompositionJson {
        DecompositionJson {
            tree_edges: self.tree.edges().iter().map(|&(a, b)| [a, b]).collect(),
            bags: self.bags.iter().map(|b| b.as_slice().to_vec()).collect(),
        }
    }

    pub fn from_json(j: &DecompositionJson) -> Result<Self, TreeError> {
        let edges: Vec<(usize, usize)> = j.tree_edges.iter().map(|e| (e[0], e[1])).collect();
        let bags = j.bags.iter().map(|b| b.iter().copied().collect()).collect();
        Self::from_parts(&edges, bags)
    }
}

pub fn width(td: &TreeDecomposition) -> usize {
    td.width()
}

/// `{"tree_edges": [[a, b]], "bags": [[ids]]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub tree_edges: Vec<[usize; 2]>,
    pub bags: Vec<Vec<Vertex>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    VertexOutOfRange { node: usize, vertex: Vertex },
    VertexMissing(Vertex),
    EdgeUncovered(Vertex, Vertex),
    /// The tree nodes whose bags hold `vertex` do not form a subtree.
    Disconnected { vertex: Vertex, nodes: Vec<usize> },
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::VertexOutOfRange { node, vertex } => {
                write!(f, "bag {node} holds {vertex}, which is not a host vertex")
            }
            TdViolation::VertexMissing(v) => write!(f, "vertex {v} is in no bag"),
            TdViolation::EdgeUncovered(u, v) => write!(f, "edge {u}-{v} is in no bag"),
            TdViolation::Disconnected { vertex, nodes } => {
                write!(f, "bags holding {vertex} are disconnected: nodes {nodes:?}")
            }
        }
    }
}

impl TdViolation {
    pub fn kind(&self) -> &'static str {
        match self {
            TdViolation::VertexOutOfRange { .. } => "vertex-out-of-range",
            TdViolation::VertexMissing(_) => "vertex-missing",
            TdViolation::EdgeUncovered(..) => "edge-uncovered",
            TdViolation::Disconnected { .. } => "disconnected",
        }
    }
}

/// Checks every vertex is covered, every edge lies in a bag and every
/// vertex's bags form a subtree. Reports the violation for the smallest
/// vertex (or edge), checking coverage, then edges, then connectivity.
pub fn validate(g: &Graph, td: &TreeDecomposition) -> Result<(), TdViolation> {
    let n = g.vertex_count();
    for (node, bag) in td.bags.iter().enumerate() {
        if let Some(v) = bag.iter().find(|&v| v >= n) {
            return Err(TdViolation::VertexOutOfRange { node, vertex: v });
        }
    }
    // Vertex -> nodes holding it, in node order.
    let mut offsets = vec![0usize; n + 1];
    for bag in &td.bags {
        for v in bag.iter() {
            offsets[v + 1] += 1;
        }
    }
    for v in 0..n {
        offsets[v + 1] += offsets[v];
    }
    let mut fill = offsets.clone();
    let mut holders = vec![0usize; offsets[n]];
    for (node, bag) in td.bags.iter().enumerate() {
        for v in bag.iter() {
            holders[fill[v]] = node;
            fill[v] += 1;
        }
    }
    let nodes_of = |v: Vertex| &holders[offsets[v]..offsets[v + 1]];

    if let Some(v) = (0..n).find(|&v| nodes_of(v).is_empty()) {
        return Err(TdViolation::VertexMissing(v));
    }

    let uncovered = g
        .edges()
        .par_iter()
        .position_first(|&(u, v)| !sorted_meet(nodes_of(u), nodes_of(v)));
    if let Some(i) = uncovered {
        let (u, v) = g.edges()[i];
        return Err(TdViolation::EdgeUncovered(u, v));
    }

    // The nodes holding v induce a forest; it is a tree iff it has one
    // edge fewer than nodes.
    let mut inner_edges = vec![0usize; n];
    for &(a, b) in td.tree.edges() {
        let (small, large) = if td.bags[a].len() <= td.bags[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        for v in td.bags[small].iter() {
            if td.bags[large].contains(v) {
                inner_edges[v] += 1;
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| inner_edges[v] + 1 != nodes_of(v).len()) {
        return Err(TdViolation::Disconnected {
            vertex: v,
            nodes: nodes_of(v).to_vec(),
        });
    }
    Ok(())
}

fn sorted_meet(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Incrementally assembles a decomposition; node ids are insertion order.
#[derive(Default)]
pub(crate) struct TdBuilder {
    edges: Vec<(usize, usize)>,
    bags: Vec<VertexSet>,
}

impl TdBuilder {
    pub(crate) fn node(&mut self, bag: VertexSet, parent: Option<usize>) -> usize {
        let id = self.bags.len();
        self.bags.push(bag);
        if let Some(p) = parent {
            self.edges.push((p, id));
        }
        id
    }

    pub(crate) fn finish(self) -> TreeDecomposition {
        TreeDecomposition::from_parts(&self.edges, self.bags).expect("builder produces a tree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn single_bag() {
        let g = Graph::complete(4);
        let td = TreeDecomposition::new(Graph::empty(1), vec![VertexSet::full(4)]).unwrap();
        assert_eq!(validate(&g, &td), Ok(()));
        assert_eq!(td.width(), 3);
    }

    #[test]
    fn path_bags_along_a_path() {
        let g = Graph::path(6);
        let bags = (0..5).map(|i| set(&[i, i + 1])).collect();
        let td = TreeDecomposition::new(Graph::path(5), bags).unwrap();
        assert_eq!(validate(&g, &td), Ok(()));
        assert_eq!(width(&td), 1);
    }

    #[test]
    fn violations() {
        let g = Graph::path(6);
        let mut bags: Vec<VertexSet> = (0..5).map(|i| set(&[i, i + 1])).collect();
        bags[2] = set(&[2]);
        let td = TreeDecomposition::new(Graph::path(5), bags).unwrap();
        assert_eq!(validate(&g, &td), Err(TdViolation::EdgeUncovered(2, 3)));

        let bags = vec![set(&[0, 1]), set(&[2, 3]), set(&[1, 2])];
        let td = TreeDecomposition::new(Graph::path(3), bags).unwrap();
        assert_eq!(
            validate(&Graph::path(4), &td),
            Err(TdViolation::Disconnected {
                vertex: 1,
                nodes: vec![0, 2]
            })
        );

        let td = TreeDecomposition::new(Graph::empty(1), vec![set(&[0, 1])]).unwrap();
        assert_eq!(validate(&Graph::path(3), &td), Err(TdViolation::VertexMissing(2)));
        assert_eq!(
            validate(&Graph::path(1), &td),
            Err(TdViolation::VertexOutOfRange { node: 0, vertex: 1 })
        );
    }

    #[test]
    fn index_structure_must_be_a_tree() {
        let bags = vec![VertexSet::new(); 3];
        assert_eq!(
            TreeDecomposition::new(Graph::cycle(3), bags.clone()),
            Err(TreeError::NotATree)
        );
        assert_eq!(
            TreeDecomposition::new(Graph::empty(3), bags),
            Err(TreeError::NotATree)
        );
        assert!(matches!(
            TreeDecomposition::new(Graph::path(2), vec![]),
            Err(TreeError::BagCount { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let bags = vec![set(&[0, 1]), set(&[1, 2])];
        let td = TreeDecomposition::new(Graph::path(2), bags).unwrap();
        let text = serde_json::to_string(&td.to_json()).unwrap();
        assert_eq!(text, r#"{"tree_edges":[[0,1]],"bags":[[0,1],[1,2]]}"#);
        let back: DecompositionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(TreeDecomposition::from_json(&back).unwrap(), td);
    }
}
