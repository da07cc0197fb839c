//! Coarse graph theory toolkit: fat minor models, power graphs,
//! quasi-isometries between graphs, tree decompositions, spread path
//! packings, and the gadget graph families these objects are tested on.
//!
//! All metric computations are exact. Unweighted graphs use hop distance,
//! weighted graphs use rational edge lengths (see [`graph::Rational`]).

pub mod constructions;
pub mod corpus;
pub mod fatminor;
pub mod graph;
pub mod menger;
pub mod quasiiso;
pub mod treedecomp;

pub use graph::{Distance, Graph, GraphBuilder, GraphError, Rational, Vertex, VertexSet};

/// Outcome of a bounded exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<T> {
    Found(T),
    /// The whole search space was explored without success.
    NoneExhaustive,
    /// The node-expansion budget ran out first.
    Inconclusive { expansions: u64 },
}

impl<T> Verdict<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, Verdict::Found(_))
    }

    pub fn found(self) -> Option<T> {
        match self {
            Verdict::Found(t) => Some(t),
            _ => None,
        }
    }

    /// Short lowercase tag used in reports.
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Found(_) => "found",
            Verdict::NoneExhaustive => "none",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}
