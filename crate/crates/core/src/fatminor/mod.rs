//! Fat minor models: representation, verification, exhaustive search, and
//! the constructive transformations (close-set merging, inflation out of a
//! power graph).
//!
//! A model of a pattern `H` in a host `G` at fatness `k` assigns a connected
//! branch set to every pattern vertex and a connected connector set to every
//! pattern edge. A connector must meet the branch sets of both its ends, and
//! every other pair of parts must be at host distance at least `k`. At
//! fatness 0 the separation condition is vacuous, so parts may overlap.

mod cert;
mod inflate;
mod merge;
mod oracle;
mod search;

pub use cert::{model_from_json, model_to_json, CertError, ModelCertificate};
pub use inflate::{inflate_model, InflateError};
pub use merge::{merge_close_sets, MergeOutcome};
pub use oracle::{exhaustive_oracle, OracleError, ORACLE_MAX_VERTICES};
pub use search::{find_fat_minor, SearchError, SEARCH_MAX_VERTICES};

use std::fmt;
use std::ops::ControlFlow;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{is_connected_set, Distance, Graph, Rational, Reach, Sweeper, Vertex, VertexSet};

/// The graph `H` whose fat minor is sought. Always unweighted and non-empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternGraph {
    graph: Graph,
}

impl PatternGraph {
    pub fn new(graph: Graph) -> Result<Self, ModelError> {
        if graph.vertex_count() == 0 {
            return Err(ModelError::EmptyPattern);
        }
        Ok(PatternGraph {
            graph: graph.unweighted(),
        })
    }

    /// `k2`, `k3`, `k4`, `k5`, `p3`, `p4`, `c4`, `c5`.
    pub fn named(name: &str) -> Option<Self> {
        let graph = match name.to_ascii_lowercase().as_str() {
            "k1" => Graph::empty(1),
            "k2" => Graph::complete(2),
            "k3" => Graph::complete(3),
            "k4" => Graph::complete(4),
            "k5" => Graph::complete(5),
            "p3" => Graph::path(3),
            "p4" => Graph::path(4),
            "c4" => Graph::cycle(4),
            "c5" => Graph::cycle(5),
            _ => return None,
        };
        Some(PatternGraph { graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        self.graph.edges()
    }

    /// All parts in verification order: branch sets by vertex, then
    /// connectors by edge.
    pub fn parts(&self) -> Vec<Part> {
        self.graph
            .vertices()
            .map(Part::Branch)
            .chain(self.edges().iter().map(|&(u, v)| Part::Connector(u, v)))
            .collect()
    }
}

/// One part of a model. The derived order (branch sets before connectors,
/// then by pattern index) is the tie-breaking order of all reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    Branch(Vertex),
    /// Connector of pattern edge `(u, v)`, `u < v`.
    Connector(Vertex, Vertex),
}

impl Part {
    /// Whether this pair of distinct parts must be at distance >= fatness.
    pub fn must_separate(self, other: Part) -> bool {
        match (self, other) {
            (Part::Branch(a), Part::Branch(b)) => a != b,
            (Part::Connector(a, b), Part::Connector(c, d)) => (a, b) != (c, d),
            (Part::Branch(w), Part::Connector(u, v)) | (Part::Connector(u, v), Part::Branch(w)) => {
                w != u && w != v
            }
        }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Part::Branch(v) => write!(f, "branch {v}"),
            Part::Connector(u, v) => write!(f, "connector {u}-{v}"),
        }
    }
}

/// Branch sets indexed by pattern vertex, connectors by pattern edge index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorModel {
    pub branch: Vec<VertexSet>,
    pub connector: Vec<VertexSet>,
    /// Claimed fatness.
    pub fatness: Rational,
}

impl MinorModel {
    pub fn new(branch: Vec<VertexSet>, connector: Vec<VertexSet>, fatness: Rational) -> Self {
        MinorModel {
            branch,
            connector,
            fatness,
        }
    }

    /// Parts paired with their sets, in [`Part`] order. The model must match
    /// the pattern's shape.
    pub fn labelled<'a>(&'a self, h: &PatternGraph) -> Vec<(Part, &'a VertexSet)> {
        let branches = self
            .branch
            .iter()
            .enumerate()
            .map(|(v, s)| (Part::Branch(v), s));
        let connectors = h
            .edges()
            .iter()
            .zip(&self.connector)
            .map(|(&(u, v), s)| (Part::Connector(u, v), s));
        branches.chain(connectors).collect()
    }

    /// Every host vertex used by some part.
    pub fn support(&self) -> VertexSet {
        self.branch
            .iter()
            .chain(&self.connector)
            .flat_map(|s| s.iter())
            .collect()
    }

    pub fn with_fatness(mut self, fatness: Rational) -> Self {
        self.fatness = fatness;
        self
    }
}

/// The model does not fit the pattern or the host.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("pattern graph has no vertices")]
    EmptyPattern,
    #[error("model has {found} branch sets, pattern has {expected} vertices")]
    BranchCount { expected: usize, found: usize },
    #[error("model has {found} connectors, pattern has {expected} edges")]
    ConnectorCount { expected: usize, found: usize },
    #[error("{part} uses vertex {vertex}, host has {n} vertices")]
    VertexOutOfRange { part: Part, vertex: Vertex, n: usize },
    #[error("{0} is empty")]
    EmptyPart(Part),
    #[error("negative fatness {0}")]
    NegativeFatness(Rational),
}

/// First failed model condition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelViolation {
    #[error("{0} is empty")]
    MissingPart(Part),
    #[error("{0} is not connected")]
    DisconnectedPart(Part),
    #[error("{connector} does not meet {branch}")]
    MissingIncidence { connector: Part, branch: Part },
    #[error("{first} and {second} are at distance {achieved}, need at least {required}")]
    SeparationTooSmall {
        first: Part,
        second: Part,
        achieved: Distance,
        required: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Shape(#[from] ModelError),
    #[error(transparent)]
    Violation(#[from] ModelViolation),
}

impl VerifyError {
    pub fn violation(&self) -> Option<&ModelViolation> {
        match self {
            VerifyError::Violation(v) => Some(v),
            VerifyError::Shape(_) => None,
        }
    }
}

pub(crate) fn check_shape(g: &Graph, h: &PatternGraph, m: &MinorModel) -> Result<(), ModelError> {
    if m.branch.len() != h.vertex_count() {
        return Err(ModelError::BranchCount {
            expected: h.vertex_count(),
            found: m.branch.len(),
        });
    }
    if m.connector.len() != h.edges().len() {
        return Err(ModelError::ConnectorCount {
            expected: h.edges().len(),
            found: m.connector.len(),
        });
    }
    let n = g.vertex_count();
    for (part, set) in m.labelled(h) {
        if let Some(vertex) = set.max().filter(|&v| v >= n) {
            return Err(ModelError::VertexOutOfRange { part, vertex, n });
        }
    }
    Ok(())
}

/// Checks every model condition at fatness `k`.
///
/// Conditions are checked in a fixed order: empty parts, disconnected parts,
/// missing incidences, then separations. Within each group the first
/// offending part (or lexicographically first pair of parts) is reported.
pub fn verify_model(
    g: &Graph,
    h: &PatternGraph,
    m: &MinorModel,
    k: Rational,
) -> Result<(), VerifyError> {
    if k < Rational::zero() {
        return Err(ModelError::NegativeFatness(k).into());
    }
    check_shape(g, h, m)?;
    let parts = m.labelled(h);
    if let Some(&(p, _)) = parts.iter().find(|(_, s)| s.is_empty()) {
        return Err(ModelViolation::MissingPart(p).into());
    }
    let disconnected: Vec<bool> = parts
        .par_iter()
        .map(|(_, s)| !is_connected_set(g, s))
        .collect();
    if let Some(i) = disconnected.iter().position(|&d| d) {
        return Err(ModelViolation::DisconnectedPart(parts[i].0).into());
    }
    for (i, &(u, v)) in h.edges().iter().enumerate() {
        for end in [u, v] {
            if !m.connector[i].intersects(&m.branch[end]) {
                return Err(ModelViolation::MissingIncidence {
                    connector: Part::Connector(u, v),
                    branch: Part::Branch(end),
                }
                .into());
            }
        }
    }
    if k > Rational::zero() {
        let index = PartIndex::new(g, &parts);
        if let Some(pair) = index.first_close_pair(g, Reach::Below(k)) {
            return Err(ModelViolation::SeparationTooSmall {
                first: pair.first,
                second: pair.second,
                achieved: pair.distance,
                required: k,
            }
            .into());
        }
    }
    Ok(())
}

/// Distance between two parts that must be separated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairDistance {
    pub first: Part,
    pub second: Part,
    pub distance: Distance,
}

/// Vertex-to-parts membership, used to run one sweep per part.
struct PartIndex<'a> {
    parts: &'a [(Part, &'a VertexSet)],
    offsets: Vec<usize>,
    members: Vec<usize>,
}

impl<'a> PartIndex<'a> {
    fn new(g: &Graph, parts: &'a [(Part, &'a VertexSet)]) -> Self {
        let n = g.vertex_count();
        let mut count = vec![0usize; n + 1];
        for (_, s) in parts {
            for v in s.iter() {
                count[v + 1] += 1;
            }
        }
        for v in 0..n {
            count[v + 1] += count[v];
        }
        let offsets = count.clone();
        let mut fill = count;
        let mut members = vec![0; offsets[n]];
        for (i, (_, s)) in parts.iter().enumerate() {
            for v in s.iter() {
                members[fill[v]] = i;
                fill[v] += 1;
            }
        }
        PartIndex {
            parts,
            offsets,
            members,
        }
    }

    fn parts_at(&self, v: Vertex) -> &[usize] {
        &self.members[self.offsets[v]..self.offsets[v + 1]]
    }

    /// For part `a`, the nearest distance within `reach` to every later part
    /// it must be separated from, by sweeping out of part `a`.
    fn sweep_later(
        &self,
        sweeper: &mut Sweeper<'_>,
        stamp: &mut [usize],
        a: usize,
        reach: Reach,
        stop_at_first: bool,
    ) -> Vec<(usize, Rational)> {
        let pa = self.parts[a].0;
        let mut hits = Vec::new();
        sweeper.run_with(self.parts[a].1.iter(), reach, |v, d| {
            for &b in self.parts_at(v) {
                if b > a && stamp[b] != a + 1 && pa.must_separate(self.parts[b].0) {
                    stamp[b] = a + 1;
                    hits.push((b, d));
                    if stop_at_first {
                        return ControlFlow::Break(());
                    }
                }
            }
            ControlFlow::Continue(())
        });
        hits
    }

    fn per_part<T: Send>(
        &self,
        g: &Graph,
        f: impl Fn(&Self, &mut Sweeper<'_>, &mut [usize], usize) -> T + Sync + Send,
    ) -> Vec<T> {
        let t = self.parts.len();
        (0..t)
            .into_par_iter()
            .map_init(
                || (Sweeper::new(g), vec![0usize; t]),
                |(sw, stamp), a| f(self, sw, stamp, a),
            )
            .collect()
    }

    fn first_close_pair(&self, g: &Graph, reach: Reach) -> Option<PairDistance> {
        let found = self.per_part(g, |idx, sw, stamp, a| {
            idx.sweep_later(sw, stamp, a, reach, false)
                .into_iter()
                .min_by_key(|&(b, _)| b)
        });
        found
            .into_iter()
            .enumerate()
            .find_map(|(a, hit)| hit.map(|(b, d)| self.pair(a, b, Distance::Finite(d))))
    }

    fn pair(&self, a: usize, b: usize, distance: Distance) -> PairDistance {
        PairDistance {
            first: self.parts[a].0,
            second: self.parts[b].0,
            distance,
        }
    }
}

/// Every pair of parts that must be separated and lies within `reach` of
/// each other, with its exact distance, sorted by pair.
pub fn separation_profile(
    g: &Graph,
    h: &PatternGraph,
    m: &MinorModel,
    reach: Reach,
) -> Result<Vec<PairDistance>, ModelError> {
    check_shape(g, h, m)?;
    let parts = m.labelled(h);
    let index = PartIndex::new(g, &parts);
    let rows = index.per_part(g, |idx, sw, stamp, a| {
        let mut hits = idx.sweep_later(sw, stamp, a, reach, false);
        hits.sort_unstable_by_key(|&(b, _)| b);
        hits
    });
    Ok(rows
        .into_iter()
        .enumerate()
        .flat_map(|(a, hits)| {
            let index = &index;
            hits.into_iter()
                .map(move |(b, d)| index.pair(a, b, Distance::Finite(d)))
        })
        .collect())
}

/// The exact minimum distance over all pairs that must be separated, with
/// a pair attaining it. `None` when the pattern
/// has no such pair (a single vertex).
pub fn model_separation(
    g: &Graph,
    h: &PatternGraph,
    m: &MinorModel,
) -> Result<Option<PairDistance>, ModelError> {
    check_shape(g, h, m)?;
    let parts = m.labelled(h);
    if let Some(&(p, _)) = parts.iter().find(|(_, s)| s.is_empty()) {
        return Err(ModelError::EmptyPart(p));
    }
    let first_required = parts.iter().enumerate().find_map(|(a, &(pa, _))| {
        parts[a + 1..]
            .iter()
            .position(|&(pb, _)| pa.must_separate(pb))
            .map(|off| (a, a + 1 + off))
    });
    let Some((a0, b0)) = first_required else {
        return Ok(None);
    };
    let index = PartIndex::new(g, &parts);
    let rows = index.per_part(g, |idx, sw, stamp, a| {
        idx.sweep_later(sw, stamp, a, Reach::Unbounded, true)
            .first()
            .copied()
    });
    let mut best = index.pair(a0, b0, Distance::Infinite);
    for (a, row) in rows.into_iter().enumerate() {
        if let Some((b, d)) = row {
            let cand = index.pair(a, b, Distance::Finite(d));
            if cand.distance < best.distance {
                best = cand;
            }
        }
    }
    Ok(Some(best))
}
