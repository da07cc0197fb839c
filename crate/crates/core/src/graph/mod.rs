//! Immutable finite graphs with dense vertex ids and optional exact rational
//! edge lengths.
//!
//! Every other module consumes [`Graph`]. Graphs are built once (through
//! [`Graph::new`], [`Graph::weighted`] or a [`GraphBuilder`]) and never
//! mutated; transformations return new graphs.

mod distance;
pub mod io;
mod ops;

pub use distance::{
    distances, neighborhood, set_distance, AllPairs, Distance, DistanceTable, Reach, Sweeper,
};
pub use ops::{
    contract_edge, induced_subgraph, is_connected_set, power_graph, scale_weights, subdivide,
    InducedSubgraph, Subdivision,
};

use num_traits::{One, Zero};
use thiserror::Error;

/// Vertex id; always `< vertex_count` of the owning graph.
pub type Vertex = usize;

/// Exact edge lengths, distances and fatness values.
pub type Rational = num_rational::Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(Vertex),
    #[error("edge {0}-{1} listed twice")]
    ParallelEdge(Vertex, Vertex),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("edge {0}-{1} has non-positive weight")]
    NonPositiveWeight(Vertex, Vertex),
    #[error("edge {0}-{1} not present")]
    MissingEdge(Vertex, Vertex),
    #[error("operation requires an unweighted graph")]
    Weighted,
    #[error("empty vertex set")]
    EmptySet,
    #[error("{0}")]
    InvalidArgument(String),
}

/// Finite simple undirected graph in compressed adjacency form.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted lexicographically; the
/// edge index used by [`Graph::weight`] is the position in that list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    weights: Option<Vec<Rational>>,
    offsets: Vec<usize>,
    adj: Vec<Vertex>,
    adj_edge: Vec<usize>,
}

impl Graph {
    /// Unweighted graph from an edge list. Endpoint order within a pair does
    /// not matter; loops, repeated pairs and out-of-range ids are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            list.push((normalize(n, u, v)?, None));
        }
        Self::assemble(n, list, false)
    }

    /// Weighted graph; every weight must be strictly positive.
    pub fn weighted<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Rational)>,
    {
        let mut list = Vec::new();
        for (u, v, w) in edges {
            let e = normalize(n, u, v)?;
            if w <= Rational::zero() {
                return Err(GraphError::NonPositiveWeight(e.0, e.1));
            }
            list.push((e, Some(w)));
        }
        Self::assemble(n, list, true)
    }

    /// Graph with no edges.
    pub fn empty(n: usize) -> Self {
        Self::assemble(n, Vec::new(), false).expect("edgeless graph is valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is valid")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v))).expect("path is valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is valid")
    }

    fn assemble(
        n: usize,
        mut list: Vec<((Vertex, Vertex), Option<Rational>)>,
        weighted: bool,
    ) -> Result<Self, GraphError> {
        list.sort_by_key(|(e, _)| *e);
        for pair in list.windows(2) {
            if pair[0].0 == pair[1].0 {
                let (u, v) = pair[0].0;
                return Err(GraphError::ParallelEdge(u, v));
            }
        }
        let edges: Vec<(Vertex, Vertex)> = list.iter().map(|(e, _)| *e).collect();
        let weights = weighted.then(|| list.iter().map(|(_, w)| w.unwrap()).collect());

        let mut degree = vec![0usize; n + 1];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for d in degree.iter().take(n) {
            offsets.push(acc);
            acc += d;
        }
        offsets.push(acc);
        let mut fill = offsets.clone();
        let mut adj = vec![0; acc];
        let mut adj_edge = vec![0; acc];
        // Lexicographic edge order makes every adjacency list sorted.
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[fill[u]] = v;
            adj_edge[fill[u]] = i;
            fill[u] += 1;
            adj[fill[v]] = u;
            adj_edge[fill[v]] = i;
            fill[v] += 1;
        }
        for v in 0..n {
            let (lo, hi) = (offsets[v], offsets[v + 1]);
            if !adj[lo..hi].windows(2).all(|w| w[0] < w[1]) {
                let mut pairs: Vec<(Vertex, usize)> = adj[lo..hi]
                    .iter()
                    .copied()
                    .zip(adj_edge[lo..hi].iter().copied())
                    .collect();
                pairs.sort_unstable();
                for (k, (a, e)) in pairs.into_iter().enumerate() {
                    adj[lo + k] = a;
                    adj_edge[lo + k] = e;
                }
            }
        }
        Ok(Graph {
            n,
            edges,
            weights,
            offsets,
            adj,
            adj_edge,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    /// Edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Length of edge `index` (1 for unweighted graphs).
    pub fn weight(&self, index: usize) -> Rational {
        match &self.weights {
            Some(w) => w[index],
            None => Rational::one(),
        }
    }

    pub fn weights(&self) -> Option<&[Rational]> {
        self.weights.as_deref()
    }

    /// Sorted neighbours of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Neighbours of `v` paired with the index of the connecting edge.
    pub fn incident(&self, v: Vertex) -> impl Iterator<Item = (Vertex, usize)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.adj[range.clone()]
            .iter()
            .copied()
            .zip(self.adj_edge[range].iter().copied())
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    /// Same topology with all weights dropped.
    pub fn unweighted(&self) -> Graph {
        Graph {
            weights: None,
            ..self.clone()
        }
    }
}

fn normalize(n: usize, u: Vertex, v: Vertex) -> Result<(Vertex, Vertex), GraphError> {
    for x in [u, v] {
        if x >= n {
            return Err(GraphError::VertexOutOfRange { vertex: x, n });
        }
    }
    if u == v {
        return Err(GraphError::Loop(u));
    }
    Ok((u.min(v), u.max(v)))
}

/// Incremental construction helper used by the graph families.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        GraphBuilder {
            n,
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.n += 1;
        self.n - 1
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        self.edges.push((u, v));
    }

    /// Joins `from` and `to` by a path of `length` edges and returns the
    /// internal vertices in order from `from`.
    pub fn add_path(&mut self, from: Vertex, to: Vertex, length: usize) -> Vec<Vertex> {
        assert!(length >= 1, "path length must be positive");
        let internal: Vec<Vertex> = (1..length).map(|_| self.add_vertex()).collect();
        let mut prev = from;
        for &x in &internal {
            self.add_edge(prev, x);
            prev = x;
        }
        self.add_edge(prev, to);
        internal
    }

    /// Path of `length` edges hanging off `from`; returns every vertex after
    /// `from`, the last one being the free end.
    pub fn add_pendant_path(&mut self, from: Vertex, length: usize) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(length);
        let mut prev = from;
        for _ in 0..length {
            let x = self.add_vertex();
            self.add_edge(prev, x);
            out.push(x);
            prev = x;
        }
        out
    }

    pub fn build(self) -> Result<Graph, GraphError> {
        Graph::new(self.n, self.edges)
    }
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(vec![v])
    }

    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn from_sorted_unchecked(members: Vec<Vertex>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet(members)
    }

    /// Builds from the vertices `v` with `flags[v]` set.
    pub fn from_flags(flags: &[bool]) -> Self {
        VertexSet(
            flags
                .iter()
                .enumerate()
                .filter_map(|(v, &f)| f.then_some(v))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, Vertex>> {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn min(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        VertexSet(out)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().any(|v| large.contains(v))
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    /// Membership flags over `0..n`.
    pub fn to_flags(&self, n: usize) -> Vec<bool> {
        let mut flags = vec![false; n];
        for v in self.iter() {
            flags[v] = true;
        }
        flags
    }

    /// Checks every member against the vertex range of a graph on `n` vertices.
    pub fn check_range(&self, n: usize) -> Result<(), GraphError> {
        match self.max() {
            Some(v) if v >= n => Err(GraphError::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<T: IntoIterator<Item = Vertex>>(iter: T) -> Self {
        let mut v: Vec<Vertex> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(v: Vec<Vertex>) -> Self {
        v.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = Vertex;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Vertex>>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}
