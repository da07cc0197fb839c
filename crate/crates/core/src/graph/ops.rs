use num_traits::Zero;
use rayon::prelude::*;

use super::{Graph, GraphError, Rational, Reach, Sweeper, Vertex, VertexSet};

/// True iff `y` is non-empty and induces a connected subgraph.
pub fn is_connected_set(g: &Graph, y: &VertexSet) -> bool {
    let Some(start) = y.min() else {
        return false;
    };
    if y.max().is_some_and(|v| v >= g.vertex_count()) {
        return false;
    }
    let inside = y.to_flags(g.vertex_count());
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            if inside[u] && !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == y.len()
}

/// `G[Z]` together with the relabelling: new vertex `i` is `original[i]`.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub original: Vec<Vertex>,
}

impl InducedSubgraph {
    /// New id of an original vertex, if it was kept.
    pub fn local(&self, v: Vertex) -> Option<Vertex> {
        self.original.binary_search(&v).ok()
    }
}

pub fn induced_subgraph(g: &Graph, z: &VertexSet) -> Result<InducedSubgraph, GraphError> {
    z.check_range(g.vertex_count())?;
    let original = z.as_slice().to_vec();
    let mut local = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in original.iter().enumerate() {
        local[v] = i;
    }
    let mut edges = Vec::new();
    for (idx, &(u, v)) in g.edges().iter().enumerate() {
        if local[u] != usize::MAX && local[v] != usize::MAX {
            edges.push((local[u], local[v], g.weight(idx)));
        }
    }
    let n = original.len();
    let graph = if g.is_weighted() {
        Graph::weighted(n, edges)?
    } else {
        Graph::new(n, edges.into_iter().map(|(u, v, _)| (u, v)))?
    };
    Ok(InducedSubgraph { graph, original })
}

/// The k-subdivision of a graph with the bookkeeping needed to find the
/// original structure inside it.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub graph: Graph,
    /// Original vertices keep their ids `0..n`.
    pub original_count: usize,
    /// For original edge `i = (u, v)`, its internal vertices ordered from `u`.
    pub chains: Vec<Vec<Vertex>>,
}

/// Replaces every edge by a path with exactly `k` internal vertices.
pub fn subdivide(g: &Graph, k: usize) -> Result<Subdivision, GraphError> {
    if k == 0 {
        return Err(GraphError::InvalidArgument(
            "subdivision needs k >= 1".into(),
        ));
    }
    if g.is_weighted() {
        return Err(GraphError::Weighted);
    }
    let n = g.vertex_count();
    let mut next = n;
    let mut edges = Vec::with_capacity(g.edge_count() * (k + 1));
    let mut chains = Vec::with_capacity(g.edge_count());
    for &(u, v) in g.edges() {
        let chain: Vec<Vertex> = (next..next + k).collect();
        next += k;
        let mut prev = u;
        for &x in &chain {
            edges.push((prev, x));
            prev = x;
        }
        edges.push((prev, v));
        chains.push(chain);
    }
    Ok(Subdivision {
        graph: Graph::new(next, edges)?,
        original_count: n,
        chains,
    })
}

/// Simple-graph contraction of edge `uv`: `v` merges into `u` (taking the
/// smaller id), vertices above the removed id shift down by one. Parallel
/// edges keep their lighter weight.
pub fn contract_edge(g: &Graph, e: (Vertex, Vertex)) -> Result<Graph, GraphError> {
    let (keep, gone) = (e.0.min(e.1), e.0.max(e.1));
    let Some(_) = g.edge_index(keep, gone) else {
        return Err(GraphError::MissingEdge(e.0, e.1));
    };
    let relabel = |x: Vertex| -> Vertex {
        if x == gone {
            keep
        } else if x > gone {
            x - 1
        } else {
            x
        }
    };
    let mut merged: std::collections::BTreeMap<(Vertex, Vertex), Rational> = Default::default();
    for (idx, &(a, b)) in g.edges().iter().enumerate() {
        let (x, y) = (relabel(a), relabel(b));
        if x == y {
            continue;
        }
        let key = (x.min(y), x.max(y));
        let w = g.weight(idx);
        merged
            .entry(key)
            .and_modify(|old| {
                if w < *old {
                    *old = w
                }
            })
            .or_insert(w);
    }
    let n = g.vertex_count() - 1;
    if g.is_weighted() {
        Graph::weighted(n, merged.into_iter().map(|((u, v), w)| (u, v, w)))
    } else {
        Graph::new(n, merged.into_keys())
    }
}

/// `G^k`: same vertices, `uv` an edge iff `1 <= dist(u, v) <= k`.
pub fn power_graph(g: &Graph, k: usize) -> Result<Graph, GraphError> {
    if k == 0 {
        return Err(GraphError::InvalidArgument("power needs k >= 1".into()));
    }
    if g.is_weighted() {
        return Err(GraphError::Weighted);
    }
    if k == 1 {
        return Ok(g.clone());
    }
    let radius = Reach::AtMost(Rational::from_integer(k as i64));
    let edges: Vec<(Vertex, Vertex)> = g
        .vertices()
        .into_par_iter()
        .map_init(
            || Sweeper::new(g),
            |sw, v| {
                sw.run([v], radius)
                    .iter()
                    .filter(|&&u| u > v)
                    .map(|&u| (v, u))
                    .collect::<Vec<_>>()
            },
        )
        .flatten()
        .collect();
    Graph::new(g.vertex_count(), edges)
}

/// Multiplies every edge length by `factor`; unweighted input is read as
/// all-ones and the result is always weighted.
pub fn scale_weights(g: &Graph, factor: Rational) -> Result<Graph, GraphError> {
    if factor <= Rational::zero() {
        return Err(GraphError::InvalidArgument(format!(
            "scale factor must be positive, got {factor}"
        )));
    }
    Graph::weighted(
        g.vertex_count(),
        g.edges()
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (u, v, g.weight(i) * factor)),
    )
}
