use std::collections::VecDeque;

use thiserror::Error;

use super::{verify_model, MinorModel, PatternGraph, VerifyError};
use crate::graph::{neighborhood, power_graph, Graph, GraphError, Rational, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InflateError {
    #[error("inflation needs k >= 1")]
    ZeroK,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("input is not a 3-fat model in the power graph: {0}")]
    Precondition(VerifyError),
    #[error("connector {0}-{1} cannot be routed inside its inflated region")]
    Unroutable(Vertex, Vertex),
    #[error("inflated model fails verification: {0}")]
    Unverified(VerifyError),
}

/// Turns a 3-fat model of `h` in `G^k` into a `k`-fat model in `G`.
///
/// With `r = floor(k/2)`, branch sets become `N^r[B_v]` and each connector
/// becomes a shortest path inside `N^r[P_e]` between the two inflated branch
/// sets. Parts at distance at least 3 in `G^k` are at least `2k+1` apart in
/// `G`, so after growing both by `r` they stay at least `k+1` apart.
pub fn inflate_model(
    g: &Graph,
    h: &PatternGraph,
    k: usize,
    m3: &MinorModel,
) -> Result<MinorModel, InflateError> {
    if k == 0 {
        return Err(InflateError::ZeroK);
    }
    let power = power_graph(g, k)?;
    verify_model(&power, h, m3, Rational::from_integer(3)).map_err(InflateError::Precondition)?;

    let radius = Rational::from_integer((k / 2) as i64);
    let branch: Vec<VertexSet> = m3
        .branch
        .iter()
        .map(|b| neighborhood(g, b, radius))
        .collect::<Result<_, _>>()?;
    let mut connector = Vec::with_capacity(h.edges().len());
    for (i, &(u, v)) in h.edges().iter().enumerate() {
        let region = neighborhood(g, &m3.connector[i], radius)?;
        let path = path_within(g, &region, &branch[u], &branch[v])
            .ok_or(InflateError::Unroutable(u, v))?;
        connector.push(path);
    }

    let k_rat = Rational::from_integer(k as i64);
    let out = MinorModel::new(branch, connector, k_rat);
    verify_model(g, h, &out, k_rat).map_err(InflateError::Unverified)?;
    Ok(out)
}

/// Vertex set of a shortest path in `G[region]` from `from` to `to`.
fn path_within(
    g: &Graph,
    region: &VertexSet,
    from: &VertexSet,
    to: &VertexSet,
) -> Option<VertexSet> {
    let n = g.vertex_count();
    let inside = region.to_flags(n);
    let goal = to.to_flags(n);
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in from.iter().filter(|&s| inside[s]) {
        parent[s] = s;
        queue.push_back(s);
    }
    while let Some(x) = queue.pop_front() {
        if goal[x] {
            let mut path = vec![x];
            let mut cur = x;
            while parent[cur] != cur {
                cur = parent[cur];
                path.push(cur);
            }
            return Some(path.into_iter().collect());
        }
        for &y in g.neighbors(x) {
            if inside[y] && parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}
