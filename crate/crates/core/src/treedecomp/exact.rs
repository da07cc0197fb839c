use thiserror::Error;

use crate::graph::Graph;

pub const EXACT_DEFAULT_CAP: usize = 12;

/// Beyond this the subset table no longer fits comfortably in memory.
const HARD_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("exact treewidth limited to {cap} vertices, got {n}")]
    TooLarge { n: usize, cap: usize },
}

/// Exact treewidth by dynamic programming over vertex subsets: the best
/// width of an elimination ordering that starts with the set `S` is
/// `min_v max(tw(S - v), |Q(S - v, v)|)`, where `Q(S, v)` is everything
/// outside `S + v` reachable from `v` through `S`. Returns 0 for graphs
/// with at most one vertex.
pub fn exact_treewidth(g: &Graph, cap: usize) -> Result<usize, ExactError> {
    let n = g.vertex_count();
    let cap = cap.min(HARD_LIMIT);
    if n > cap {
        return Err(ExactError::TooLarge { n, cap });
    }
    if n <= 1 {
        return Ok(0);
    }
    let adj: Vec<u32> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | 1 << u))
        .collect();
    let full = (1u32 << n) - 1;
    let mut best = vec![u8::MAX; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        let mut rest = s;
        let mut value = u8::MAX;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let before = s & !(1 << v);
            let q = outside_reach(&adj, before, v).count_ones() as u8;
            value = value.min(best[before as usize].max(q));
        }
        best[s as usize] = value;
    }
    Ok(best[full as usize] as usize)
}

/// Vertices outside `inside + v` adjacent to the component of `v` in
/// `G[inside + v]`.
fn outside_reach(adj: &[u32], inside: u32, v: usize) -> u32 {
    let mut seen = 1u32 << v;
    let mut frontier = seen;
    let mut out = 0;
    while frontier != 0 {
        let x = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let nb = adj[x] & !seen;
        out |= nb & !inside;
        let next = nb & inside;
        seen |= next;
        frontier |= next;
    }
    out
}
