//! Brute-force reference for spread path families on small hosts.
//!
//! Lists every simple `(S, T)`-path by depth-first search, keeps one path
//! per vertex set, and looks for `count` pairwise compatible paths by plain
//! clique backtracking. Shares no code with the main search.

use std::collections::{BTreeMap, VecDeque};

use super::{witness, MengerError, SpreadPathQuery, SpreadPathWitness};
use crate::graph::{Graph, GraphError, Vertex};
use crate::Verdict;

/// Vertex sets are 64-bit masks.
pub const TRIPLE_ORACLE_MAX_VERTICES: usize = 40;

const MAX_PATHS: usize = 200_000;

/// Exhaustive over paths of at most `cap` edges. When `cap` is below
/// `n - 1` and nothing is found the answer is inconclusive, since a longer
/// path might have helped.
pub fn triple_oracle(
    g: &Graph,
    q: &SpreadPathQuery,
    cap: usize,
) -> Result<Verdict<SpreadPathWitness>, MengerError> {
    let n = g.vertex_count();
    if n > TRIPLE_ORACLE_MAX_VERTICES {
        return Err(MengerError::TooLarge {
            n,
            cap: TRIPLE_ORACLE_MAX_VERTICES,
        });
    }
    if g.is_weighted() {
        return Err(GraphError::Weighted.into());
    }
    if q.sources.is_empty() {
        return Err(MengerError::EmptySources);
    }
    if q.sinks.is_empty() {
        return Err(MengerError::EmptySinks);
    }
    if q.count == 0 {
        return Err(MengerError::ZeroCount);
    }
    q.sources.check_range(n)?;
    q.sinks.check_range(n)?;

    let adj: Vec<u64> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | 1 << u))
        .collect();
    let near: Vec<u64> = (0..n).map(|v| ball(&adj, v, q.distance)).collect();

    let mut paths: BTreeMap<u64, Vec<Vertex>> = BTreeMap::new();
    for s in q.sources.iter() {
        let mut path = vec![s];
        extend(&adj, q, cap, 1 << s, &mut path, &mut paths)?;
    }
    let found: Vec<(u64, Vec<Vertex>)> = paths.into_iter().collect();
    let reach: Vec<u64> = found
        .iter()
        .map(|(m, _)| bits(*m).fold(0, |acc, v| acc | near[v]))
        .collect();

    let mut chosen = Vec::new();
    if clique(&found, &reach, q.count, 0, &mut chosen) {
        let family = chosen.iter().map(|&i| found[i].1.clone()).collect();
        return Ok(Verdict::Found(witness(g, family)));
    }
    if cap + 1 < n {
        Ok(Verdict::Inconclusive {
            expansions: found.len() as u64,
        })
    } else {
        Ok(Verdict::NoneExhaustive)
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = Vertex> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as Vertex;
            m &= m - 1;
            v
        })
    })
}

/// Vertices at hop distance below `radius` from `v`.
fn ball(adj: &[u64], v: Vertex, radius: u64) -> u64 {
    if radius == 0 {
        return 0;
    }
    let mut dist = vec![u64::MAX; adj.len()];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    let mut out = 1 << v;
    while let Some(x) = queue.pop_front() {
        if dist[x] + 1 >= radius {
            continue;
        }
        for y in bits(adj[x]) {
            if dist[y] == u64::MAX {
                dist[y] = dist[x] + 1;
                out |= 1 << y;
                queue.push_back(y);
            }
        }
    }
    out
}

fn extend(
    adj: &[u64],
    q: &SpreadPathQuery,
    cap: usize,
    used: u64,
    path: &mut Vec<Vertex>,
    out: &mut BTreeMap<u64, Vec<Vertex>>,
) -> Result<(), MengerError> {
    let last = *path.last().unwrap();
    if q.sinks.contains(last) {
        out.entry(used).or_insert_with(|| path.clone());
        if out.len() > MAX_PATHS {
            return Err(MengerError::TooManyPaths(MAX_PATHS));
        }
    }
    if path.len() > cap {
        return Ok(());
    }
    for y in bits(adj[last] & !used) {
        path.push(y);
        extend(adj, q, cap, used | 1 << y, path, out)?;
        path.pop();
    }
    Ok(())
}

/// Two paths are compatible when neither meets the other's ball; at
/// distance zero every pair is, including a path with itself.
fn clique(
    found: &[(u64, Vec<Vertex>)],
    reach: &[u64],
    count: usize,
    from: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == count {
        return true;
    }
    for i in from..found.len() {
        if chosen.iter().all(|&j| reach[j] & found[i].0 == 0) {
            chosen.push(i);
            let next = if reach[i] == 0 { i } else { i + 1 };
            if clique(found, reach, count, next, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}
