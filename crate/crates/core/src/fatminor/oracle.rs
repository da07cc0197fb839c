//! Definition-level brute force for tiny hosts.
//!
//! Every part ranges over every connected vertex set of the host; a pair of
//! parts is checked against the definition as soon as one is assigned.
//! Nothing here is shared with the search: distances come from a separate
//! Floyd-Warshall pass and connectivity from a separate flood fill.

use num_traits::Zero;
use thiserror::Error;

use super::{MinorModel, Part, PatternGraph};
use crate::graph::{Graph, Rational, VertexSet};
use crate::Verdict;

pub const ORACLE_MAX_VERTICES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle host has {n} vertices, cap is {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("negative fatness {0}")]
    NegativeFatness(Rational),
}

/// Ground-truth fat minor decision for hosts up to `ORACLE_MAX_VERTICES`.
pub fn exhaustive_oracle(
    g: &Graph,
    h: &PatternGraph,
    k: Rational,
) -> Result<Verdict<MinorModel>, OracleError> {
    let n = g.vertex_count();
    if n > ORACLE_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            n,
            cap: ORACLE_MAX_VERTICES,
        });
    }
    if k < Rational::zero() {
        return Err(OracleError::NegativeFatness(k));
    }

    let dist = floyd_warshall(g);
    let close: Vec<u32> = (0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| dist[u][v].is_some_and(|d| d < k))
                .fold(0, |m, v| m | 1 << v)
        })
        .collect();
    let adj: Vec<u32> = (0..n)
        .map(|u| g.neighbors(u).iter().fold(0, |m, &v| m | 1 << v))
        .collect();
    let sets: Vec<u32> = (1u32..1 << n).filter(|&s| flood(&adj, s) == s).collect();
    let near: Vec<u32> = sets
        .iter()
        .map(|&s| (0..n).filter(|v| s >> v & 1 == 1).fold(0, |m, v| m | close[v]))
        .collect();

    let order = h.parts();
    let ctx = Ctx {
        order: &order,
        sets: &sets,
        near: &near,
        separate: k > Rational::zero(),
    };
    let mut chosen = vec![None; order.len()];
    if !ctx.solve(vec![(0..sets.len()).collect(); order.len()], &mut chosen) {
        return Ok(Verdict::NoneExhaustive);
    }

    let set_of = |part: Part| {
        let i = order.iter().position(|&p| p == part).unwrap();
        let s = sets[chosen[i].expect("every part assigned")];
        VertexSet::from_sorted_unchecked((0..n).filter(|v| s >> v & 1 == 1).collect())
    };
    let branch = h.graph().vertices().map(|v| set_of(Part::Branch(v))).collect();
    let connector = h
        .edges()
        .iter()
        .map(|&(u, v)| set_of(Part::Connector(u, v)))
        .collect();
    Ok(Verdict::Found(MinorModel::new(branch, connector, k)))
}

struct Ctx<'a> {
    order: &'a [Part],
    sets: &'a [u32],
    near: &'a [u32],
    separate: bool,
}

impl Ctx<'_> {
    fn compatible(&self, a: Part, sa: usize, b: Part, sb: usize) -> bool {
        if incident(a, b) {
            self.sets[sa] & self.sets[sb] != 0
        } else {
            !(self.separate && a.must_separate(b) && self.near[sa] & self.sets[sb] != 0)
        }
    }

    /// Backtracking with forward checking: `domains[p]` holds the sets
    /// still compatible with every assigned part, and the unassigned part
    /// with the fewest candidates goes next.
    fn solve(&self, domains: Vec<Vec<usize>>, chosen: &mut [Option<usize>]) -> bool {
        let next = (0..self.order.len())
            .filter(|&p| chosen[p].is_none())
            .min_by_key(|&p| domains[p].len());
        let Some(slot) = next else {
            return true;
        };
        let part = self.order[slot];
        for &c in &domains[slot] {
            let mut narrowed = domains.clone();
            let mut dead = false;
            for (p, dom) in narrowed.iter_mut().enumerate() {
                if p == slot || chosen[p].is_some() {
                    continue;
                }
                dom.retain(|&d| self.compatible(part, c, self.order[p], d));
                if dom.is_empty() {
                    dead = true;
                    break;
                }
            }
            if dead {
                continue;
            }
            chosen[slot] = Some(c);
            if self.solve(narrowed, chosen) {
                return true;
            }
            chosen[slot] = None;
        }
        false
    }
}

fn incident(a: Part, b: Part) -> bool {
    match (a, b) {
        (Part::Branch(w), Part::Connector(u, v)) | (Part::Connector(u, v), Part::Branch(w)) => {
            w == u || w == v
        }
        _ => false,
    }
}

fn flood(adj: &[u32], s: u32) -> u32 {
    let mut reach = s & s.wrapping_neg();
    loop {
        let mut next = reach;
        for (v, &a) in adj.iter().enumerate() {
            if reach >> v & 1 == 1 {
                next |= a & s;
            }
        }
        if next == reach {
            return reach;
        }
        reach = next;
    }
}

fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<Rational>>> {
    let n = g.vertex_count();
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(Rational::zero());
    }
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let w = g.weight(i);
        d[u][v] = Some(w);
        d[v][u] = Some(w);
    }
    for m in 0..n {
        let through = d[m].clone();
        for row in d.iter_mut() {
            let Some(am) = row[m] else { continue };
            for (cur, mb) in row.iter_mut().zip(&through) {
                if let Some(mb) = mb {
                    let via = am + *mb;
                    if cur.is_none_or(|c| via < c) {
                        *cur = Some(via);
                    }
                }
            }
        }
    }
    d
}
