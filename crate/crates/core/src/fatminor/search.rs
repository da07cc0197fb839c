//! Budgeted exhaustive search for fat minor models.
//!
//! For positive fatness it is enough to look for models of a restricted
//! shape. Take any model and replace each connector `P_uv` by a shortest
//! path inside `G[P_uv]` from `B_u` to `B_v`; then drop from each branch set
//! every vertex that is neither an attachment point of a connector nor a cut
//! vertex of the branch set, until none is left. Shrinking parts never
//! decreases a distance, so the result is still a model, and it has:
//!
//! * branch sets whose non-cut vertices are attachment points, so at most
//!   `max(1, deg_H(v))` of them;
//! * connectors that are induced paths with one end in each branch set and
//!   all other vertices outside every branch set.
//!
//! The search enumerates exactly these shapes. Pattern vertices are placed
//! in index order; after placing `B_i` the connectors to earlier neighbours
//! are routed at once, so every separation can be checked as soon as both
//! parts exist. Distances are never recomputed: for each vertex `v` we keep
//! the mask of vertices closer than `k` to it, and two sets are far enough
//! apart iff the near-mask of one misses the other.

use std::ops::ControlFlow;

use num_traits::Zero;
use thiserror::Error;

use super::{verify_model, MinorModel, PatternGraph, VerifyError};
use crate::graph::{Graph, Rational, Reach, Sweeper, Vertex, VertexSet};
use crate::Verdict;

/// Hosts are encoded as 128-bit vertex masks.
pub const SEARCH_MAX_VERTICES: usize = 128;

type Mask = u128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search hosts are limited to {SEARCH_MAX_VERTICES} vertices, got {0}")]
    HostTooLarge(usize),
    #[error("negative fatness {0}")]
    NegativeFatness(Rational),
    #[error("search produced a model that fails verification: {0}")]
    Unsound(VerifyError),
}

fn bit(v: Vertex) -> Mask {
    1 << v
}

fn bits(mut m: Mask) -> impl Iterator<Item = Vertex> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as Vertex;
            m &= m - 1;
            Some(v)
        }
    })
}

fn above(v: Vertex) -> Mask {
    if v + 1 >= SEARCH_MAX_VERTICES {
        0
    } else {
        !0 << (v + 1)
    }
}

fn to_set(m: Mask) -> VertexSet {
    VertexSet::from_sorted_unchecked(bits(m).collect())
}

enum Stop {
    Found,
    Budget,
}

/// Decides whether `h` is a `k`-fat minor of `g`, exploring at most
/// `budget` search nodes.
///
/// `NoneExhaustive` is only returned for unweighted hosts; on weighted hosts
/// an exhausted search is reported as `Inconclusive`. At fatness 0 every
/// part may be the same single vertex, so any non-empty host succeeds.
pub fn find_fat_minor(
    g: &Graph,
    h: &PatternGraph,
    k: Rational,
    budget: u64,
) -> Result<Verdict<MinorModel>, SearchError> {
    if k < Rational::zero() {
        return Err(SearchError::NegativeFatness(k));
    }
    let n = g.vertex_count();
    if n > SEARCH_MAX_VERTICES {
        return Err(SearchError::HostTooLarge(n));
    }
    if n == 0 {
        return Ok(exhausted(g, 0));
    }
    if k.is_zero() {
        let point = VertexSet::singleton(0);
        let m = MinorModel::new(
            vec![point.clone(); h.vertex_count()],
            vec![point; h.edges().len()],
            k,
        );
        return finish(g, h, m, k);
    }

    let mut search = Search::new(g, h, k, budget);
    let Some(candidates) = search.branch_candidates() else {
        return Ok(Verdict::Inconclusive {
            expansions: search.expansions,
        });
    };
    search.candidates = candidates;
    match search.place(0) {
        ControlFlow::Break(Stop::Found) => {
            let m = search.model(k);
            finish(g, h, m, k)
        }
        ControlFlow::Break(Stop::Budget) => Ok(Verdict::Inconclusive {
            expansions: search.expansions,
        }),
        ControlFlow::Continue(()) => Ok(exhausted(g, search.expansions)),
    }
}

fn exhausted(g: &Graph, expansions: u64) -> Verdict<MinorModel> {
    if g.is_weighted() {
        Verdict::Inconclusive { expansions }
    } else {
        Verdict::NoneExhaustive
    }
}

fn finish(
    g: &Graph,
    h: &PatternGraph,
    m: MinorModel,
    k: Rational,
) -> Result<Verdict<MinorModel>, SearchError> {
    verify_model(g, h, &m, k).map_err(SearchError::Unsound)?;
    Ok(Verdict::Found(m))
}

/// Branch-set candidate with its non-cut vertices (empty for singletons,
/// whose only vertex can never be dropped).
#[derive(Clone, Copy)]
struct Candidate {
    set: Mask,
    loose: Mask,
}

struct Search {
    n: usize,
    adj: Vec<Mask>,
    near: Vec<Mask>,
    degree: Vec<usize>,
    /// For pattern vertex `i`: `(j, edge index)` for each neighbour `j < i`.
    earlier: Vec<Vec<(usize, usize)>>,
    /// `pending[x][i]`: neighbours of `x` with index above `i`.
    pending: Vec<Vec<u32>>,
    candidates: Vec<Vec<Candidate>>,
    branch: Vec<Mask>,
    branch_near: Vec<Mask>,
    loose: Vec<Mask>,
    attach: Vec<Mask>,
    connector: Vec<Mask>,
    connector_near: Vec<Mask>,
    expansions: u64,
    budget: u64,
}

impl Search {
    fn new(g: &Graph, h: &PatternGraph, k: Rational, budget: u64) -> Self {
        let n = g.vertex_count();
        let adj = g
            .vertices()
            .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | bit(u)))
            .collect();
        let mut sweeper = Sweeper::new(g);
        let near = g
            .vertices()
            .map(|v| {
                sweeper
                    .run([v], Reach::Below(k))
                    .iter()
                    .fold(0, |m, &u| m | bit(u))
            })
            .collect();
        let hg = h.graph();
        let hn = h.vertex_count();
        let mut earlier = vec![Vec::new(); hn];
        for (e, &(u, v)) in h.edges().iter().enumerate() {
            earlier[v].push((u, e));
        }
        let pending = hg
            .vertices()
            .map(|x| {
                (0..hn)
                    .map(|i| hg.neighbors(x).iter().filter(|&&w| w > i).count() as u32)
                    .collect()
            })
            .collect();
        Search {
            n,
            adj,
            near,
            degree: hg.vertices().map(|v| hg.degree(v)).collect(),
            earlier,
            pending,
            candidates: Vec::new(),
            branch: vec![0; hn],
            branch_near: vec![0; hn],
            loose: vec![0; hn],
            attach: vec![0; hn],
            connector: vec![0; h.edges().len()],
            connector_near: vec![0; h.edges().len()],
            expansions: 0,
            budget,
        }
    }

    fn tick(&mut self) -> ControlFlow<Stop> {
        self.expansions += 1;
        if self.expansions > self.budget {
            ControlFlow::Break(Stop::Budget)
        } else {
            ControlFlow::Continue(())
        }
    }

    fn near_of(&self, m: Mask) -> Mask {
        bits(m).fold(0, |acc, v| acc | self.near[v])
    }

    fn connected(&self, s: Mask) -> bool {
        if s == 0 {
            return false;
        }
        let mut reach = s & s.wrapping_neg();
        let mut frontier = reach;
        while frontier != 0 {
            let next = bits(frontier).fold(0, |acc, v| acc | self.adj[v]) & s & !reach;
            reach |= next;
            frontier = next;
        }
        reach == s
    }

    fn non_cut(&self, s: Mask) -> Mask {
        if s.count_ones() <= 1 {
            return 0;
        }
        bits(s)
            .filter(|&v| self.connected(s & !bit(v)))
            .fold(0, |m, v| m | bit(v))
    }

    /// Whether `pool` holds `count` vertices pairwise at distance >= k.
    fn has_far_tuple(&self, pool: Mask, count: usize) -> bool {
        if count == 0 {
            return true;
        }
        bits(pool).any(|a| self.has_far_tuple(pool & !self.near[a] & above(a), count - 1))
    }

    /// Connected vertex sets of the host admissible as branch sets, per
    /// pattern vertex, smallest first. `None` if the budget ran out.
    ///
    /// Connectors at one branch set are pairwise separated, so their
    /// attachment points are `deg` vertices pairwise at distance >= k, and
    /// every non-cut vertex is one of them.
    fn branch_candidates(&mut self) -> Option<Vec<Vec<Candidate>>> {
        let widest = self.degree.iter().copied().max().unwrap_or(0).max(1);
        let mut all = Vec::new();
        for seed in 0..self.n {
            let ext = self.adj[seed] & above(seed);
            let closed = self.adj[seed] | bit(seed);
            if self.grow(bit(seed), ext, closed, seed, widest, &mut all).is_break() {
                return None;
            }
        }
        all.sort_unstable_by_key(|c: &Candidate| (c.set.count_ones(), c.set));
        let mut per_degree: Vec<Option<Vec<Candidate>>> = vec![None; widest + 1];
        let mut out = Vec::with_capacity(self.degree.len());
        for i in 0..self.degree.len() {
            let d = self.degree[i];
            if per_degree[d].is_none() {
                let list = all
                    .iter()
                    .filter(|c| {
                        c.loose.count_ones() as usize <= d.max(1)
                            && self.has_far_tuple(c.set, d)
                    })
                    .copied()
                    .collect();
                per_degree[d] = Some(list);
            }
            out.push(per_degree[d].clone().unwrap());
        }
        Some(out)
    }

    /// Enumerates each connected set whose minimum is `seed` exactly once.
    fn grow(
        &mut self,
        sub: Mask,
        mut ext: Mask,
        closed: Mask,
        seed: Vertex,
        widest: usize,
        out: &mut Vec<Candidate>,
    ) -> ControlFlow<Stop> {
        self.tick()?;
        let loose = self.non_cut(sub);
        if loose.count_ones() as usize <= widest {
            out.push(Candidate { set: sub, loose });
        }
        while ext != 0 {
            let w = ext.trailing_zeros() as Vertex;
            ext &= ext - 1;
            let fresh = self.adj[w] & !closed & above(seed);
            self.grow(sub | bit(w), ext | fresh, closed | self.adj[w], seed, widest, out)?;
        }
        ControlFlow::Continue(())
    }

    fn place(&mut self, i: usize) -> ControlFlow<Stop> {
        if i == self.branch.len() {
            return ControlFlow::Break(Stop::Found);
        }
        let blocked = self.branch_near[..i]
            .iter()
            .chain(&self.connector_near)
            .fold(0, |acc, &m| acc | m);
        for idx in 0..self.candidates[i].len() {
            let c = self.candidates[i][idx];
            if c.set & blocked != 0 {
                continue;
            }
            self.tick()?;
            self.branch[i] = c.set;
            self.branch_near[i] = self.near_of(c.set);
            self.loose[i] = c.loose;
            self.route(i, 0)?;
        }
        self.branch[i] = 0;
        self.branch_near[i] = 0;
        self.loose[i] = 0;
        ControlFlow::Continue(())
    }

    /// Every non-cut vertex of a placed branch set must end up as an
    /// attachment point, so unused ones cannot outnumber the connectors
    /// still to come.
    fn attachments_feasible(&self, i: usize) -> bool {
        (0..=i).all(|x| (self.loose[x] & !self.attach[x]).count_ones() <= self.pending[x][i])
    }

    /// Routes the `t`-th connector from `B_i` back to an earlier branch set.
    fn route(&mut self, i: usize, t: usize) -> ControlFlow<Stop> {
        let Some(&(j, e)) = self.earlier[i].get(t) else {
            if !self.attachments_feasible(i) {
                return ControlFlow::Continue(());
            }
            return self.place(i + 1);
        };
        let mut blocked = self.connector_near.iter().fold(0, |acc, &m| acc | m);
        for w in 0..i {
            if w != j {
                blocked |= self.branch_near[w];
            }
        }
        let src = self.branch[i];
        let tgt = self.branch[j] & !blocked;
        let free = !blocked & !src & !self.branch[j] & full(self.n);
        if tgt == 0 {
            return ControlFlow::Continue(());
        }
        let dist = self.layers(tgt, free);
        let route = Route {
            i,
            t,
            e,
            j,
            tgt,
            free,
        };
        for a in bits(src & !blocked) {
            let step = self.adj[a] & (free | tgt);
            if bits(step).all(|x| dist[x] == u32::MAX) {
                continue;
            }
            self.extend(&route, a, bit(a), a, &dist)?;
        }
        ControlFlow::Continue(())
    }

    /// Hop distance to `tgt` through `free`, `u32::MAX` where unreachable.
    fn layers(&self, tgt: Mask, free: Mask) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n];
        let mut seen = tgt;
        let mut frontier = tgt;
        let mut d = 0;
        while frontier != 0 {
            for v in bits(frontier) {
                dist[v] = d;
            }
            let next = bits(frontier).fold(0, |acc, v| acc | self.adj[v]) & free & !seen;
            seen |= next;
            frontier = next;
            d += 1;
        }
        dist
    }

    fn extend(
        &mut self,
        r: &Route,
        start: Vertex,
        path: Mask,
        last: Vertex,
        dist: &[u32],
    ) -> ControlFlow<Stop> {
        self.tick()?;
        let earlier_path = path & !bit(last);
        let mut next: Vec<Vertex> = bits(self.adj[last] & (r.free | r.tgt) & !path)
            .filter(|&x| dist[x] != u32::MAX && self.adj[x] & earlier_path == 0)
            .collect();
        next.sort_by_key(|&x| (dist[x], x));
        for x in next {
            if r.tgt & bit(x) != 0 {
                let p = path | bit(x);
                let saved = (self.attach[r.i], self.attach[r.j]);
                self.attach[r.i] |= bit(start);
                self.attach[r.j] |= bit(x);
                self.connector[r.e] = p;
                self.connector_near[r.e] = self.near_of(p);
                self.route(r.i, r.t + 1)?;
                self.connector[r.e] = 0;
                self.connector_near[r.e] = 0;
                (self.attach[r.i], self.attach[r.j]) = saved;
            } else {
                self.extend(r, start, path | bit(x), x, dist)?;
            }
        }
        ControlFlow::Continue(())
    }

    fn model(&self, k: Rational) -> MinorModel {
        MinorModel::new(
            self.branch.iter().map(|&m| to_set(m)).collect(),
            self.connector.iter().map(|&m| to_set(m)).collect(),
            k,
        )
    }
}

/// The connector being routed: from `B_i` to `B_j` for pattern edge `e`,
/// the `t`-th of `B_i`'s earlier connectors.
struct Route {
    i: usize,
    t: usize,
    e: usize,
    j: usize,
    tgt: Mask,
    free: Mask,
}

fn full(n: usize) -> Mask {
    if n >= SEARCH_MAX_VERTICES {
        !0
    } else {
        (1 << n) - 1
    }
}
