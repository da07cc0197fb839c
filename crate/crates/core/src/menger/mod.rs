//! Families of `(S, T)`-paths that stay pairwise far apart.
//!
//! A path family is read as a multiset: at distance 0 one path repeated `k`
//! times is a valid answer. For positive distance the paths are disjoint.
//!
//! Any valid family can be shrunk to one of minimal paths: cut each path
//! after its last vertex in `S` and before its first later vertex in `T`,
//! then shortcut chords. Shrinking only increases distances, so the search
//! only builds induced paths whose first vertex is the only one in `S` and
//! whose last vertex is the only one in `T`, with start vertices strictly
//! increasing along the family.

mod oracle;

use std::collections::VecDeque;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use oracle::{triple_oracle, TRIPLE_ORACLE_MAX_VERTICES};

use crate::graph::{set_distance, Distance, Graph, GraphError, Reach, Sweeper, Vertex, VertexSet};
use crate::Verdict;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpreadPathQuery {
    pub sources: VertexSet,
    pub sinks: VertexSet,
    pub count: usize,
    /// Required pairwise hop distance.
    pub distance: u64,
    pub budget: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpreadPathWitness {
    /// Each path listed from its `S` end to its `T` end.
    pub paths: Vec<Vec<Vertex>>,
    /// Infinite for fewer than two paths or paths in different components.
    pub min_pairwise_distance: Distance,
}

/// `{"paths": [[ids]], "min_pairwise_distance": int}`, with `null` for an
/// infinite minimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadJson {
    pub paths: Vec<Vec<Vertex>>,
    pub min_pairwise_distance: Option<u64>,
}

impl SpreadPathWitness {
    pub fn to_json(&self) -> SpreadJson {
        SpreadJson {
            paths: self.paths.clone(),
            min_pairwise_distance: self
                .min_pairwise_distance
                .finite()
                .map(|d| d.to_integer() as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MengerError {
    #[error("source set is empty")]
    EmptySources,
    #[error("sink set is empty")]
    EmptySinks,
    #[error("path count must be positive")]
    ZeroCount,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("oracle limited to {cap} vertices, got {n}")]
    TooLarge { n: usize, cap: usize },
    #[error("oracle found more than {0} paths")]
    TooManyPaths(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessViolation {
    #[error("expected {expected} paths, got {got}")]
    Count { expected: usize, got: usize },
    #[error("path {0} is not a path of the host")]
    NotAPath(usize),
    #[error("path {0} does not run from S to T")]
    Ends(usize),
    #[error("paths {0} and {1} are at distance {2}")]
    TooClose(usize, usize, Distance),
}

fn check_query(g: &Graph, q: &SpreadPathQuery) -> Result<(), MengerError> {
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
    q.sources.check_range(g.vertex_count())?;
    q.sinks.check_range(g.vertex_count())?;
    Ok(())
}

/// Least pairwise distance of a family; infinite below two paths.
pub fn min_pairwise_distance(g: &Graph, paths: &[Vec<Vertex>]) -> Distance {
    let sets: Vec<VertexSet> = paths.iter().map(|p| p.iter().copied().collect()).collect();
    let mut best = Distance::Infinite;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            best = best.min(set_distance(g, &sets[i], &sets[j]).expect("paths are non-empty"));
        }
    }
    best
}

pub(crate) fn witness(g: &Graph, paths: Vec<Vec<Vertex>>) -> SpreadPathWitness {
    let min_pairwise_distance = min_pairwise_distance(g, &paths);
    SpreadPathWitness {
        paths,
        min_pairwise_distance,
    }
}

/// Re-checks a witness with plain distance computations.
pub fn verify_spread_paths(
    g: &Graph,
    q: &SpreadPathQuery,
    paths: &[Vec<Vertex>],
) -> Result<(), WitnessViolation> {
    if paths.len() != q.count {
        return Err(WitnessViolation::Count {
            expected: q.count,
            got: paths.len(),
        });
    }
    for (i, p) in paths.iter().enumerate() {
        let distinct: VertexSet = p.iter().copied().collect();
        let simple = !p.is_empty()
            && distinct.len() == p.len()
            && p.iter().all(|&v| v < g.vertex_count())
            && p.windows(2).all(|w| g.has_edge(w[0], w[1]));
        if !simple {
            return Err(WitnessViolation::NotAPath(i));
        }
        if !q.sources.contains(p[0]) || !q.sinks.contains(*p.last().unwrap()) {
            return Err(WitnessViolation::Ends(i));
        }
    }
    let need = Distance::from_int(q.distance as i64);
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            let a: VertexSet = paths[i].iter().copied().collect();
            let b: VertexSet = paths[j].iter().copied().collect();
            let d = set_distance(g, &a, &b).expect("paths are non-empty");
            if d < need {
                return Err(WitnessViolation::TooClose(i, j, d));
            }
        }
    }
    Ok(())
}

/// Shortest `(S, T)`-path, from its `S` end.
fn shortest_path(g: &Graph, sources: &VertexSet, sinks: &VertexSet) -> Option<Vec<Vertex>> {
    let n = g.vertex_count();
    let goal = sinks.to_flags(n);
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in sources.iter() {
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
            path.reverse();
            return Some(path);
        }
        for &y in g.neighbors(x) {
            if parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}

enum Stop {
    Found,
    Budget,
}

/// Budgeted exhaustive search for `count` paths pairwise at least
/// `distance` apart.
pub fn find_spread_paths(
    g: &Graph,
    q: &SpreadPathQuery,
) -> Result<Verdict<SpreadPathWitness>, MengerError> {
    check_query(g, q)?;
    if q.distance == 0 {
        return Ok(match shortest_path(g, &q.sources, &q.sinks) {
            Some(p) => Verdict::Found(witness(g, vec![p; q.count])),
            None => Verdict::NoneExhaustive,
        });
    }
    let n = g.vertex_count();
    let mut search = Search {
        g,
        q,
        sweeper: Sweeper::new(g),
        is_source: q.sources.to_flags(n),
        is_sink: q.sinks.to_flags(n),
        blocked: vec![0; n],
        on_path: vec![false; n],
        touch: vec![0; n],
        paths: Vec::new(),
        expansions: 0,
    };
    Ok(match search.place(0) {
        ControlFlow::Break(Stop::Found) => {
            let paths = search.paths.clone();
            debug_assert!(verify_spread_paths(g, q, &paths).is_ok());
            Verdict::Found(witness(g, paths))
        }
        ControlFlow::Break(Stop::Budget) => Verdict::Inconclusive {
            expansions: search.expansions,
        },
        ControlFlow::Continue(()) => Verdict::NoneExhaustive,
    })
}

struct Search<'a> {
    g: &'a Graph,
    q: &'a SpreadPathQuery,
    sweeper: Sweeper<'a>,
    is_source: Vec<bool>,
    is_sink: Vec<bool>,
    /// Number of finished paths closer than `distance` to each vertex.
    blocked: Vec<u32>,
    on_path: Vec<bool>,
    /// Number of current-path vertices adjacent to each vertex.
    touch: Vec<u32>,
    paths: Vec<Vec<Vertex>>,
    expansions: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> ControlFlow<Stop> {
        self.expansions += 1;
        if self.expansions > self.q.budget {
            ControlFlow::Break(Stop::Budget)
        } else {
            ControlFlow::Continue(())
        }
    }

    fn commit(&mut self, path: &[Vertex], delta: i32) {
        let reach = Reach::Below(crate::graph::Rational::from_integer(self.q.distance as i64));
        let near: Vec<Vertex> = self.sweeper.run(path.iter().copied(), reach).to_vec();
        for v in near {
            self.blocked[v] = self.blocked[v].wrapping_add_signed(delta);
        }
    }

    fn enter(&mut self, v: Vertex) {
        self.on_path[v] = true;
        for &u in self.g.neighbors(v) {
            self.touch[u] += 1;
        }
    }

    fn leave(&mut self, v: Vertex) {
        self.on_path[v] = false;
        for &u in self.g.neighbors(v) {
            self.touch[u] -= 1;
        }
    }

    fn finish(&mut self, i: usize, path: Vec<Vertex>) -> ControlFlow<Stop> {
        let start = path[0];
        self.commit(&path, 1);
        self.paths.push(path);
        if i + 1 == self.q.count {
            return ControlFlow::Break(Stop::Found);
        }
        self.place_from(i + 1, start + 1)?;
        let path = self.paths.pop().unwrap();
        self.commit(&path, -1);
        ControlFlow::Continue(())
    }

    fn place(&mut self, i: usize) -> ControlFlow<Stop> {
        self.place_from(i, 0)
    }

    fn place_from(&mut self, i: usize, min_start: Vertex) -> ControlFlow<Stop> {
        let starts: Vec<Vertex> = self
            .q
            .sources
            .iter()
            .filter(|&s| s >= min_start && self.blocked[s] == 0)
            .collect();
        for s in starts {
            self.tick()?;
            if self.is_sink[s] {
                self.finish(i, vec![s])?;
                continue;
            }
            let layers = self.layers();
            if layers[s] == u32::MAX {
                continue;
            }
            self.walk(i, s, &layers)?;
        }
        ControlFlow::Continue(())
    }

    /// Hops to `T` avoiding blocked vertices and `S`.
    fn layers(&self) -> Vec<u32> {
        let n = self.g.vertex_count();
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        for t in self.q.sinks.iter() {
            if self.blocked[t] == 0 && !self.is_source[t] {
                dist[t] = 0;
                queue.push_back(t);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &y in self.g.neighbors(x) {
                if dist[y] != u32::MAX || self.blocked[y] != 0 {
                    continue;
                }
                dist[y] = dist[x] + 1;
                if !self.is_source[y] {
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    fn next_steps(&self, last: Vertex, layers: &[u32]) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .g
            .neighbors(last)
            .iter()
            .copied()
            .filter(|&y| {
                !self.on_path[y]
                    && self.touch[y] == 1
                    && self.blocked[y] == 0
                    && !self.is_source[y]
                    && layers[y] != u32::MAX
            })
            .collect();
        out.sort_by_key(|&y| (layers[y], y));
        out
    }

    /// Depth-first over induced paths from `start`, without recursion so
    /// long paths in big hosts are safe.
    fn walk(&mut self, i: usize, start: Vertex, layers: &[u32]) -> ControlFlow<Stop> {
        let mut path = vec![start];
        self.enter(start);
        let mut frames = vec![(self.next_steps(start, layers), 0usize)];
        while let Some((steps, idx)) = frames.last_mut() {
            if *idx == steps.len() {
                frames.pop();
                let v = path.pop().unwrap();
                self.leave(v);
                continue;
            }
            let y = steps[*idx];
            *idx += 1;
            if let ControlFlow::Break(stop) = self.tick() {
                for &v in &path {
                    self.leave(v);
                }
                return ControlFlow::Break(stop);
            }
            if self.is_sink[y] {
                let mut done = path.clone();
                done.push(y);
                for &v in &path {
                    self.leave(v);
                }
                let result = self.finish(i, done);
                for &v in &path {
                    self.enter(v);
                }
                if result.is_break() {
                    for &v in &path {
                        self.leave(v);
                    }
                    return result;
                }
                continue;
            }
            path.push(y);
            self.enter(y);
            let next = self.next_steps(y, layers);
            frames.push((next, 0));
        }
        ControlFlow::Continue(())
    }
}
