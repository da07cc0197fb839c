use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::ops::ControlFlow;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::{Graph, GraphError, Rational, Vertex, VertexSet};

/// Shortest-path length, with unreachability as its own value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(Rational),
    Infinite,
}

impl Distance {
    pub fn zero() -> Self {
        Distance::Finite(Rational::zero())
    }

    pub fn from_int(d: i64) -> Self {
        Distance::Finite(Rational::from_integer(d))
    }

    pub fn finite(self) -> Option<Rational> {
        match self {
            Distance::Finite(r) => Some(r),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    /// `self >= bound` where `bound` is finite.
    pub fn at_least(self, bound: Rational) -> bool {
        match self {
            Distance::Finite(r) => r >= bound,
            Distance::Infinite => true,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(r) => write!(f, "{r}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// How far a sweep is allowed to go.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reach {
    Unbounded,
    /// Vertices at distance `<= r`.
    AtMost(Rational),
    /// Vertices at distance `< r`.
    Below(Rational),
}

impl Reach {
    fn admits(&self, d: Rational) -> bool {
        match *self {
            Reach::Unbounded => true,
            Reach::AtMost(r) => d <= r,
            Reach::Below(r) => d < r,
        }
    }

    fn max_hops(&self) -> Option<i64> {
        match *self {
            Reach::Unbounded => None,
            Reach::AtMost(r) => Some(r.floor().to_integer()),
            Reach::Below(r) => Some(r.ceil().to_integer() - 1),
        }
    }
}

const UNREACHED: u32 = u32::MAX;

/// Reusable multi-source shortest-path sweep.
///
/// Breadth-first on unweighted graphs, label-setting with a binary heap on
/// weighted ones. Only the entries touched by the previous run are reset, so
/// many bounded sweeps over a large graph stay proportional to the explored
/// region.
pub struct Sweeper<'g> {
    g: &'g Graph,
    hops: Vec<u32>,
    exact: Vec<Option<Rational>>,
    settled: Vec<bool>,
    order: Vec<Vertex>,
    touched: Vec<Vertex>,
    queue: VecDeque<Vertex>,
    heap: BinaryHeap<Reverse<(Rational, Vertex)>>,
}

impl<'g> Sweeper<'g> {
    pub fn new(g: &'g Graph) -> Self {
        let n = g.vertex_count();
        let weighted = g.is_weighted();
        Sweeper {
            g,
            hops: if weighted { Vec::new() } else { vec![UNREACHED; n] },
            exact: if weighted { vec![None; n] } else { Vec::new() },
            settled: if weighted { vec![false; n] } else { Vec::new() },
            order: Vec::new(),
            touched: Vec::new(),
            queue: VecDeque::new(),
            heap: BinaryHeap::new(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    fn reset(&mut self) {
        if self.g.is_weighted() {
            for &v in &self.touched {
                self.exact[v] = None;
                self.settled[v] = false;
            }
        } else {
            for &v in &self.touched {
                self.hops[v] = UNREACHED;
            }
        }
        self.touched.clear();
        self.order.clear();
        self.queue.clear();
        self.heap.clear();
    }

    /// Sweeps from `sources` and returns the reached vertices in
    /// non-decreasing distance order.
    pub fn run<I>(&mut self, sources: I, reach: Reach) -> &[Vertex]
    where
        I: IntoIterator<Item = Vertex>,
    {
        self.run_with(sources, reach, |_, _| ControlFlow::Continue(()));
        &self.order
    }

    /// Like [`Sweeper::run`], calling `visit(v, dist)` as each vertex is
    /// settled; returning `Break` stops the sweep early.
    pub fn run_with<I, F>(&mut self, sources: I, reach: Reach, mut visit: F)
    where
        I: IntoIterator<Item = Vertex>,
        F: FnMut(Vertex, Rational) -> ControlFlow<()>,
    {
        self.reset();
        if self.g.is_weighted() {
            self.run_weighted(sources, reach, &mut visit);
        } else {
            self.run_unweighted(sources, reach, &mut visit);
        }
    }

    fn run_unweighted<I, F>(&mut self, sources: I, reach: Reach, visit: &mut F)
    where
        I: IntoIterator<Item = Vertex>,
        F: FnMut(Vertex, Rational) -> ControlFlow<()>,
    {
        let limit = reach.max_hops();
        if limit.is_some_and(|l| l < 0) {
            return;
        }
        for s in sources {
            if self.hops[s] == UNREACHED {
                self.hops[s] = 0;
                self.touched.push(s);
                self.queue.push_back(s);
            }
        }
        while let Some(v) = self.queue.pop_front() {
            let d = self.hops[v];
            self.order.push(v);
            if visit(v, Rational::from_integer(d as i64)).is_break() {
                return;
            }
            if limit.is_some_and(|l| d as i64 >= l) {
                continue;
            }
            for &u in self.g.neighbors(v) {
                if self.hops[u] == UNREACHED {
                    self.hops[u] = d + 1;
                    self.touched.push(u);
                    self.queue.push_back(u);
                }
            }
        }
    }

    fn run_weighted<I, F>(&mut self, sources: I, reach: Reach, visit: &mut F)
    where
        I: IntoIterator<Item = Vertex>,
        F: FnMut(Vertex, Rational) -> ControlFlow<()>,
    {
        let zero = Rational::zero();
        if !reach.admits(zero) {
            return;
        }
        for s in sources {
            if self.exact[s].is_none() {
                self.exact[s] = Some(zero);
                self.touched.push(s);
                self.heap.push(Reverse((zero, s)));
            }
        }
        while let Some(Reverse((d, v))) = self.heap.pop() {
            if self.settled[v] || self.exact[v] != Some(d) {
                continue;
            }
            self.settled[v] = true;
            self.order.push(v);
            if visit(v, d).is_break() {
                return;
            }
            for (u, e) in self.g.incident(v) {
                if self.settled[u] {
                    continue;
                }
                let nd = d + self.g.weight(e);
                if !reach.admits(nd) {
                    continue;
                }
                match self.exact[u] {
                    Some(old) if old <= nd => {}
                    prev => {
                        if prev.is_none() {
                            self.touched.push(u);
                        }
                        self.exact[u] = Some(nd);
                        self.heap.push(Reverse((nd, u)));
                    }
                }
            }
        }
    }

    /// Vertices settled by the last run, in non-decreasing distance order.
    pub fn reached(&self) -> &[Vertex] {
        &self.order
    }

    /// Distance found by the last run, if `v` was settled.
    pub fn distance(&self, v: Vertex) -> Option<Rational> {
        if self.g.is_weighted() {
            if self.settled[v] {
                self.exact[v]
            } else {
                None
            }
        } else {
            match self.hops[v] {
                UNREACHED => None,
                h => Some(Rational::from_integer(h as i64)),
            }
        }
    }

    /// Hop count from the last run on an unweighted graph.
    pub fn hops(&self, v: Vertex) -> Option<u32> {
        debug_assert!(!self.g.is_weighted());
        match self.hops[v] {
            UNREACHED => None,
            h => Some(h),
        }
    }
}

/// Distances from a source set to every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    sources: VertexSet,
    dist: Vec<Distance>,
}

impl DistanceTable {
    pub fn sources(&self) -> &VertexSet {
        &self.sources
    }

    pub fn get(&self, v: Vertex) -> Distance {
        self.dist[v]
    }

    pub fn as_slice(&self) -> &[Distance] {
        &self.dist
    }
}

/// Multi-source shortest-path distances.
pub fn distances(g: &Graph, sources: &VertexSet) -> Result<DistanceTable, GraphError> {
    if sources.is_empty() {
        return Err(GraphError::EmptySet);
    }
    sources.check_range(g.vertex_count())?;
    let mut sweeper = Sweeper::new(g);
    sweeper.run(sources.iter(), Reach::Unbounded);
    let dist = g
        .vertices()
        .map(|v| match sweeper.distance(v) {
            Some(d) => Distance::Finite(d),
            None => Distance::Infinite,
        })
        .collect();
    Ok(DistanceTable {
        sources: sources.clone(),
        dist,
    })
}

/// Length of a shortest `(x, y)`-path; zero when the sets meet.
pub fn set_distance(g: &Graph, x: &VertexSet, y: &VertexSet) -> Result<Distance, GraphError> {
    if x.is_empty() || y.is_empty() {
        return Err(GraphError::EmptySet);
    }
    x.check_range(g.vertex_count())?;
    y.check_range(g.vertex_count())?;
    let target = y.to_flags(g.vertex_count());
    let mut found = Distance::Infinite;
    Sweeper::new(g).run_with(x.iter(), Reach::Unbounded, |v, d| {
        if target[v] {
            found = Distance::Finite(d);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(found)
}

/// Closed `r`-neighbourhood `N^r[y]`.
pub fn neighborhood(g: &Graph, y: &VertexSet, r: Rational) -> Result<VertexSet, GraphError> {
    if y.is_empty() {
        return Err(GraphError::EmptySet);
    }
    if r < Rational::zero() {
        return Err(GraphError::InvalidArgument(format!("negative radius {r}")));
    }
    y.check_range(g.vertex_count())?;
    let mut sweeper = Sweeper::new(g);
    Ok(sweeper.run(y.iter(), Reach::AtMost(r)).iter().copied().collect())
}

/// Dense all-pairs distance table, built with one sweep per source.
#[derive(Clone, Debug)]
pub struct AllPairs {
    n: usize,
    dist: Vec<Option<Rational>>,
}

impl AllPairs {
    /// Refuses hosts above this many vertices.
    pub const MAX_VERTICES: usize = 1 << 12;

    pub fn new(g: &Graph) -> Result<Self, GraphError> {
        let n = g.vertex_count();
        if n > Self::MAX_VERTICES {
            return Err(GraphError::InvalidArgument(format!(
                "all-pairs table limited to {} vertices, got {n}",
                Self::MAX_VERTICES
            )));
        }
        let rows: Vec<Vec<Option<Rational>>> = (0..n)
            .into_par_iter()
            .map_init(
                || Sweeper::new(g),
                |sw, s| {
                    sw.run([s], Reach::Unbounded);
                    (0..n).map(|v| sw.distance(v)).collect()
                },
            )
            .collect();
        Ok(AllPairs {
            n,
            dist: rows.into_iter().flatten().collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> Distance {
        match self.dist[u * self.n + v] {
            Some(d) => Distance::Finite(d),
            None => Distance::Infinite,
        }
    }

    /// Hop count for unweighted hosts; `None` when unreachable.
    pub fn hops(&self, u: Vertex, v: Vertex) -> Option<u64> {
        self.dist[u * self.n + v].map(|d| d.to_integer().to_u64().unwrap_or(u64::MAX))
    }

    /// Finite eccentricity maximum over connected pairs.
    pub fn diameter(&self) -> Option<Rational> {
        self.dist.iter().flatten().copied().max()
    }
}
