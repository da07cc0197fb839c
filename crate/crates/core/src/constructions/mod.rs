//! Labelled graph families: binary trees with a path through the leaves,
//! the gadget built from one, the two-clique pattern, and the assembly that
//! wires two subdivided cliques through a gadget.

mod witness;

use std::collections::BTreeMap;

use thiserror::Error;

pub use witness::{build_2fat_witness, TwoFatWitness, WitnessError};

use crate::graph::io::{LabelValue, Labels};
use crate::graph::{Graph, GraphBuilder, Vertex, VertexSet};

/// Largest graph any builder here will allocate unless told otherwise.
pub const DEFAULT_VERTEX_BUDGET: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("construction needs {needed} vertices, budget is {budget}")]
    TooLarge { needed: u128, budget: usize },
}

fn guard(needed: Option<u128>, budget: usize) -> Result<usize, BuildError> {
    match needed {
        Some(n) if n <= budget as u128 => Ok(n as usize),
        Some(n) => Err(BuildError::TooLarge { needed: n, budget }),
        None => Err(BuildError::TooLarge {
            needed: u128::MAX,
            budget,
        }),
    }
}

fn leaf_count(depth: u32) -> Option<u128> {
    1u128.checked_shl(depth).filter(|_| depth < 100)
}

/// Complete binary tree stored in heap order: root 0, children `2i+1` and
/// `2i+2`, leaves last and already in left-to-right order.
fn add_tree(b: &mut GraphBuilder, depth: u32) -> (Vertex, Vec<Vertex>) {
    let size = (1usize << (depth + 1)) - 1;
    let base = b.vertex_count();
    for _ in 0..size {
        b.add_vertex();
    }
    for i in 1..size {
        b.add_edge(base + (i - 1) / 2, base + i);
    }
    let first_leaf = (1usize << depth) - 1;
    (base, (first_leaf..size).map(|i| base + i).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeLeafPath {
    pub graph: Graph,
    pub depth: u32,
    pub root: Vertex,
    pub leaves: Vec<Vertex>,
}

impl TreeLeafPath {
    pub fn labels(&self) -> Labels {
        let mut out = Labels::new();
        out.insert("root".into(), LabelValue::Vertex(self.root));
        out.insert("leaves".into(), LabelValue::List(self.leaves.clone()));
        out
    }

    /// Parent of a non-root vertex.
    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        (v > 0).then(|| (v - 1) / 2)
    }
}

/// Complete binary tree of the given depth plus a path through its leaves.
pub fn build_tree_leaf_path(depth: u32) -> Result<TreeLeafPath, BuildError> {
    if depth == 0 {
        return Err(BuildError::InvalidParams("depth must be at least 1".into()));
    }
    guard(
        leaf_count(depth).and_then(|l| l.checked_mul(2)),
        DEFAULT_VERTEX_BUDGET,
    )?;
    let mut b = GraphBuilder::new();
    let (root, leaves) = add_tree(&mut b, depth);
    for w in leaves.windows(2) {
        b.add_edge(w[0], w[1]);
    }
    Ok(TreeLeafPath {
        graph: b.build().expect("tree with leaf path is simple"),
        depth,
        root,
        leaves,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetParams {
    pub depth: u32,
    /// Length of every bottom segment and pendant path.
    pub path_length: usize,
}

impl GadgetParams {
    pub fn new(depth: u32, path_length: usize) -> Result<Self, BuildError> {
        if depth == 0 || path_length == 0 {
            return Err(BuildError::InvalidParams(format!(
                "gadget needs depth >= 1 and path length >= 1, got ({depth}, {path_length})"
            )));
        }
        Ok(GadgetParams { depth, path_length })
    }

    /// `(2L-1) + (2L+2) + (2L+1)(s-1) + 2L(s-1)` with `L` leaves.
    pub fn vertex_count(&self) -> Option<u128> {
        let twice = leaf_count(self.depth)?.checked_mul(2)?;
        let inner = self.path_length as u128 - 1;
        (twice - 1)
            .checked_add(twice + 2)?
            .checked_add((twice + 1).checked_mul(inner)?)?
            .checked_add(twice.checked_mul(inner)?)
    }
}

/// Gadget labels, valid in whichever graph the gadget was built into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetLabels {
    pub params: GadgetParams,
    pub root: Vertex,
    pub tree_vertices: VertexSet,
    pub leaves: Vec<Vertex>,
    /// `thick[j]` is the `(j+1)`-th vertex of the bottom path.
    pub thick: Vec<Vertex>,
    /// `segments[j]`: internal vertices from `thick[j]` to `thick[j+1]`.
    pub segments: Vec<Vec<Vertex>>,
    /// Internal vertices of leaf `i`'s pendant to `thick[2i]`, from the leaf.
    pub pendants_left: Vec<Vec<Vertex>>,
    /// Internal vertices of leaf `i`'s pendant to `thick[2i+3]`, from the leaf.
    pub pendants_right: Vec<Vec<Vertex>>,
    pub pendant_mid_left: Vec<Vertex>,
    pub pendant_mid_right: Vec<Vertex>,
    pub sources: [Vertex; 3],
    pub sinks: [Vertex; 3],
}

impl GadgetLabels {
    pub fn insert_into(&self, out: &mut Labels) {
        out.insert("root".into(), LabelValue::Vertex(self.root));
        out.insert("leaves".into(), LabelValue::List(self.leaves.clone()));
        out.insert("thick".into(), LabelValue::List(self.thick.clone()));
        out.insert("S".into(), LabelValue::List(self.sources.to_vec()));
        out.insert("T".into(), LabelValue::List(self.sinks.to_vec()));
    }

    /// Leaf-`i` pendant from the leaf to its thick end, both ends included.
    pub fn pendant_path(&self, i: usize, right: bool) -> Vec<Vertex> {
        let (inner, end) = if right {
            (&self.pendants_right[i], self.thick[2 * i + 3])
        } else {
            (&self.pendants_left[i], self.thick[2 * i])
        };
        let mut out = Vec::with_capacity(inner.len() + 2);
        out.push(self.leaves[i]);
        out.extend(inner);
        out.push(end);
        out
    }

    /// Bottom segment from `thick[j]` to `thick[j+1]`, both ends included.
    pub fn segment_path(&self, j: usize) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.segments[j].len() + 2);
        out.push(self.thick[j]);
        out.extend(&self.segments[j]);
        out.push(self.thick[j + 1]);
        out
    }
}

fn add_gadget(b: &mut GraphBuilder, params: GadgetParams) -> GadgetLabels {
    let s = params.path_length;
    let (root, leaves) = add_tree(b, params.depth);
    let tree_vertices: VertexSet = (root..root + 2 * leaves.len() - 1).collect();
    let thick: Vec<Vertex> = (0..2 * leaves.len() + 2).map(|_| b.add_vertex()).collect();
    let segments = thick.windows(2).map(|w| b.add_path(w[0], w[1], s)).collect();
    let mut pendants_left = Vec::with_capacity(leaves.len());
    let mut pendants_right = Vec::with_capacity(leaves.len());
    for (i, &leaf) in leaves.iter().enumerate() {
        pendants_left.push(b.add_path(leaf, thick[2 * i], s));
        pendants_right.push(b.add_path(leaf, thick[2 * i + 3], s));
    }
    let mid = s.div_ceil(2);
    let at = |leaf: Vertex, inner: &Vec<Vertex>, end: Vertex| match mid {
        0 => leaf,
        m if m == s => end,
        m => inner[m - 1],
    };
    let pendant_mid_left = leaves
        .iter()
        .enumerate()
        .map(|(i, &l)| at(l, &pendants_left[i], thick[2 * i]))
        .collect();
    let pendant_mid_right = leaves
        .iter()
        .enumerate()
        .map(|(i, &l)| at(l, &pendants_right[i], thick[2 * i + 3]))
        .collect();
    let last = thick.len() - 1;
    GadgetLabels {
        params,
        root,
        tree_vertices,
        sources: [root, thick[0], thick[1]],
        sinks: [root, thick[last], thick[last - 1]],
        leaves,
        thick,
        segments,
        pendants_left,
        pendants_right,
        pendant_mid_left,
        pendant_mid_right,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NGadget {
    pub graph: Graph,
    pub labels: GadgetLabels,
}

impl NGadget {
    pub fn labels(&self) -> Labels {
        let mut out = Labels::new();
        self.labels.insert_into(&mut out);
        out
    }
}

pub fn build_n_gadget(params: GadgetParams) -> Result<NGadget, BuildError> {
    build_n_gadget_within(params, DEFAULT_VERTEX_BUDGET)
}

pub fn build_n_gadget_within(params: GadgetParams, budget: usize) -> Result<NGadget, BuildError> {
    GadgetParams::new(params.depth, params.path_length)?;
    let n = guard(params.vertex_count(), budget)?;
    let mut b = GraphBuilder::new();
    let labels = add_gadget(&mut b, params);
    debug_assert_eq!(b.vertex_count(), n);
    Ok(NGadget {
        graph: b.build().expect("gadget is simple"),
        labels,
    })
}

/// Two disjoint cliques `x` and `y` joined by `x_1y_1`, `x_2y_2`, `x_3y_3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HGraph {
    pub graph: Graph,
    pub n: usize,
    pub x: Vec<Vertex>,
    pub y: Vec<Vertex>,
}

impl HGraph {
    pub fn labels(&self) -> Labels {
        let mut out = Labels::new();
        out.insert("x_hubs".into(), LabelValue::List(self.x.clone()));
        out.insert("y_hubs".into(), LabelValue::List(self.y.clone()));
        out
    }
}

pub fn build_h(n: usize) -> Result<HGraph, BuildError> {
    if n < 4 {
        return Err(BuildError::InvalidParams(format!(
            "clique size must be at least 4, got {n}"
        )));
    }
    guard(Some(2 * n as u128), DEFAULT_VERTEX_BUDGET)?;
    let x: Vec<Vertex> = (0..n).collect();
    let y: Vec<Vertex> = (n..2 * n).collect();
    let mut edges = Vec::new();
    for side in [&x, &y] {
        for i in 0..n {
            for j in i + 1..n {
                edges.push((side[i], side[j]));
            }
        }
    }
    edges.extend((0..3).map(|i| (x[i], y[i])));
    Ok(HGraph {
        graph: Graph::new(2 * n, edges).expect("H is simple"),
        n,
        x,
        y,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AssemblyParams {
    pub clique: usize,
    pub depth: u32,
    pub path_length: usize,
    /// Internal vertices on each subdivided clique edge.
    pub subdivision: usize,
    /// Length of the paths from hubs to the gadget terminals.
    pub connector: usize,
}

impl AssemblyParams {
    pub fn new(
        clique: usize,
        depth: u32,
        path_length: usize,
        subdivision: usize,
        connector: usize,
    ) -> Result<Self, BuildError> {
        if clique < 4 || depth == 0 || path_length == 0 || subdivision == 0 || connector == 0 {
            return Err(BuildError::InvalidParams(format!(
                "assembly needs clique >= 4 and positive lengths, got \
                 ({clique}, {depth}, {path_length}, {subdivision}, {connector})"
            )));
        }
        Ok(AssemblyParams {
            clique,
            depth,
            path_length,
            subdivision,
            connector,
        })
    }

    pub fn gadget(&self) -> GadgetParams {
        GadgetParams {
            depth: self.depth,
            path_length: self.path_length,
        }
    }

    pub fn vertex_count(&self) -> Option<u128> {
        let n = self.clique as u128;
        let star = n.checked_add((n * (n - 1) / 2).checked_mul(self.subdivision as u128)?)?;
        (2 * star)
            .checked_add(self.gadget().vertex_count()?)?
            .checked_add(6 * (self.connector as u128 - 1))
    }
}

/// `(15, 13q², 14q², 16q², 16q²)`.
pub fn paper_params(q: u32) -> Result<AssemblyParams, BuildError> {
    if q == 0 {
        return Err(BuildError::InvalidParams("q must be positive".into()));
    }
    let sq = (q as usize)
        .checked_mul(q as usize)
        .ok_or_else(|| BuildError::InvalidParams(format!("q = {q} overflows")))?;
    let depth = u32::try_from(13 * sq)
        .map_err(|_| BuildError::InvalidParams(format!("q = {q} overflows")))?;
    AssemblyParams::new(15, depth, 14 * sq, 16 * sq, 16 * sq)
}

/// Subdivided clique with its hubs and edge chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarLabels {
    pub hubs: Vec<Vertex>,
    /// `chains[&(i, j)]` for `i < j`: internal vertices from hub `i` to hub `j`.
    pub chains: BTreeMap<(usize, usize), Vec<Vertex>>,
    pub region: VertexSet,
}

fn add_star(b: &mut GraphBuilder, n: usize, subdivision: usize) -> StarLabels {
    let start = b.vertex_count();
    let hubs: Vec<Vertex> = (0..n).map(|_| b.add_vertex()).collect();
    let mut chains = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            chains.insert((i, j), b.add_path(hubs[i], hubs[j], subdivision + 1));
        }
    }
    StarLabels {
        hubs,
        chains,
        region: (start..b.vertex_count()).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAssembly {
    pub graph: Graph,
    pub params: AssemblyParams,
    pub left: StarLabels,
    pub right: StarLabels,
    pub gadget: GadgetLabels,
    pub gadget_region: VertexSet,
    /// Internal vertices of the path from `x_i*` to `S_i`, from the hub.
    pub left_connectors: [Vec<Vertex>; 3],
    /// Internal vertices of the path from `y_i*` to `T_i`, from the hub.
    pub right_connectors: [Vec<Vertex>; 3],
}

impl GAssembly {
    pub fn labels(&self) -> Labels {
        let mut out = Labels::new();
        self.gadget.insert_into(&mut out);
        out.insert("x_hubs".into(), LabelValue::List(self.left.hubs.clone()));
        out.insert("y_hubs".into(), LabelValue::List(self.right.hubs.clone()));
        out
    }
}

pub fn build_g(params: AssemblyParams) -> Result<GAssembly, BuildError> {
    build_g_within(params, DEFAULT_VERTEX_BUDGET)
}

pub fn build_g_within(params: AssemblyParams, budget: usize) -> Result<GAssembly, BuildError> {
    let p = AssemblyParams::new(
        params.clique,
        params.depth,
        params.path_length,
        params.subdivision,
        params.connector,
    )?;
    let n = guard(p.vertex_count(), budget)?;
    let mut b = GraphBuilder::new();
    let left = add_star(&mut b, p.clique, p.subdivision);
    let right = add_star(&mut b, p.clique, p.subdivision);
    let gadget_start = b.vertex_count();
    let gadget = add_gadget(&mut b, p.gadget());
    let gadget_region = (gadget_start..b.vertex_count()).collect();
    let left_connectors =
        std::array::from_fn(|i| b.add_path(left.hubs[i], gadget.sources[i], p.connector));
    let right_connectors =
        std::array::from_fn(|i| b.add_path(right.hubs[i], gadget.sinks[i], p.connector));
    debug_assert_eq!(b.vertex_count(), n);
    Ok(GAssembly {
        graph: b.build().expect("assembly is simple"),
        params: p,
        left,
        right,
        gadget,
        gadget_region,
        left_connectors,
        right_connectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{set_distance, AllPairs, Distance};

    fn dist(g: &Graph, a: Vertex, b: Vertex) -> Distance {
        set_distance(g, &VertexSet::singleton(a), &VertexSet::singleton(b)).unwrap()
    }

    #[test]
    fn tree_leaf_path_sizes() {
        let t = build_tree_leaf_path(1).unwrap();
        assert_eq!(t.graph, Graph::complete(3));
        let t = build_tree_leaf_path(2).unwrap();
        assert_eq!((t.graph.vertex_count(), t.graph.edge_count()), (7, 9));
        assert_eq!(t.leaves, vec![3, 4, 5, 6]);
        for d in 1..=10 {
            let t = build_tree_leaf_path(d).unwrap();
            assert_eq!(t.graph.vertex_count(), (1 << (d + 1)) - 1);
            assert_eq!(t.graph.edge_count(), (1 << (d + 1)) - 2 + (1 << d) - 1);
        }
        assert!(build_tree_leaf_path(0).is_err());
    }

    #[test]
    fn tree_leaf_path_edges_by_hand() {
        let t = build_tree_leaf_path(2).unwrap();
        let expected = [
            (0, 1),
            (0, 2),
            (1, 3),
            (1, 4),
            (2, 5),
            (2, 6),
            (3, 4),
            (4, 5),
            (5, 6),
        ];
        assert_eq!(t.graph.edges(), &expected);
    }

    /// Counts the gadget by listing its pieces rather than by the formula.
    fn enumerate_gadget(depth: u32, s: usize) -> (usize, usize) {
        let leaves = 1usize << depth;
        let tree = 2 * leaves - 1;
        let thick = 2 * leaves + 2;
        let paths = (thick - 1) + 2 * leaves;
        (tree + thick + paths * (s - 1), (tree - 1) + paths * s)
    }

    #[test]
    fn gadget_counts() {
        let g = build_n_gadget(GadgetParams::new(2, 2).unwrap()).unwrap();
        assert_eq!(g.graph.vertex_count(), 34);
        assert_eq!(g.graph.edge_count(), 40);
        for d in 1..=6 {
            for s in 1..=5 {
                let p = GadgetParams::new(d, s).unwrap();
                let g = build_n_gadget(p).unwrap();
                let (n, m) = enumerate_gadget(d, s);
                assert_eq!((g.graph.vertex_count(), g.graph.edge_count()), (n, m));
                assert_eq!(p.vertex_count(), Some(n as u128));
            }
        }
        let big = GadgetParams::new(13, 14).unwrap();
        assert_eq!(big.vertex_count(), Some(458_766));
    }

    #[test]
    fn gadget_distances() {
        for (d, s) in [(2, 2), (3, 3), (2, 5)] {
            let g = build_n_gadget(GadgetParams::new(d, s).unwrap()).unwrap();
            let l = &g.labels;
            let ap = AllPairs::new(&g.graph).unwrap();
            let si = Distance::from_int(s as i64);
            assert_eq!(ap.get(l.sources[1], l.sources[2]), si);
            assert_eq!(l.sources[0], l.sinks[0]);
            assert_eq!(l.sinks[1], *l.thick.last().unwrap());
            for (i, &leaf) in l.leaves.iter().enumerate() {
                assert_eq!(ap.get(leaf, l.thick[2 * i]), si);
                assert_eq!(ap.get(leaf, l.thick[2 * i + 3]), si);
                assert_eq!(ap.get(l.root, leaf), Distance::from_int(d as i64));
                let half = Distance::from_int(s.div_ceil(2) as i64);
                assert_eq!(ap.get(leaf, l.pendant_mid_left[i]), half);
                assert_eq!(ap.get(leaf, l.pendant_mid_right[i]), half);
                if i % 2 == 0 {
                    assert_eq!(ap.get(leaf, l.leaves[i + 1]), Distance::from_int(2));
                }
            }
            for j in 0..l.thick.len() - 1 {
                assert_eq!(ap.get(l.thick[j], l.thick[j + 1]), si);
            }
        }
    }

    #[test]
    fn gadget_budget_guard() {
        let p = GadgetParams::new(52, 56).unwrap();
        assert!(matches!(build_n_gadget(p), Err(BuildError::TooLarge { .. })));
        let small = GadgetParams::new(2, 2).unwrap();
        assert!(matches!(
            build_n_gadget_within(small, 10),
            Err(BuildError::TooLarge { needed: 34, .. })
        ));
        assert!(GadgetParams::new(0, 3).is_err());
    }

    #[test]
    fn h_graph() {
        let h = build_h(15).unwrap();
        assert_eq!((h.graph.vertex_count(), h.graph.edge_count()), (30, 213));
        let h = build_h(4).unwrap();
        assert_eq!((h.graph.vertex_count(), h.graph.edge_count()), (8, 15));
        assert!(build_h(3).is_err());
        // Swapping y_2 and y_3 gives the twisted graph; swapping x_2 and x_3
        // as well maps it back onto H.
        let swap = |v: Vertex| match v {
            1 => 2,
            2 => 1,
            5 => 6,
            6 => 5,
            v => v,
        };
        let mapped = Graph::new(
            8,
            h.graph.edges().iter().map(|&(a, b)| (swap(a), swap(b))),
        )
        .unwrap();
        assert_eq!(mapped, h.graph);
    }

    #[test]
    fn paper_params_values() {
        let p = paper_params(1).unwrap();
        assert_eq!(
            (p.clique, p.depth, p.path_length, p.subdivision, p.connector),
            (15, 13, 14, 16, 16)
        );
        let p = paper_params(2).unwrap();
        assert_eq!(
            (p.clique, p.depth, p.path_length, p.subdivision, p.connector),
            (15, 52, 56, 64, 64)
        );
        assert_eq!(paper_params(3).unwrap().depth, 117);
        assert_eq!(paper_params(1).unwrap().vertex_count(), Some(462_246));
        assert!(matches!(
            build_g(paper_params(2).unwrap()),
            Err(BuildError::TooLarge { .. })
        ));
    }

    #[test]
    fn miniature_assembly() {
        let p = AssemblyParams::new(4, 2, 2, 6, 4).unwrap();
        let a = build_g(p).unwrap();
        // Stars: 4 hubs + 6 chains of 6; gadget 34; six connectors of 3.
        assert_eq!(a.graph.vertex_count(), 2 * (4 + 36) + 34 + 18);
        assert_eq!(a.graph.vertex_count(), 132);
        let g = &a.graph;
        for i in 0..4 {
            for j in i + 1..4 {
                assert_eq!(dist(g, a.left.hubs[i], a.left.hubs[j]), Distance::from_int(7));
            }
        }
        for i in 0..3 {
            assert_eq!(dist(g, a.left.hubs[i], a.gadget.sources[i]), Distance::from_int(4));
            assert_eq!(dist(g, a.right.hubs[i], a.gadget.sinks[i]), Distance::from_int(4));
        }
        assert!(!a.left.region.intersects(&a.right.region));
        assert!(!a.left.region.intersects(&a.gadget_region));
        let p = AssemblyParams::new(5, 3, 3, 8, 6).unwrap();
        assert_eq!(build_g(p).unwrap().graph.vertex_count(), 299);
    }

    #[test]
    fn hubs_separate_the_stars_from_the_gadget() {
        let a = build_g(AssemblyParams::new(4, 2, 3, 6, 4).unwrap()).unwrap();
        let cut: VertexSet = a.left.hubs[..3]
            .iter()
            .chain(&a.right.hubs[..3])
            .copied()
            .collect();
        let keep: Vec<Vertex> = a.graph.vertices().filter(|&v| !cut.contains(v)).collect();
        let sub = crate::graph::induced_subgraph(&a.graph, &keep.into_iter().collect()).unwrap();
        let local = |v: Vertex| sub.local(v).unwrap();
        let from = VertexSet::singleton(local(a.gadget.root));
        let left = VertexSet::singleton(local(a.left.hubs[3]));
        let right = VertexSet::singleton(local(a.right.hubs[3]));
        assert_eq!(set_distance(&sub.graph, &from, &left).unwrap(), Distance::Infinite);
        assert_eq!(set_distance(&sub.graph, &from, &right).unwrap(), Distance::Infinite);
    }

    #[test]
    fn construction_is_deterministic() {
        let p = AssemblyParams::new(4, 2, 2, 6, 4).unwrap();
        assert_eq!(build_g(p).unwrap(), build_g(p).unwrap());
    }
}
