//! Test hosts: every connected graph up to isomorphism on a few vertices,
//! and seeded random connected graphs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graph::{Graph, Rational, Vertex};

/// Largest order for which [`connected_graphs`] is offered; codes are
/// 64-bit upper triangles.
pub const CORPUS_MAX_VERTICES: usize = 11;

/// Every connected graph on `n` vertices up to isomorphism, each in its
/// canonical labelling, sorted by canonical code.
///
/// Graphs on `n` vertices are found by adding a vertex with a non-empty
/// neighbourhood to every connected graph on `n - 1` vertices: deleting a
/// non-cut vertex always leaves a connected graph, so nothing is missed.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= CORPUS_MAX_VERTICES, "corpus limited to {CORPUS_MAX_VERTICES} vertices");
    codes(n).into_iter().map(|c| decode(n, c)).collect()
}

/// All connected graphs with 1 to `max_n` vertices, by order then code.
pub fn corpus(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(connected_graphs).collect()
}

fn codes(n: usize) -> Vec<u64> {
    match n {
        0 => Vec::new(),
        1 => vec![0],
        _ => {
            let parents = codes(n - 1);
            let found: BTreeSet<u64> = parents
                .par_iter()
                .flat_map_iter(|&code| {
                    let adj = adjacency(n - 1, code);
                    (1u32..1 << (n - 1)).map(move |nb| {
                        let mut grown = adj.clone();
                        grown.push(nb);
                        for (v, row) in grown.iter_mut().enumerate().take(n - 1) {
                            if nb >> v & 1 == 1 {
                                *row |= 1 << (n - 1);
                            }
                        }
                        canonical_code(&grown)
                    })
                })
                .collect();
            found.into_iter().collect()
        }
    }
}

fn bit_index(n: usize, i: usize, j: usize) -> usize {
    // Row-major upper triangle: (0,1), (0,2), .., (1,2), ..
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn adjacency(n: usize, code: u64) -> Vec<u32> {
    let mut adj = vec![0u32; n];
    for i in 0..n {
        for j in i + 1..n {
            if code >> bit_index(n, i, j) & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

fn decode(n: usize, code: u64) -> Graph {
    let adj = adjacency(n, code);
    let edges = (0..n).flat_map(|i| {
        let row = adj[i];
        (i + 1..n).filter(move |&j| row >> j & 1 == 1).map(move |j| (i, j))
    });
    Graph::new(n, edges).expect("decoded graph is simple")
}

/// Code of `adj` under the labelling `order` (position -> vertex).
fn code_under(adj: &[u32], order: &[usize]) -> u64 {
    let n = order.len();
    let mut code = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            if adj[order[i]] >> order[j] & 1 == 1 {
                code |= 1 << bit_index(n, i, j);
            }
        }
    }
    code
}

/// Largest code over the leaves of the individualisation-refinement tree.
/// Refinement only looks at cell indices and neighbour counts, so the set
/// of leaves, and hence the maximum, is the same for isomorphic inputs.
pub fn canonical_code(adj: &[u32]) -> u64 {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let cells = refine(adj, vec![(0..n).collect()]);
    let mut best = 0u64;
    search(adj, cells, &mut best);
    best
}

fn search(adj: &[u32], cells: Vec<Vec<usize>>, best: &mut u64) {
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        *best = (*best).max(code_under(adj, &order));
        return;
    };
    for &v in &cells[target] {
        let mut split = cells[..target].to_vec();
        split.push(vec![v]);
        split.push(cells[target].iter().copied().filter(|&u| u != v).collect());
        split.extend_from_slice(&cells[target + 1..]);
        search(adj, refine(adj, split), best);
    }
}

/// Splits cells by the number of neighbours in every cell until stable.
fn refine(adj: &[u32], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let masks: Vec<u32> = cells
            .iter()
            .map(|c| c.iter().fold(0, |m, &v| m | 1 << v))
            .collect();
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let sig = masks.iter().map(|&m| (adj[v] & m).count_ones()).collect();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

/// Canonical code of a graph with at most [`CORPUS_MAX_VERTICES`] vertices.
pub fn graph_code(g: &Graph) -> u64 {
    assert!(g.vertex_count() <= CORPUS_MAX_VERTICES);
    let adj: Vec<u32> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | 1 << u))
        .collect();
    canonical_code(&adj)
}

/// Random connected graph: a random spanning tree plus each remaining pair
/// independently with probability `density`, then a random relabelling.
pub fn random_connected_graph(rng: &mut impl Rng, n: usize, density: f64) -> Graph {
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        edges.insert((perm[i].min(perm[j]), perm[i].max(perm[j])));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                edges.insert((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("random graph is simple")
}

/// [`random_connected_graph`] with weights `num/den`, `num` in
/// `1..=max_num` and `den` in `1..=max_den`.
pub fn random_weighted_graph(
    rng: &mut impl Rng,
    n: usize,
    density: f64,
    max_num: i64,
    max_den: i64,
) -> Graph {
    let g = random_connected_graph(rng, n, density);
    let weighted = g.edges().iter().map(|&(u, v)| {
        let w = Rational::new(rng.random_range(1..=max_num), rng.random_range(1..=max_den));
        (u, v, w)
    });
    Graph::weighted(n, weighted.collect::<Vec<_>>()).expect("positive weights")
}

/// Seeded generator used by every randomized check.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_connected_set;
    use crate::graph::VertexSet;

    #[test]
    fn known_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112, 853]);
    }

    #[test]
    fn eight_vertices() {
        assert_eq!(connected_graphs(8).len(), 11117);
    }

    #[test]
    fn all_connected_and_distinct() {
        let gs = connected_graphs(6);
        for g in &gs {
            assert!(is_connected_set(g, &VertexSet::full(6)));
        }
        let codes: BTreeSet<u64> = gs.iter().map(graph_code).collect();
        assert_eq!(codes.len(), gs.len());
    }

    #[test]
    fn code_is_invariant_under_relabelling() {
        let mut rng = seeded(7);
        for _ in 0..200 {
            let n = rng.random_range(1..=9);
            let g = random_connected_graph(&mut rng, n, 0.3);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = Graph::new(
                n,
                g.edges()
                    .iter()
                    .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v]))),
            )
            .unwrap();
            assert_eq!(graph_code(&g), graph_code(&h));
        }
    }

    #[test]
    fn random_graphs_are_connected_and_reproducible() {
        let a = random_connected_graph(&mut seeded(3), 10, 0.2);
        let b = random_connected_graph(&mut seeded(3), 10, 0.2);
        assert_eq!(a, b);
        assert!(is_connected_set(&a, &VertexSet::full(10)));
        let w = random_weighted_graph(&mut seeded(4), 8, 0.3, 5, 3);
        assert!(w.is_weighted());
    }
}
