use std::ops::ControlFlow;

use num_traits::Zero;

use crate::graph::{
    is_connected_set, neighborhood, Graph, GraphError, Rational, Reach, Sweeper, VertexSet,
};

/// Result of [`merge_close_sets`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeOutcome {
    pub sets: Vec<VertexSet>,
    /// `index_map[i]` is the output set that absorbed input set `i`.
    pub index_map: Vec<usize>,
    /// Number of merge steps, `xs.len() - sets.len()`.
    pub merges: usize,
}

/// Merges connected sets until they are pairwise at distance at least `eps`.
///
/// While some pair is closer than `eps`, the lexicographically first such
/// pair `(A, B)` is replaced by `N^eps[A] ∪ B`, kept at `A`'s position. The
/// output sets are connected, pairwise `eps`-separated, contain the inputs,
/// and stay within `N^{merges * eps}` of the input union.
pub fn merge_close_sets(
    g: &Graph,
    xs: &[VertexSet],
    eps: Rational,
) -> Result<MergeOutcome, GraphError> {
    if xs.is_empty() {
        return Err(GraphError::EmptySet);
    }
    if eps <= Rational::zero() {
        return Err(GraphError::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    for (i, x) in xs.iter().enumerate() {
        x.check_range(g.vertex_count())?;
        if !is_connected_set(g, x) {
            return Err(GraphError::InvalidArgument(format!(
                "input set {i} is empty or disconnected"
            )));
        }
    }

    let mut sets: Vec<VertexSet> = xs.to_vec();
    let mut owner: Vec<usize> = (0..xs.len()).collect();
    let mut sweeper = Sweeper::new(g);
    let mut stamp = vec![usize::MAX; g.vertex_count()];
    let mut merges = 0;
    while let Some((a, b)) = first_close_pair(&mut sweeper, &mut stamp, &sets, eps) {
        let grown = neighborhood(g, &sets[a], eps)?.union(&sets[b]);
        sets[a] = grown;
        sets.remove(b);
        for o in owner.iter_mut() {
            if *o == b {
                *o = a;
            } else if *o > b {
                *o -= 1;
            }
        }
        merges += 1;
    }
    Ok(MergeOutcome {
        sets,
        index_map: owner,
        merges,
    })
}

fn first_close_pair(
    sweeper: &mut Sweeper<'_>,
    stamp: &mut [usize],
    sets: &[VertexSet],
    eps: Rational,
) -> Option<(usize, usize)> {
    stamp.fill(usize::MAX);
    for (j, s) in sets.iter().enumerate() {
        for v in s.iter() {
            stamp[v] = j;
        }
    }
    // A vertex may lie in several sets; fall back to a direct scan then.
    let overlap = |a: usize| {
        (a + 1..sets.len()).find(|&b| sets[a].intersects(&sets[b]))
    };
    for (a, set) in sets.iter().enumerate() {
        if let Some(b) = overlap(a) {
            return Some((a, b));
        }
        let mut best: Option<usize> = None;
        sweeper.run_with(set.iter(), Reach::Below(eps), |v, _| {
            let j = stamp[v];
            if j != usize::MAX && j > a && best.is_none_or(|b| j < b) {
                best = Some(j);
            }
            ControlFlow::Continue(())
        });
        if let Some(b) = best {
            return Some((a, b));
        }
    }
    None
}
