//! An explicit 2-fat model of the two-clique pattern inside an assembly.
//!
//! Clique vertices get balls around their hubs; clique edges get the middle
//! of their subdivided chains. The first cross edge runs through the root.
//! The other two run along the bottom of the gadget as two interleaved
//! strands: leaf `i` contributes the piece from `thick[2i]` up to the leaf
//! and down to `thick[2i+3]`, odd leaves to one strand and even leaves to
//! the other, joined by single bottom segments. The odd strand starts at
//! `S_2` and ends at `T_3`, so the second and third right-hand branch sets
//! trade hubs.

use thiserror::Error;

use super::{build_h, BuildError, GAssembly};
use crate::fatminor::{model_separation, verify_model, MinorModel, PairDistance, PatternGraph};
use crate::graph::{neighborhood, Rational, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("witness needs {0}")]
    Bounds(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("witness failed verification: {0}")]
    Unverified(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFatWitness {
    pub pattern: PatternGraph,
    /// Verified at fatness 2.
    pub model: MinorModel,
    /// Branch sets of `y_2` and `y_3` sit at the hubs `y_3*` and `y_2*`.
    pub twisted: bool,
    /// A closest pair of parts that must be separated.
    pub tightest: PairDistance,
}

pub fn build_2fat_witness(a: &GAssembly) -> Result<TwoFatWitness, WitnessError> {
    let p = a.params;
    let radius = p.subdivision.div_ceil(4);
    let checks = [
        (p.clique >= 4, "a clique of at least 4"),
        (p.depth >= 2, "depth at least 2"),
        (p.path_length >= 2, "path length at least 2"),
        (p.subdivision >= 6, "subdivision at least 6"),
        (p.connector >= 4, "connector length at least 4"),
        (
            p.connector > radius,
            "connector length above a quarter of the subdivision",
        ),
    ];
    if let Some((_, what)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(WitnessError::Bounds((*what).into()));
    }

    let g = &a.graph;
    let n = p.clique;
    let h = PatternGraph::new(build_h(n)?.graph).expect("pattern is non-empty");
    let right_hub = |i: usize| match i {
        1 => 2,
        2 => 1,
        i => i,
    };
    let ball = |hub: Vertex| {
        neighborhood(g, &VertexSet::singleton(hub), Rational::from_integer(radius as i64))
            .expect("hub is a vertex")
    };
    let mut branch = Vec::with_capacity(2 * n);
    for i in 0..n {
        branch.push(ball(a.left.hubs[i]));
    }
    for i in 0..n {
        branch.push(ball(a.right.hubs[right_hub(i)]));
    }

    // Chain vertex `j` (1-based) sits at distance `j` from the lower hub.
    let trimmed = |chain: &[Vertex]| -> VertexSet {
        chain[radius - 1..chain.len() + 1 - radius].iter().copied().collect()
    };
    let clique_chain = |star: &super::StarLabels, i: usize, j: usize| {
        trimmed(&star.chains[&(i.min(j), i.max(j))])
    };
    let tail = |path: &[Vertex]| -> Vec<Vertex> { path[radius - 1..].to_vec() };

    let gl = &a.gadget;
    let leaves = gl.leaves.len();
    let mut through_root = tail(&a.left_connectors[0]);
    through_root.push(gl.root);
    through_root.extend(tail(&a.right_connectors[0]));

    let piece = |i: usize| -> Vec<Vertex> {
        let mut out = gl.pendant_path(i, false);
        out.extend(gl.pendant_path(i, true));
        out
    };
    // Odd leaves (0-based even) start at thick[0] = S_2.
    let mut odd = tail(&a.left_connectors[1]);
    let mut even = tail(&a.left_connectors[2]);
    even.extend(gl.segment_path(1));
    for i in 0..leaves {
        let strand = if i % 2 == 0 { &mut odd } else { &mut even };
        strand.extend(piece(i));
        if 2 * i + 3 < gl.thick.len() - 1 {
            strand.extend(gl.segment_path(2 * i + 3));
        }
    }
    odd.extend(tail(&a.right_connectors[2]));
    even.extend(tail(&a.right_connectors[1]));

    let mut connector = Vec::with_capacity(h.edges().len());
    for &(u, v) in h.edges() {
        let set = if u < n && v < n {
            clique_chain(&a.left, u, v)
        } else if u >= n && v >= n {
            clique_chain(&a.right, right_hub(u - n), right_hub(v - n))
        } else {
            debug_assert_eq!(v - n, u);
            match u {
                0 => through_root.iter().copied().collect(),
                1 => odd.iter().copied().collect(),
                2 => even.iter().copied().collect(),
                _ => unreachable!("only three cross edges"),
            }
        };
        connector.push(set);
    }

    let two = Rational::from_integer(2);
    let model = MinorModel::new(branch, connector, two);
    verify_model(g, &h, &model, two).map_err(|e| WitnessError::Unverified(e.to_string()))?;
    let tightest = model_separation(g, &h, &model)
        .map_err(|e| WitnessError::Unverified(e.to_string()))?
        .expect("pattern has parts to separate");
    Ok(TwoFatWitness {
        pattern: h,
        model,
        twisted: true,
        tightest,
    })
}
