//! Quasi-isometries between graphs, represented as vertex maps.
//!
//! A [`VertexMap`] is any total map with a constant `q >= 1`. It becomes a
//! [`QuasiIsometry`] only through [`VertexMap::certify`], which runs the
//! exhaustive check; the operations that rely on the inequalities take the
//! certified type.

use std::fmt;
use std::ops::Deref;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fatminor::{model_separation, verify_model, MinorModel, PatternGraph, VerifyError};
use crate::graph::io::{format_rational, parse_rational};
use crate::graph::{
    is_connected_set, neighborhood, power_graph, Distance, Graph, GraphError, Rational, Reach,
    Sweeper, Vertex, VertexSet,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap {
    domain: Graph,
    codomain: Graph,
    map: Vec<Vertex>,
    q: Rational,
}

/// A [`VertexMap`] that passed [`check_quasi_isometry`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsometry(VertexMap);

impl Deref for QuasiIsometry {
    type Target = VertexMap;

    fn deref(&self) -> &VertexMap {
        &self.0
    }
}

impl QuasiIsometry {
    pub fn into_map(self) -> VertexMap {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    LowerBound,
    UpperBound,
    Density,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::LowerBound => "lower-bound",
            ViolationKind::UpperBound => "upper-bound",
            ViolationKind::Density => "density",
        })
    }
}

/// First failing inequality. For the two distance bounds `witness` is a
/// domain pair `(x, y)` with `x < y`; for density it is the uncovered
/// codomain vertex, repeated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QiViolation {
    pub kind: ViolationKind,
    pub witness: (Vertex, Vertex),
    /// Codomain distance: between the images, or from the vertex to the image.
    pub achieved: Distance,
    /// The bound it breaks: a minimum for the lower bound, a maximum otherwise.
    pub required: Distance,
}

impl fmt::Display for QiViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.witness;
        match self.kind {
            ViolationKind::LowerBound => write!(
                f,
                "lower-bound at ({x}, {y}): image distance {} < {}",
                self.achieved, self.required
            ),
            ViolationKind::UpperBound => write!(
                f,
                "upper-bound at ({x}, {y}): image distance {} > {}",
                self.achieved, self.required
            ),
            ViolationKind::Density => write!(
                f,
                "density at {x}: distance {} to the image exceeds {}",
                self.achieved, self.required
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QiError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("map has {got} entries for a domain of {expected} vertices")]
    MapLength { expected: usize, got: usize },
    #[error("image {vertex} out of range for a codomain of {n} vertices")]
    ImageOutOfRange { vertex: Vertex, n: usize },
    #[error("constant {0} is below 1")]
    ConstantBelowOne(Rational),
    #[error("input set is empty or disconnected in the domain")]
    Disconnected,
    #[error("model does not verify in the domain: {0}")]
    Precondition(VerifyError),
    #[error("not a quasi-isometry: {0}")]
    Violation(QiViolation),
    #[error("codomain of the first map is not the domain of the second")]
    Mismatch,
}

impl VertexMap {
    pub fn new(
        domain: Graph,
        codomain: Graph,
        map: Vec<Vertex>,
        q: Rational,
    ) -> Result<Self, QiError> {
        if map.len() != domain.vertex_count() {
            return Err(QiError::MapLength {
                expected: domain.vertex_count(),
                got: map.len(),
            });
        }
        let n = codomain.vertex_count();
        if let Some(&vertex) = map.iter().find(|&&v| v >= n) {
            return Err(QiError::ImageOutOfRange { vertex, n });
        }
        if q < Rational::one() {
            return Err(QiError::ConstantBelowOne(q));
        }
        Ok(VertexMap {
            domain,
            codomain,
            map,
            q,
        })
    }

    pub fn domain(&self) -> &Graph {
        &self.domain
    }

    pub fn codomain(&self) -> &Graph {
        &self.codomain
    }

    pub fn map(&self) -> &[Vertex] {
        &self.map
    }

    pub fn q(&self) -> Rational {
        self.q
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.map[v]
    }

    pub fn image(&self, x: &VertexSet) -> VertexSet {
        x.iter().map(|v| self.map[v]).collect()
    }

    pub fn with_q(mut self, q: Rational) -> Result<Self, QiError> {
        if q < Rational::one() {
            return Err(QiError::ConstantBelowOne(q));
        }
        self.q = q;
        Ok(self)
    }

    pub fn certify(self) -> Result<QuasiIsometry, QiViolation> {
        check_quasi_isometry(&self)?;
        Ok(QuasiIsometry(self))
    }
}

/// Checks both distance inequalities for every domain pair, then that every
/// codomain vertex lies within `q` of the image. Pairs are scanned in
/// lexicographic order and the first failure is reported; unreachable pairs
/// are consistent only when unreachable on both sides.
pub fn check_quasi_isometry(m: &VertexMap) -> Result<(), QiViolation> {
    let n = m.domain.vertex_count();
    let q = m.q;
    let first = (0..n)
        .into_par_iter()
        .map_init(
            || (Sweeper::new(&m.domain), Sweeper::new(&m.codomain)),
            |(dom, cod), x| {
                dom.run([x], Reach::Unbounded);
                cod.run([m.map[x]], Reach::Unbounded);
                (x + 1..n).find_map(|y| {
                    let before = dom.distance(y);
                    let after = cod.distance(m.map[y]);
                    pair_violation(q, (x, y), before, after)
                })
            },
        )
        .find_first(Option::is_some)
        .flatten();
    if let Some(v) = first {
        return Err(v);
    }
    density_violation(m).map_or(Ok(()), Err)
}

fn pair_violation(
    q: Rational,
    witness: (Vertex, Vertex),
    before: Option<Rational>,
    after: Option<Rational>,
) -> Option<QiViolation> {
    let to_dist = |d: Option<Rational>| d.map_or(Distance::Infinite, Distance::Finite);
    match (before, after) {
        (None, None) => None,
        (None, Some(_)) => Some(QiViolation {
            kind: ViolationKind::LowerBound,
            witness,
            achieved: to_dist(after),
            required: Distance::Infinite,
        }),
        (Some(d), None) => Some(QiViolation {
            kind: ViolationKind::UpperBound,
            witness,
            achieved: Distance::Infinite,
            required: Distance::Finite(q * d + q),
        }),
        (Some(d), Some(e)) => {
            let lower = d / q - q;
            let upper = q * d + q;
            if e < lower {
                Some(QiViolation {
                    kind: ViolationKind::LowerBound,
                    witness,
                    achieved: Distance::Finite(e),
                    required: Distance::Finite(lower),
                })
            } else if e > upper {
                Some(QiViolation {
                    kind: ViolationKind::UpperBound,
                    witness,
                    achieved: Distance::Finite(e),
                    required: Distance::Finite(upper),
                })
            } else {
                None
            }
        }
    }
}

fn density_violation(m: &VertexMap) -> Option<QiViolation> {
    let n = m.codomain.vertex_count();
    if n == 0 {
        return None;
    }
    let violation = |v: Vertex, achieved: Distance| QiViolation {
        kind: ViolationKind::Density,
        witness: (v, v),
        achieved,
        required: Distance::Finite(m.q),
    };
    if m.map.is_empty() {
        return Some(violation(0, Distance::Infinite));
    }
    let mut sweeper = Sweeper::new(&m.codomain);
    sweeper.run(m.map.iter().copied(), Reach::Unbounded);
    (0..n).find_map(|v| match sweeper.distance(v) {
        Some(d) if d <= m.q => None,
        Some(d) => Some(violation(v, Distance::Finite(d))),
        None => Some(violation(v, Distance::Infinite)),
    })
}

/// The identity from `g` into its `k`-th power, with constant `k`.
pub fn identity_into_power(g: &Graph, k: usize) -> Result<VertexMap, QiError> {
    let power = power_graph(g, k)?;
    VertexMap::new(
        g.clone(),
        power,
        g.vertices().collect(),
        Rational::from_integer(k as i64),
    )
}

/// `N^{q+1}[φ(x)]` in the codomain, for a connected domain set `x`.
pub fn expand_image(qi: &QuasiIsometry, x: &VertexSet) -> Result<VertexSet, QiError> {
    x.check_range(qi.domain.vertex_count())?;
    if !is_connected_set(&qi.domain, x) {
        return Err(QiError::Disconnected);
    }
    let out = neighborhood(&qi.codomain, &qi.image(x), qi.q + Rational::one())?;
    assert!(
        is_connected_set(&qi.codomain, &out),
        "expanded image of a connected set is disconnected"
    );
    Ok(out)
}

/// A model pushed through a quasi-isometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushforward {
    /// The expanded parts, with fatness set to `achieved` when finite.
    pub model: MinorModel,
    /// Least distance between pushed parts that must be separated.
    pub achieved: Distance,
    /// The same quantity for the input model in the domain.
    pub domain_separation: Distance,
}

impl Pushforward {
    /// `D/q - q - 2(q+1)` for the domain separation `D`, or `None` when no
    /// pair needs separating.
    pub fn guaranteed(&self, q: Rational) -> Option<Distance> {
        match self.domain_separation {
            Distance::Finite(d) => Some(Distance::Finite(
                d / q - q - Rational::from_integer(2) * (q + Rational::one()),
            )),
            Distance::Infinite => None,
        }
    }
}

/// Expands every part of `mm` through `qi` and measures the result.
pub fn pushforward_model(
    qi: &QuasiIsometry,
    h: &PatternGraph,
    mm: &MinorModel,
) -> Result<Pushforward, QiError> {
    verify_model(&qi.domain, h, mm, mm.fatness).map_err(QiError::Precondition)?;
    let expand = |sets: &[VertexSet]| -> Result<Vec<VertexSet>, QiError> {
        sets.iter().map(|s| expand_image(qi, s)).collect()
    };
    let branch = expand(&mm.branch)?;
    let connector = expand(&mm.connector)?;
    let separation = |g: &Graph, m: &MinorModel| -> Result<Distance, QiError> {
        let pair = model_separation(g, h, m).map_err(|e| QiError::Precondition(e.into()))?;
        Ok(pair.map_or(Distance::Infinite, |p| p.distance))
    };
    let domain_separation = separation(&qi.domain, mm)?;
    let mut model = MinorModel::new(branch, connector, Rational::zero());
    let achieved = separation(&qi.codomain, &model)?;
    if let Distance::Finite(d) = achieved {
        model = model.with_fatness(d);
        debug_assert!(verify_model(&qi.codomain, h, &model, d).is_ok());
    }
    Ok(Pushforward {
        model,
        achieved,
        domain_separation,
    })
}

/// Sufficient constant for the composite of a `q1`- and a `q2`-quasi-isometry.
///
/// Density costs `q2` to reach the middle image, then up to `q1` there, which
/// the second map stretches to `q1*q2 + q2`; hence `2*q2` rather than `q2`.
pub fn composed_constant(q1: Rational, q2: Rational) -> Rational {
    q1 * q2 + q1 + Rational::from_integer(2) * q2
}

/// `second ∘ first` with [`composed_constant`]. The result is certified
/// again before it is returned.
pub fn compose(first: &QuasiIsometry, second: &QuasiIsometry) -> Result<QuasiIsometry, QiError> {
    if first.codomain != second.domain {
        return Err(QiError::Mismatch);
    }
    let map = first.map.iter().map(|&v| second.map[v]).collect();
    let q = composed_constant(first.q, second.q);
    VertexMap::new(first.domain.clone(), second.codomain.clone(), map, q)?
        .certify()
        .map_err(QiError::Violation)
}

/// `{"q": "num/den", "map": [...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapCertificate {
    pub q: String,
    pub map: Vec<Vertex>,
}

impl MapCertificate {
    pub fn from_map(m: &VertexMap) -> Self {
        MapCertificate {
            q: format_rational(m.q),
            map: m.map.clone(),
        }
    }

    pub fn parse_q(&self) -> Option<Rational> {
        parse_rational(&self.q)
    }

    pub fn into_map(self, domain: Graph, codomain: Graph) -> Result<VertexMap, QiError> {
        let q = self.parse_q().ok_or_else(|| {
            QiError::Graph(GraphError::InvalidArgument(format!("bad constant `{}`", self.q)))
        })?;
        VertexMap::new(domain, codomain, self.map, q)
    }
}
