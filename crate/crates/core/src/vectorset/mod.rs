//! Finite centrally symmetric vector sets and the combinatorics built on them:
//! semi-stars, flats, congruence and symmetry maps.

mod congruence;
mod flat;
mod map;
mod semistar;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm};
use crate::tolerance::ToleranceContext;

pub use congruence::{are_congruent, CongruenceProbe};
pub use flat::{flats, span_closure, Flat};
pub use map::{apply, stabilizes, OrthogonalMap};
pub use semistar::{semi_stars, SemiStar, SemiStarEnumeration, DEFAULT_MAX_CHAMBERS};

/// A point or direction in ℝ^d.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }
}

impl Deref for Vector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl From<&[f64]> for Vector {
    fn from(v: &[f64]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x:.6}")?;
        }
        write!(f, ")")
    }
}

/// Tolerant exact-match lookup of points, keyed by their projection onto a
/// fixed generic direction.
#[derive(Clone, Debug)]
pub struct PointIndex {
    dim: usize,
    key: Vec<f64>,
    coords: Vec<f64>,
    sorted: Vec<(f64, usize)>,
}

impl PointIndex {
    pub fn new<'a, I>(dim: usize, points: I) -> Self
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let key = linalg::generic_direction(dim, 7);
        let mut coords = Vec::new();
        let mut sorted = Vec::new();
        for (i, p) in points.into_iter().enumerate() {
            debug_assert_eq!(p.len(), dim);
            sorted.push((dot(p, &key), i));
            coords.extend_from_slice(p);
        }
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        Self {
            dim,
            key,
            coords,
            sorted,
        }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Smallest index of a stored point equal to `v` within tolerance.
    pub fn find(&self, v: &[f64], tol: &ToleranceContext) -> Option<usize> {
        let p = dot(v, &self.key);
        let window = 2.0 * tol.threshold(norm(v)) + 1e-300;
        let start = self.sorted.partition_point(|&(q, _)| q < p - window);
        self.sorted[start..]
            .iter()
            .take_while(|&&(q, _)| q <= p + window)
            .filter(|&&(_, i)| tol.vec_eq(self.point(i), v))
            .map(|&(_, i)| i)
            .min()
    }
}

/// A finite, centrally symmetric, reduced set of nonzero vectors.
///
/// Vectors are stored in ± pairs: index `2k` holds the representative `r_k`
/// of pair `k` and index `2k + 1` holds `-r_k`. Representatives are oriented
/// so that their first significant coordinate is positive and are sorted
/// lexicographically.
#[derive(Clone, Debug)]
pub struct VectorSet {
    dim: usize,
    coords: Vec<f64>,
    tol: ToleranceContext,
    index: PointIndex,
}

struct LineGroup {
    dir: Vec<f64>,
    plus: Vec<f64>,
    minus: Vec<f64>,
}

fn orient(v: &mut [f64]) {
    let n = norm(v);
    if let Some(x) = v.iter().find(|x| x.abs() > 1e-6 * n) {
        if *x < 0.0 {
            v.iter_mut().for_each(|y| *y = -*y);
        }
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

impl VectorSet {
    /// Builds the reduced, centrally symmetric set generating the same
    /// zonotope as the Minkowski sum of the segments `[0, v]` for `v` in `raw`
    /// together with their negatives. Zero vectors are dropped; parallel
    /// vectors pointing the same way are summed; for a line carrying vectors on
    /// both sides the larger of the two one-sided sums is kept.
    pub fn canonicalize(raw: &[Vector], tol: ToleranceContext) -> Result<Self> {
        let dim = raw.first().ok_or(Error::EmptyInput)?.dim();
        if dim == 0 {
            return Err(Error::UnsupportedDimension {
                dim,
                what: "vector sets",
            });
        }
        let mut groups: Vec<LineGroup> = Vec::new();
        for (index, v) in raw.iter().enumerate() {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite { index });
            }
            let n = v.norm();
            if n <= tol.eps_abs {
                continue;
            }
            let u = linalg::scaled(v, 1.0 / n);
            let neg: Vec<f64> = u.iter().map(|x| -x).collect();
            if let Some(g) = groups.iter_mut().find(|g| tol.vec_eq(&g.dir, &u)) {
                linalg::add_assign(&mut g.plus, v);
            } else if let Some(g) = groups.iter_mut().find(|g| tol.vec_eq(&g.dir, &neg)) {
                let flipped: Vec<f64> = v.iter().map(|x| -x).collect();
                linalg::add_assign(&mut g.minus, &flipped);
            } else {
                let mut dir = u;
                orient(&mut dir);
                let mut g = LineGroup {
                    plus: vec![0.0; dim],
                    minus: vec![0.0; dim],
                    dir,
                };
                if dot(&g.dir, v) > 0.0 {
                    linalg::add_assign(&mut g.plus, v);
                } else {
                    let flipped: Vec<f64> = v.iter().map(|x| -x).collect();
                    linalg::add_assign(&mut g.minus, &flipped);
                }
                groups.push(g);
            }
        }
        if groups.is_empty() {
            return Err(Error::EmptyInput);
        }
        let reps = groups
            .into_iter()
            .map(|g| if norm(&g.plus) >= norm(&g.minus) { g.plus } else { g.minus })
            .collect();
        Ok(Self::from_reduced_reps(dim, reps, tol))
    }

    /// Assembles a set from representatives already known to be pairwise
    /// non-parallel and nonzero.
    fn from_reduced_reps(dim: usize, mut reps: Vec<Vec<f64>>, tol: ToleranceContext) -> Self {
        for r in reps.iter_mut() {
            orient(r);
        }
        reps.sort_by(|a, b| lex_cmp(a, b));
        let mut coords = Vec::with_capacity(2 * reps.len() * dim);
        for r in &reps {
            coords.extend_from_slice(r);
            coords.extend(r.iter().map(|x| -x));
        }
        let index = PointIndex::new(dim, coords.chunks_exact(dim));
        Self {
            dim,
            coords,
            tol,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors (twice the number of ± pairs).
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn pair_count(&self) -> usize {
        self.len() / 2
    }

    pub fn tol(&self) -> &ToleranceContext {
        &self.tol
    }

    pub fn with_tolerance(&self, tol: ToleranceContext) -> Self {
        let mut out = self.clone();
        out.tol = tol;
        out
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Representative of pair `k`.
    pub fn representative(&self, k: usize) -> &[f64] {
        self.vector(2 * k)
    }

    /// Index of the negation of vector `i`.
    #[inline]
    pub fn partner(i: usize) -> usize {
        i ^ 1
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn representatives(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.iter().step_by(2)
    }

    pub fn to_vectors(&self) -> Vec<Vector> {
        self.iter().map(Vector::from).collect()
    }

    pub fn index_of(&self, v: &[f64]) -> Option<usize> {
        if v.len() != self.dim {
            return None;
        }
        self.index.find(v, &self.tol)
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        self.index_of(v).is_some()
    }

    pub fn max_norm(&self) -> f64 {
        self.representatives().map(norm).fold(0.0, f64::max)
    }

    /// Orthonormal basis of the span, built from the representatives in order.
    pub fn span_basis(&self) -> Vec<Vec<f64>> {
        linalg::orthonormal_basis(self.representatives(), &self.tol)
    }

    pub fn rank(&self) -> usize {
        self.span_basis().len()
    }

    pub fn spans_ambient(&self) -> bool {
        self.rank() == self.dim
    }

    /// The vectors at the given indices, re-canonicalized as their own set.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let raw: Vec<Vector> = indices.iter().map(|&i| Vector::from(self.vector(i))).collect();
        Self::canonicalize(&raw, self.tol)
    }

    /// True when the two sets contain the same vectors within tolerance.
    pub fn same_set(&self, other: &VectorSet) -> bool {
        self.dim == other.dim
            && self.len() == other.len()
            && self.iter().all(|v| other.contains(v))
    }
}

/// Free-function form of [`VectorSet::canonicalize`].
pub fn canonicalize(raw: &[Vector], tol: ToleranceContext) -> Result<VectorSet> {
    VectorSet::canonicalize(raw, tol)
}

/// Whether a raw list is centrally symmetric as given (every vector has its
/// negation in the list, matched bijectively).
pub fn is_centrally_symmetric(raw: &[Vector], tol: &ToleranceContext) -> bool {
    let Some(first) = raw.first() else {
        return true;
    };
    let dim = first.dim();
    if raw.iter().any(|v| v.dim() != dim) {
        return false;
    }
    let mut used = vec![false; raw.len()];
    for i in 0..raw.len() {
        if used[i] {
            continue;
        }
        let neg: Vec<f64> = raw[i].iter().map(|x| -x).collect();
        let j = (0..raw.len()).find(|&j| j != i && !used[j] && tol.vec_eq(&raw[j], &neg));
        match j {
            Some(j) => {
                used[i] = true;
                used[j] = true;
            }
            None => return false,
        }
    }
    true
}
