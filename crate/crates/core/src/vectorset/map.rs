use nalgebra::DMatrix;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use super::{SemiStar, Vector, VectorSet};
use crate::error::{Error, Result};
use crate::tolerance::ToleranceContext;

/// An orthogonal linear map of ℝ^d.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMap {
    matrix: DMatrix<f64>,
}

impl Serialize for OrthogonalMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let mut seq = serializer.serialize_seq(Some(n))?;
        for i in 0..n {
            let row: Vec<f64> = (0..n).map(|j| self.matrix[(i, j)]).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl OrthogonalMap {
    /// Wraps `matrix` after checking `MᵀM = I` within tolerance.
    pub fn new(matrix: DMatrix<f64>, tol: &ToleranceContext) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let map = Self { matrix };
        let deviation = map.orthogonality_defect();
        if deviation > tol.threshold(map.dim() as f64) {
            return Err(Error::NotOrthogonal { deviation });
        }
        Ok(map)
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<f64>) -> Self {
        Self { matrix }
    }

    pub fn from_rows(rows: &[Vec<f64>], tol: &ToleranceContext) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]), tol)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn negation(dim: usize) -> Self {
        Self {
            matrix: -DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Largest entry of `MᵀM - I` in absolute value.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim();
        let p = self.matrix.transpose() * &self.matrix - DMatrix::<f64>::identity(n, n);
        p.amax()
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.matrix[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OrthogonalMap) -> OrthogonalMap {
        OrthogonalMap {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn inverse(&self) -> OrthogonalMap {
        OrthogonalMap {
            matrix: self.matrix.transpose(),
        }
    }

    pub fn approx_eq(&self, other: &OrthogonalMap, tol: &ToleranceContext) -> bool {
        self.dim() == other.dim()
            && self
                .matrix
                .iter()
                .zip(other.matrix.iter())
                .all(|(a, b)| tol.approx_eq(*a, *b))
    }

    /// The permutation of `set` induced by this map, if it maps the set onto
    /// itself: `result[i] = j` with `T·r_i = r_j`.
    pub fn permutation_of(&self, set: &VectorSet) -> Option<Vec<usize>> {
        if self.dim() != set.dim() {
            return None;
        }
        let mut seen = vec![false; set.len()];
        let mut perm = Vec::with_capacity(set.len());
        for v in set.iter() {
            let j = set.index_of(&self.apply(v))?;
            if std::mem::replace(&mut seen[j], true) {
                return None;
            }
            perm.push(j);
        }
        Some(perm)
    }

    /// One-sided symmetry criterion: if the image of a single semi-star lies
    /// inside `set`, the map is a symmetry of the whole set.
    pub fn maps_semi_star_into(&self, set: &VectorSet, star: &SemiStar) -> bool {
        self.dim() == set.dim()
            && star
                .members
                .iter()
                .all(|&i| set.contains(&self.apply(set.vector(i))))
    }
}

/// Element-wise image of `set` under `map`.
pub fn apply(map: &OrthogonalMap, set: &VectorSet) -> Result<VectorSet> {
    if map.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: map.dim(),
        });
    }
    let images: Vec<Vector> = set.iter().map(|v| Vector(map.apply(v))).collect();
    VectorSet::canonicalize(&images, *set.tol())
}

/// `T·R = R` as sets.
pub fn stabilizes(map: &OrthogonalMap, set: &VectorSet) -> bool {
    map.permutation_of(set).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, CatalogSpec};

    fn rotation(theta: f64) -> OrthogonalMap {
        let (s, c) = theta.sin_cos();
        OrthogonalMap::from_rows(&[vec![c, -s], vec![s, c]], &ToleranceContext::default()).unwrap()
    }

    fn hexagon() -> VectorSet {
        catalog(&"I2:3".parse::<CatalogSpec>().unwrap(), ToleranceContext::default()).unwrap()
    }

    #[test]
    fn rejects_non_orthogonal_matrices() {
        let tol = ToleranceContext::default();
        assert!(matches!(
            OrthogonalMap::from_rows(&[vec![1.0, 0.1], vec![0.0, 1.0]], &tol),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn identity_and_quarter_turn_on_square() {
        let tol = ToleranceContext::default();
        let square = VectorSet::canonicalize(
            &[Vector(vec![1.0, 0.0]), Vector(vec![0.0, 1.0])],
            tol,
        )
        .unwrap();
        assert!(apply(&OrthogonalMap::identity(2), &square).unwrap().same_set(&square));
        let rotated = apply(&rotation(std::f64::consts::FRAC_PI_2), &square).unwrap();
        assert!(rotated.same_set(&square));
    }

    #[test]
    fn hexagon_rotations() {
        let hex = hexagon();
        let r60 = rotation(std::f64::consts::FRAC_PI_3);
        // every image of a hexagon vector under the 60° turn is again in the set
        for v in hex.iter() {
            assert!(hex.contains(&r60.apply(v)));
        }
        assert!(apply(&r60, &hex).unwrap().same_set(&hex));
        assert!(stabilizes(&r60, &hex));
        assert!(!stabilizes(&rotation(std::f64::consts::FRAC_PI_4), &hex));
        assert!(!stabilizes(&OrthogonalMap::identity(3), &hex));
    }

    #[test]
    fn negation_stabilizes_any_set() {
        let hex = hexagon();
        let perm = OrthogonalMap::negation(2).permutation_of(&hex).unwrap();
        for (i, j) in perm.into_iter().enumerate() {
            assert_eq!(j, VectorSet::partner(i));
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let hex = hexagon();
        assert!(matches!(
            apply(&OrthogonalMap::identity(3), &hex),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn shape_errors_serialization_and_inverse() {
        let tol = ToleranceContext::default();
        assert!(matches!(
            OrthogonalMap::new(DMatrix::zeros(2, 3), &tol),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            OrthogonalMap::from_rows(&[vec![1.0, 0.0], vec![0.0]], &tol),
            Err(Error::DimensionMismatch { .. })
        ));
        let q = rotation(0.3);
        assert!(q.compose(&q.inverse()).approx_eq(&OrthogonalMap::identity(2), &tol));
        assert!(!q.approx_eq(&OrthogonalMap::identity(3), &tol));
        let json = serde_json::to_string(&OrthogonalMap::identity(2)).unwrap();
        assert_eq!(json, "[[1.0,0.0],[0.0,1.0]]");
        // Wrong dimension, and a map that merges two vectors, give no permutation.
        assert!(OrthogonalMap::identity(3).permutation_of(&hexagon()).is_none());
        assert!(rotation(0.1).permutation_of(&hexagon()).is_none());
    }
}
