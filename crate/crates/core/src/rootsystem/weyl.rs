//! Closure of the group generated by the reflections of a vector set.

use std::collections::HashSet;

use nalgebra::DMatrix;

use super::{reflection_matrix, Reflection};
use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerance::ToleranceContext;
use crate::vectorset::{OrthogonalMap, PointIndex, Vector, VectorSet};

/// Default cap on the number of group elements generated.
pub const DEFAULT_MAX_GROUP: usize = 100_000;

/// The group generated by `{T_r : r ∈ R}`, or a truncated prefix of it.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub generators: Vec<Reflection>,
    pub elements: Vec<OrthogonalMap>,
    /// True when generation stopped at the cap.
    pub truncated: bool,
    /// True when elements were tracked as permutations of the set, which is
    /// possible exactly when the set is a root system.
    pub exact: bool,
}

impl WeylGroup {
    /// Group order, unless generation was truncated.
    pub fn order(&self) -> Option<usize> {
        (!self.truncated).then_some(self.elements.len())
    }

    pub fn dim(&self) -> usize {
        self.generators.first().map_or(0, |g| g.map.dim())
    }
}

/// Breadth-first closure of the reflection group of `set`, stopping after
/// `max_elements` elements.
///
/// For a root system each reflection permutes `set`, and a group element is
/// fixed by where it sends a basis drawn from `set`; elements are then keyed
/// by those basis indices, which is exact. Otherwise matrices are keyed by
/// their entries rounded to 1e-9.
pub fn weyl_closure(set: &VectorSet, max_elements: usize) -> WeylGroup {
    let generators: Vec<Reflection> = set
        .representatives()
        .map(|r| Reflection {
            root: Vector::from(r),
            map: OrthogonalMap::from_matrix_unchecked(reflection_matrix(r)),
        })
        .collect();
    let max_elements = max_elements.max(1);
    let perms: Option<Vec<Vec<u32>>> = generators
        .iter()
        .map(|g| {
            g.map.permutation_of(set)
                .map(|p| p.into_iter().map(|i| i as u32).collect())
        })
        .collect();
    let (elements, truncated, exact) = match perms {
        Some(perms) => {
            let (els, trunc) = permutation_closure(set, &perms, max_elements);
            (els, trunc, true)
        }
        _ => {
            let maps: Vec<OrthogonalMap> = generators.iter().map(|g| g.map.clone()).collect();
            let (els, trunc) = matrix_closure(&maps, set.dim(), max_elements);
            (els, trunc, false)
        }
    };
    WeylGroup {
        generators,
        elements,
        truncated,
        exact,
    }
}

/// Greedy basis of pair representatives, as set indices.
fn basis_indices(set: &VectorSet) -> Vec<usize> {
    let tol = set.tol();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut idx = Vec::new();
    for k in 0..set.pair_count() {
        let r = set.representative(k);
        let mut w = r.to_vec();
        linalg::reject(&mut w, &basis);
        let n = linalg::norm(&w);
        if !tol.is_zero(n, linalg::norm(r)) && n > 1e-6 * linalg::norm(r) {
            basis.push(linalg::scaled(&w, 1.0 / n));
            idx.push(2 * k);
        }
    }
    idx
}

fn permutation_closure(set: &VectorSet, perms: &[Vec<u32>], cap: usize) -> (Vec<OrthogonalMap>, bool) {
    let basis = basis_indices(set);
    let d = set.dim();
    let column_matrix = |cols: &[u32]| {
        DMatrix::from_fn(d, cols.len(), |i, j| set.vector(cols[j] as usize)[i])
    };
    let start: Vec<u32> = basis.iter().map(|&i| i as u32).collect();
    let b = column_matrix(&start);
    let b_pinv = (b.transpose() * &b)
        .try_inverse()
        .expect("basis vectors are independent")
        * b.transpose();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = vec![start.clone()];
    seen.insert(start);
    let mut head = 0;
    let mut truncated = false;
    'outer: while head < queue.len() {
        let g = queue[head].clone();
        head += 1;
        for p in perms {
            let h: Vec<u32> = g.iter().map(|&j| p[j as usize]).collect();
            if seen.insert(h.clone()) {
                if queue.len() >= cap {
                    truncated = true;
                    break 'outer;
                }
                queue.push(h);
            }
        }
    }
    // T = I + (B' - B) B⁺ sends B to B' and fixes span(B)^⊥
    let id = DMatrix::<f64>::identity(d, d);
    let elements = queue
        .iter()
        .map(|cols| OrthogonalMap::from_matrix_unchecked(&id + (column_matrix(cols) - &b) * &b_pinv))
        .collect();
    (elements, truncated)
}

fn matrix_key(m: &DMatrix<f64>) -> Vec<i64> {
    m.iter().map(|x| (x * 1e9).round() as i64).collect()
}

fn matrix_closure(generators: &[OrthogonalMap], dim: usize, cap: usize) -> (Vec<OrthogonalMap>, bool) {
    let mut seen = HashSet::new();
    let id = OrthogonalMap::identity(dim);
    seen.insert(matrix_key(id.matrix()));
    let mut queue = vec![id];
    let mut head = 0;
    while head < queue.len() {
        let g = queue[head].clone();
        head += 1;
        for s in generators {
            let h = s.compose(&g);
            if seen.insert(matrix_key(h.matrix())) {
                if queue.len() >= cap {
                    return (queue, true);
                }
                queue.push(h);
            }
        }
    }
    (queue, false)
}

/// Distinct images of `v` under the group.
pub fn orbit(group: &WeylGroup, v: &[f64], tol: &ToleranceContext) -> Result<Vec<Vector>> {
    if group.truncated {
        return Err(Error::TruncatedGroup);
    }
    if v.len() != group.dim() {
        return Err(Error::DimensionMismatch {
            expected: group.dim(),
            found: v.len(),
        });
    }
    let images: Vec<Vec<f64>> = group.elements.iter().map(|g| g.apply(v)).collect();
    let index = PointIndex::new(v.len(), images.iter().map(Vec::as_slice));
    Ok(images
        .iter()
        .enumerate()
        .filter(|(i, img)| index.find(img, tol) == Some(*i))
        .map(|(_, img)| Vector(img.clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::{catalog, CatalogSpec};

    fn group(label: &str, cap: usize) -> WeylGroup {
        let set = catalog(&label.parse::<CatalogSpec>().unwrap(), ToleranceContext::default()).unwrap();
        weyl_closure(&set, cap)
    }

    #[test]
    fn orders_match_formula() {
        for (label, order) in [("A:3", 24), ("B:3", 48), ("I2:5", 10), ("H:3", 120), ("D:4", 192), ("F:4", 1152)] {
            let g = group(label, DEFAULT_MAX_GROUP);
            assert!(g.exact, "{label}");
            assert_eq!(g.order(), Some(order), "{label}");
        }
    }

    #[test]
    fn elements_are_orthogonal_and_distinct() {
        let g = group("H:3", DEFAULT_MAX_GROUP);
        for m in &g.elements {
            assert!(m.orthogonality_defect() < 1e-10);
        }
        // distinct as matrices, independently of the permutation keys
        let keys: HashSet<Vec<i64>> = g.elements.iter().map(|m| matrix_key(m.matrix())).collect();
        assert_eq!(keys.len(), 120);
    }

    #[test]
    fn matrix_fallback_agrees_on_root_systems() {
        let set = catalog(&"B:3".parse::<CatalogSpec>().unwrap(), ToleranceContext::default()).unwrap();
        let gens: Vec<OrthogonalMap> = set
            .representatives()
            .map(|r| OrthogonalMap::from_matrix_unchecked(reflection_matrix(r)))
            .collect();
        let (els, truncated) = matrix_closure(&gens, 3, DEFAULT_MAX_GROUP);
        assert!(!truncated);
        assert_eq!(els.len(), 48);
    }

    #[test]
    fn truncation_and_orbits() {
        let g = group("B:3", 10);
        assert!(g.truncated);
        assert_eq!(g.order(), None);
        let tol = ToleranceContext::default();
        assert!(matches!(orbit(&g, &[1.0, 0.0, 0.0], &tol), Err(Error::TruncatedGroup)));
        let g = group("B:3", DEFAULT_MAX_GROUP);
        assert_eq!(orbit(&g, &[1.0, 0.0, 0.0], &tol).unwrap().len(), 6);
        assert_eq!(orbit(&g, &[1.0, 2.0, 3.0], &tol).unwrap().len(), 48);
    }

    #[test]
    fn non_root_set_generates_infinite_group() {
        // two lines at 1 radian: the rotation by 2 rad has infinite order
        let raw: Vec<Vector> = [[1.0, 0.0], [1f64.cos(), 1f64.sin()]]
            .iter()
            .flat_map(|v| [Vector(v.to_vec()), Vector(vec![-v[0], -v[1]])])
            .collect();
        let set = VectorSet::canonicalize(&raw, ToleranceContext::default()).unwrap();
        let g = weyl_closure(&set, 500);
        assert!(!g.exact);
        assert!(g.truncated);
    }
}
