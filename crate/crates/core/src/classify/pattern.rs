//! Closed-form vertex sets of the B_d and D_d zonotopes.

use itertools::Itertools;

use crate::tolerance::ToleranceContext;
use crate::vectorset::{PointIndex, Vector};

/// All coordinate permutations and sign changes of
/// `(x0, x0 + step, …, x0 + (d-1) step)`, without duplicates. With `x0 = 0`
/// this is the D_d vertex pattern.
pub fn bd_vertex_pattern(d: usize, x0: f64, step: f64) -> Vec<Vector> {
    let base: Vec<f64> = (0..d).map(|i| x0 + step * i as f64).collect();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for perm in (0..d).permutations(d) {
        for mask in 0u32..1 << d {
            let v: Vec<f64> = perm
                .iter()
                .enumerate()
                .map(|(slot, &i)| {
                    let x = base[i];
                    if mask >> slot & 1 == 1 {
                        -x
                    } else {
                        x
                    }
                })
                .collect();
            out.push(v);
        }
    }
    // +0 and -0 give the same point
    for v in &mut out {
        for x in v.iter_mut() {
            if *x == 0.0 {
                *x = 0.0;
            }
        }
    }
    out.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out.dedup();
    out.into_iter().map(Vector).collect()
}

/// The homogeneous representative of the B_d family: `x0 = 1`, `step = √2`.
pub fn homogeneous_vertex_pattern_bd(d: usize) -> Vec<Vector> {
    bd_vertex_pattern(d, 1.0, std::f64::consts::SQRT_2)
}

/// Set equality after scaling each set to unit circumradius, comparing
/// points within `atol`.
pub fn same_up_to_scale(a: &[Vector], b: &[Vector], atol: f64) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return a.len() == b.len();
    }
    let scale = |s: &[Vector]| {
        let r = s.iter().map(Vector::norm).fold(0.0, f64::max);
        s.iter()
            .map(|v| v.iter().map(|x| x / r).collect::<Vec<f64>>())
            .collect::<Vec<_>>()
    };
    let (sa, sb) = (scale(a), scale(b));
    let dim = sa[0].len();
    if sb.iter().any(|v| v.len() != dim) {
        return false;
    }
    let Some(tol) = ToleranceContext::new(atol, f64::EPSILON) else {
        return false;
    };
    let index = PointIndex::new(dim, sb.iter().map(Vec::as_slice));
    let mut hit = vec![false; sb.len()];
    for v in &sa {
        match index.find(v, &tol) {
            Some(j) if !hit[j] => hit[j] = true,
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::{catalog, CatalogSpec};
    use crate::zonotope::Zonotope;

    fn vertices(s: &str) -> Vec<Vector> {
        let set = catalog(&s.parse::<CatalogSpec>().unwrap(), ToleranceContext::default()).unwrap();
        Zonotope::new(set).normalize().unwrap().vertices().unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(homogeneous_vertex_pattern_bd(2).len(), 8);
        assert_eq!(homogeneous_vertex_pattern_bd(3).len(), 48);
        assert_eq!(bd_vertex_pattern(3, 0.0, 1.0).len(), 24);
    }

    #[test]
    fn b2_octagon() {
        let pattern = homogeneous_vertex_pattern_bd(2);
        assert!(same_up_to_scale(&pattern, &vertices("B:2"), 1e-8));
        let v = vertices("B:2");
        let s = std::f64::consts::SQRT_2;
        assert!(v.iter().any(|p| (p[0] - (1.0 + s)).abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12));
    }

    #[test]
    fn d_pattern_matches_d_zonotope() {
        let set = catalog(&"D:4".parse::<CatalogSpec>().unwrap(), ToleranceContext::default()).unwrap();
        let v = Zonotope::new(set).vertices().unwrap();
        assert!(same_up_to_scale(&bd_vertex_pattern(4, 0.0, 1.0), &v, 1e-8));
    }

    #[test]
    fn mismatch_detected() {
        // a non-homogeneous member of the family is a different vertex set
        assert!(!same_up_to_scale(&bd_vertex_pattern(3, 1.0, 1.0), &vertices("B:3"), 1e-8));
        assert!(!same_up_to_scale(&bd_vertex_pattern(2, 1.0, 1.0), &bd_vertex_pattern(3, 1.0, 1.0), 1e-8));
    }
}
