//! Small dense helpers on coordinate slices.

use crate::tolerance::ToleranceContext;

#[inline]
pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

#[inline]
pub fn norm(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

pub fn scaled(u: &[f64], s: f64) -> Vec<f64> {
    u.iter().map(|x| x * s).collect()
}

pub fn sub(u: &[f64], v: &[f64]) -> Vec<f64> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn add_assign(acc: &mut [f64], v: &[f64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

pub fn unit(u: &[f64]) -> Vec<f64> {
    let n = norm(u);
    scaled(u, 1.0 / n)
}

/// Removes from `v` its components along the orthonormal vectors in `basis`.
/// Two passes keep the result orthogonal to working precision.
pub fn reject(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
}

/// Orthonormal basis of the span of `vectors` by Gram–Schmidt, processing the
/// inputs in order. A vector is dropped when its residual is within tolerance
/// of zero relative to its own norm.
pub fn orthonormal_basis<'a, I>(vectors: I, tol: &ToleranceContext) -> Vec<Vec<f64>>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let n0 = norm(v);
        if n0 == 0.0 {
            continue;
        }
        let mut w = v.to_vec();
        reject(&mut w, &basis);
        let n = norm(&w);
        if n > tol.threshold(n0) {
            basis.push(scaled(&w, 1.0 / n));
        }
    }
    basis
}

/// Extends an orthonormal basis of a subspace of ℝ^dim to the orthogonal
/// complement, using the standard basis vectors in order. Returns only the
/// complement vectors.
pub fn complement_basis(basis: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut all = basis.to_vec();
    let mut out = Vec::new();
    for j in 0..dim {
        if all.len() == dim {
            break;
        }
        let mut e = vec![0.0; dim];
        e[j] = 1.0;
        reject(&mut e, &all);
        let n = norm(&e);
        // A standard basis vector either has a residual of order one or lies
        // in the span up to round-off; 1e-6 separates the two cases.
        if n > 1e-6 {
            let e = scaled(&e, 1.0 / n);
            all.push(e.clone());
            out.push(e);
        }
    }
    out
}

/// Squared distance of `v` from the span of the orthonormal `basis`.
pub fn residual_norm(v: &[f64], basis: &[Vec<f64>]) -> f64 {
    let mut w = v.to_vec();
    reject(&mut w, basis);
    norm(&w)
}

/// Coordinates of `v` in the orthonormal `basis`.
pub fn coordinates(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    basis.iter().map(|b| dot(v, b)).collect()
}

/// A fixed, deterministic sequence of "generic" directions in ℝ^dim used to
/// break ties without randomness.
pub fn generic_direction(dim: usize, seed: usize) -> Vec<f64> {
    let base = 0.7548776662466927 + 0.1234567 * seed as f64;
    let v: Vec<f64> = (0..dim)
        .map(|j| ((j as f64 + 1.0) * base * std::f64::consts::E + seed as f64).sin() + 0.01 * (j as f64 + 1.0))
        .collect();
    unit(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_schmidt_drops_dependent_vectors() {
        let tol = ToleranceContext::default();
        let vs = [vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0], vec![0.0, 1.0, 0.0]];
        let basis = orthonormal_basis(vs.iter().map(|v| v.as_slice()), &tol);
        assert_eq!(basis.len(), 2);
        assert!(dot(&basis[0], &basis[1]).abs() < 1e-14);
        let comp = complement_basis(&basis, 3);
        assert_eq!(comp.len(), 1);
        assert!((comp[0][2].abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn generic_directions_are_unit_and_distinct() {
        let a = generic_direction(4, 0);
        let b = generic_direction(4, 1);
        assert!((norm(&a) - 1.0).abs() < 1e-14);
        assert!(norm(&sub(&a, &b)) > 1e-3);
    }
}
