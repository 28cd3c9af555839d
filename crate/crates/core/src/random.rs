//! Seeded generators of test inputs.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::Result;
use crate::linalg;
use crate::rootsystem::{catalog, CatalogSpec, CoxeterLabel};
use crate::tolerance::ToleranceContext;
use crate::vectorset::{OrthogonalMap, Vector, VectorSet};

pub const SEED_ENV: &str = "ZONOCLASS_SEED";
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Seed from `ZONOCLASS_SEED` when set and parseable, else the default.
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on the unit sphere.
pub fn random_direction<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        if linalg::norm(&v) > 1e-6 {
            return linalg::unit(&v);
        }
    }
}

/// `pairs` random directions with lengths in `[0.5, 2)`, symmetrized and
/// reduced.
pub fn random_reduced_set<R: Rng>(rng: &mut R, dim: usize, pairs: usize, tol: ToleranceContext) -> Result<VectorSet> {
    let raw: Vec<Vector> = (0..pairs.max(1))
        .map(|_| {
            let len = rng.random_range(0.5..2.0);
            Vector(linalg::scaled(&random_direction(rng, dim), len))
        })
        .collect();
    VectorSet::canonicalize(&raw, tol)
}

/// `pairs` random unit directions, symmetrized.
pub fn random_unit_set<R: Rng>(rng: &mut R, dim: usize, pairs: usize, tol: ToleranceContext) -> Result<VectorSet> {
    let raw: Vec<Vector> = (0..pairs.max(1)).map(|_| Vector(random_direction(rng, dim))).collect();
    VectorSet::canonicalize(&raw, tol)
}

/// Haar-distributed orthogonal matrix from the QR factorization of a
/// Gaussian matrix.
pub fn random_rotation<R: Rng>(rng: &mut R, dim: usize) -> OrthogonalMap {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    OrthogonalMap::from_matrix_unchecked(q)
}

fn embed(set: &VectorSet, dim: usize, offset: usize) -> Vec<Vec<f64>> {
    set.iter()
        .map(|v| {
            let mut w = vec![0.0; dim];
            w[offset..offset + v.len()].copy_from_slice(v);
            w
        })
        .collect()
}

fn scales<R: Rng>(rng: &mut R) -> (f64, f64) {
    (rng.random_range(0.5..2.0), rng.random_range(0.5..2.0))
}

fn labelled<R: Rng>(rng: &mut R, label: CoxeterLabel, tol: ToleranceContext) -> Result<VectorSet> {
    let spec = if label.has_two_orbits() {
        let (a, b) = scales(rng);
        CatalogSpec::with_scales(label, a, b)
    } else {
        let (a, _) = scales(rng);
        CatalogSpec::with_scales(label, a, a)
    };
    catalog(&spec, tol)
}

/// A root system of full rank in dimension 2 or 3 (irreducible or a product
/// of orthogonal pieces), with random orbit scales and a random rotation.
pub fn random_root_system<R: Rng>(rng: &mut R, dim: usize, tol: ToleranceContext) -> Result<VectorSet> {
    let p = rng.random_range(3..=8);
    let mut vectors: Vec<Vec<f64>> = match (dim, rng.random_range(0..4)) {
        (2, 0) => {
            let (a, b) = scales(rng);
            vec![vec![a, 0.0], vec![0.0, b]]
        }
        (2, _) => embed(&labelled(rng, CoxeterLabel::I2(p), tol)?, 2, 0),
        (_, 0) => {
            let mut v = embed(&labelled(rng, CoxeterLabel::I2(p), tol)?, dim, 0);
            let mut e = vec![0.0; dim];
            e[2] = rng.random_range(0.5..2.0);
            v.push(e);
            v
        }
        (_, k) => {
            let label = [CoxeterLabel::A(3), CoxeterLabel::B(3), CoxeterLabel::H3][k - 1];
            embed(&labelled(rng, label, tol)?, dim, 0)
        }
    };
    let rot = random_rotation(rng, dim);
    for v in &mut vectors {
        *v = rot.apply(v);
    }
    VectorSet::canonicalize(&vectors.into_iter().map(Vector).collect::<Vec<_>>(), tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    Generic,
    RootSystem,
    /// A root system with one pair rotated slightly or removed.
    NearRootSystem,
}

/// Cycles through generic sets, root systems and near misses so both
/// verdicts are exercised.
pub fn random_test_set<R: Rng>(rng: &mut R, dim: usize, tol: ToleranceContext) -> Result<(VectorSet, SampleKind)> {
    match rng.random_range(0..3) {
        0 => {
            let pairs = rng.random_range(dim..=dim + 4);
            Ok((random_reduced_set(rng, dim, pairs, tol)?, SampleKind::Generic))
        }
        1 => Ok((random_root_system(rng, dim, tol)?, SampleKind::RootSystem)),
        _ => {
            let base = random_root_system(rng, dim, tol)?;
            let k = rng.random_range(0..base.pair_count());
            let mut raw: Vec<Vector> = base.representatives().map(Vector::from).collect();
            if rng.random_bool(0.5) && raw.len() > 1 {
                raw.remove(k);
            } else {
                let angle = rng.random_range(1.0f64..10.0).to_radians();
                let r = raw[k].0.clone();
                let mut w = random_direction(rng, dim);
                linalg::reject(&mut w, &[linalg::unit(&r)]);
                let w = linalg::scaled(&linalg::unit(&w), linalg::norm(&r));
                raw[k] = Vector(
                    r.iter()
                        .zip(&w)
                        .map(|(a, b)| a * angle.cos() + b * angle.sin())
                        .collect(),
                );
            }
            Ok((VectorSet::canonicalize(&raw, tol)?, SampleKind::NearRootSystem))
        }
    }
}

/// [`random_test_set`] with every vector scaled to unit length.
pub fn random_unit_test_set<R: Rng>(rng: &mut R, dim: usize, tol: ToleranceContext) -> Result<(VectorSet, SampleKind)> {
    let (set, kind) = random_test_set(rng, dim, tol)?;
    let units: Vec<Vector> = set.iter().map(|v| Vector(linalg::unit(v))).collect();
    Ok((VectorSet::canonicalize(&units, tol)?, kind))
}
