//! Coordinates for every irreducible finite root system.
//!
//! Two-orbit families (`I2(p)` for even `p`, `B(n)`, `F4`) take independent
//! scale factors for their two orbits; every other family accepts a single
//! uniform scale.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use super::coxeter::CoxeterLabel;
use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerance::ToleranceContext;
use crate::vectorset::{Vector, VectorSet};

/// The golden ratio.
pub const PHI: f64 = 1.618_033_988_749_895;

/// A catalog request: a Coxeter label plus optional orbit scales.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogSpec {
    pub label: CoxeterLabel,
    pub scales: Option<(f64, f64)>,
}

impl CatalogSpec {
    pub fn new(label: CoxeterLabel) -> Self {
        Self { label, scales: None }
    }

    pub fn with_scales(label: CoxeterLabel, first: f64, second: f64) -> Self {
        Self {
            label,
            scales: Some((first, second)),
        }
    }
}

impl fmt::Display for CatalogSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (family, rank) = self.label.family_and_parameter();
        write!(f, "{family}:{rank}")?;
        if let Some((a, b)) = self.scales {
            write!(f, ":orbit={a},{b}")?;
        }
        Ok(())
    }
}

/// Parses `FAMILY:rank[:orbit=a[,b]]` (e.g. `B:3:orbit=1,2`, `I2:6`, `E:8`)
/// or a bare label such as `A3`, `H4`, `I2(5)` or `I1`.
impl FromStr for CatalogSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidCatalog(format!("cannot parse catalog label {s:?}"));
        let mut parts = s.trim().split(':');
        let head = parts.next().ok_or_else(bad)?.trim();
        let mut rest: Vec<&str> = parts.collect();
        let mut scales = None;
        if let Some(last) = rest.last() {
            if let Some(values) = last.trim().strip_prefix("orbit=") {
                let v: Vec<f64> = values
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad())?;
                scales = match v.as_slice() {
                    [a] => Some((*a, *a)),
                    [a, b] => Some((*a, *b)),
                    _ => return Err(bad()),
                };
                rest.pop();
            }
        }
        let label = match rest.as_slice() {
            [] => head.parse::<CoxeterLabel>()?,
            [n] => {
                let n: usize = n.trim().parse().map_err(|_| bad())?;
                CoxeterLabel::from_family(head, n)?
            }
            _ => return Err(bad()),
        };
        Ok(Self { label, scales })
    }
}

fn e(dim: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v
}

fn combo(dim: usize, terms: &[(usize, f64)]) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    for &(i, c) in terms {
        v[i] += c;
    }
    v
}

/// `±e_i ± e_j`, i < j.
fn d_type(n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for (a, b) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                out.push(combo(n, &[(i, a), (j, b)]));
            }
        }
    }
    out
}

fn axes(n: usize) -> Vec<Vec<f64>> {
    (0..n).flat_map(|i| [e(n, i), linalg::scaled(&e(n, i), -1.0)]).collect()
}

/// All sign choices of `v` on its nonzero coordinates.
fn sign_orbit(v: &[f64]) -> Vec<Vec<f64>> {
    let nz: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0.0).collect();
    (0..1u32 << nz.len())
        .map(|mask| {
            let mut w = v.to_vec();
            for (b, &i) in nz.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    w[i] = -w[i];
                }
            }
            w
        })
        .collect()
}

fn is_even_permutation(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

fn even_permutations(v: &[f64]) -> Vec<Vec<f64>> {
    (0..v.len())
        .permutations(v.len())
        .filter(|p| is_even_permutation(p))
        .map(|p| p.iter().map(|&i| v[i]).collect())
        .collect()
}

/// `e_i - e_j` in ℝ^{n+1}, expressed in the Helmert basis
/// `h_k = (1, …, 1, -k, 0, …)/√(k(k+1))`, `k = 1..=n`, of the sum-zero
/// hyperplane. This is an isometry onto ℝ^n.
fn a_type(n: usize) -> Vec<Vec<f64>> {
    let helmert: Vec<Vec<f64>> = (1..=n)
        .map(|k| {
            let s = 1.0 / ((k * (k + 1)) as f64).sqrt();
            (0..=n)
                .map(|i| match i.cmp(&k) {
                    std::cmp::Ordering::Less => s,
                    std::cmp::Ordering::Equal => -(k as f64) * s,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            if i != j {
                let r = combo(n + 1, &[(i, 1.0), (j, -1.0)]);
                out.push(linalg::coordinates(&r, &helmert));
            }
        }
    }
    out
}

fn e8() -> Vec<Vec<f64>> {
    let mut out = d_type(8);
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            out.push((0..8).map(|i| if mask >> i & 1 == 1 { -0.5 } else { 0.5 }).collect());
        }
    }
    out
}

/// Roots of E8 orthogonal to all of `constraints`, in coordinates of an
/// orthonormal basis of their orthogonal complement.
fn e8_slice(constraints: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let tol = ToleranceContext::default();
    let span = linalg::orthonormal_basis(constraints.iter().map(Vec::as_slice), &tol);
    let basis = linalg::complement_basis(&span, 8);
    e8().into_iter()
        .filter(|r| constraints.iter().all(|c| linalg::dot(r, c).abs() < 1e-12))
        .map(|r| linalg::coordinates(&r, &basis))
        .collect()
}

fn h3() -> Vec<Vec<f64>> {
    let mut out = axes(3);
    let base = [PHI / 2.0, 0.5, 1.0 / (2.0 * PHI)];
    for shift in 0..3 {
        let v: Vec<f64> = (0..3).map(|i| base[(i + shift) % 3]).collect();
        out.extend(sign_orbit(&v));
    }
    out
}

fn h4() -> Vec<Vec<f64>> {
    let mut out = axes(4);
    out.extend(sign_orbit(&[0.5; 4]));
    for p in even_permutations(&[PHI / 2.0, 0.5, 1.0 / (2.0 * PHI), 0.0]) {
        out.extend(sign_orbit(&p));
    }
    out
}

fn scale_all(vs: Vec<Vec<f64>>, s: f64) -> Vec<Vec<f64>> {
    vs.into_iter().map(|v| linalg::scaled(&v, s)).collect()
}

/// Builds the root system named by `spec`.
pub fn catalog(spec: &CatalogSpec, tol: ToleranceContext) -> Result<VectorSet> {
    let label = spec.label;
    label.validate()?;
    let (a, b) = spec.scales.unwrap_or((1.0, 1.0));
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidCatalog("orbit scales must be positive".into()));
    }
    if a != b && !label.has_two_orbits() {
        return Err(Error::InvalidCatalog(format!(
            "{label} has a single root orbit; it takes one scale"
        )));
    }
    let vectors = match label {
        CoxeterLabel::I1 => vec![vec![a], vec![-a]],
        CoxeterLabel::A(n) => scale_all(a_type(n), a),
        CoxeterLabel::B(n) => {
            let mut v = scale_all(axes(n), a);
            v.extend(scale_all(d_type(n), b));
            v
        }
        CoxeterLabel::D(n) => scale_all(d_type(n), a),
        CoxeterLabel::I2(p) => (0..2 * p)
            .map(|k| {
                let th = std::f64::consts::PI * k as f64 / p as f64;
                let s = if k % 2 == 0 { a } else { b };
                vec![s * th.cos(), s * th.sin()]
            })
            .collect(),
        CoxeterLabel::H3 => scale_all(h3(), a),
        CoxeterLabel::H4 => scale_all(h4(), a),
        CoxeterLabel::F4 => {
            let mut v = scale_all(axes(4), a);
            v.extend(scale_all(sign_orbit(&[0.5; 4]), a));
            v.extend(scale_all(d_type(4), b));
            v
        }
        CoxeterLabel::E6 => scale_all(
            e8_slice(&[
                combo(8, &[(6, 1.0), (7, 1.0)]),
                combo(8, &[(5, 1.0), (6, -1.0)]),
            ]),
            a,
        ),
        CoxeterLabel::E7 => scale_all(e8_slice(&[combo(8, &[(6, 1.0), (7, 1.0)])]), a),
        CoxeterLabel::E8 => scale_all(e8(), a),
    };
    let raw: Vec<Vector> = vectors.into_iter().map(Vector).collect();
    let set = VectorSet::canonicalize(&raw, tol)?;
    if set.len() != raw.len() {
        return Err(Error::Consistency(format!(
            "catalog {label}: {} generated vectors collapsed to {}",
            raw.len(),
            set.len()
        )));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(s: &str) -> usize {
        catalog(&s.parse().unwrap(), ToleranceContext::default()).unwrap().len()
    }

    #[test]
    fn root_counts_by_construction() {
        // B3: 2·3 short + 4·C(3,2) long
        assert_eq!(count("B:3"), 2 * 3 + 4 * 3);
        // E8: 4·C(8,2) integral + 2^7 half-integral
        assert_eq!(count("E:8"), 112 + 128);
        assert_eq!(count("E:7"), 126);
        assert_eq!(count("E:6"), 72);
        assert_eq!(count("A:3"), 12);
        assert_eq!(count("D:4"), 24);
        assert_eq!(count("H:3"), 30);
        assert_eq!(count("H:4"), 120);
        assert_eq!(count("F:4"), 48);
        assert_eq!(count("I2:7"), 14);
        assert_eq!(count("I1"), 2);
    }

    #[test]
    fn unit_hexagon() {
        let hex = catalog(&"I2:3".parse().unwrap(), ToleranceContext::default()).unwrap();
        assert_eq!(hex.len(), 6);
        for k in 0..6 {
            let th = std::f64::consts::PI * k as f64 / 3.0;
            assert!(hex.contains(&[th.cos(), th.sin()]));
        }
    }

    #[test]
    fn a_type_is_isometric() {
        let a3 = catalog(&"A:3".parse().unwrap(), ToleranceContext::default()).unwrap();
        assert_eq!(a3.dim(), 3);
        for v in a3.iter() {
            assert!((linalg::norm(v) - 2f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn orbit_scales() {
        let b3 = catalog(&"B:3:orbit=2,0.5".parse().unwrap(), ToleranceContext::default()).unwrap();
        let mut norms: Vec<f64> = b3.iter().map(linalg::norm).collect();
        norms.sort_by(f64::total_cmp);
        assert!((norms[0] - 0.5 * 2f64.sqrt()).abs() < 1e-14);
        assert!((norms[norms.len() - 1] - 2.0).abs() < 1e-14);
        assert!(catalog(&"A:3:orbit=1,2".parse().unwrap(), ToleranceContext::default()).is_err());
        assert!(catalog(&"I2:5:orbit=1,2".parse().unwrap(), ToleranceContext::default()).is_err());
        assert!(catalog(&"I2:6:orbit=1,2".parse().unwrap(), ToleranceContext::default()).is_ok());
    }

    #[test]
    fn label_parsing() {
        let s: CatalogSpec = "B:3:orbit=1,2".parse().unwrap();
        assert_eq!(s.label, CoxeterLabel::B(3));
        assert_eq!(s.scales, Some((1.0, 2.0)));
        assert_eq!("I2:6".parse::<CatalogSpec>().unwrap().label, CoxeterLabel::I2(6));
        assert_eq!("E:8".parse::<CatalogSpec>().unwrap().label, CoxeterLabel::E8);
        assert_eq!("H4".parse::<CatalogSpec>().unwrap().label, CoxeterLabel::H4);
        assert_eq!("I2(5)".parse::<CatalogSpec>().unwrap().label, CoxeterLabel::I2(5));
        assert!("Q:3".parse::<CatalogSpec>().is_err());
        assert!("E:5".parse::<CatalogSpec>().is_err());
        assert!("B:3:orbit=x".parse::<CatalogSpec>().is_err());
        let round: CatalogSpec = s.to_string().parse().unwrap();
        assert_eq!(round, s);
    }
}
