use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{Vector, VectorSet};
use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm};
use crate::lp;
use crate::tolerance::ToleranceContext;

/// Default bound on the number of chambers (equivalently semi-stars) an
/// enumeration may produce.
pub const DEFAULT_MAX_CHAMBERS: usize = 1_000_000;

/// The intersection of a vector set with an open half-space containing
/// exactly half of its elements.
///
/// `members[k]` is the index (`2k` or `2k + 1`) of the element of pair `k`
/// that lies on the positive side of `direction`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SemiStar {
    pub members: Vec<usize>,
    pub direction: Vector,
}

impl SemiStar {
    /// The semi-star cut out by `c`. Fails when `c` is orthogonal to some
    /// element of `set` within tolerance.
    pub fn from_direction(set: &VectorSet, c: &[f64]) -> Result<Self> {
        if c.len() != set.dim() {
            return Err(Error::DimensionMismatch {
                expected: set.dim(),
                found: c.len(),
            });
        }
        let tol = set.tol();
        let nc = norm(c);
        let mut members = Vec::with_capacity(set.pair_count());
        for k in 0..set.pair_count() {
            let r = set.representative(k);
            match tol.sign(dot(r, c), norm(r) * nc) {
                1 => members.push(2 * k),
                -1 => members.push(2 * k + 1),
                _ => return Err(Error::NonGenericDirection),
            }
        }
        Ok(Self {
            members,
            direction: Vector::from(c),
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `true` for pair `k` when the representative (not its negation) is a
    /// member.
    pub fn signs(&self) -> impl Iterator<Item = bool> + '_ {
        self.members.iter().map(|&i| i % 2 == 0)
    }

    pub fn vectors<'a>(&self, set: &'a VectorSet) -> Vec<&'a [f64]> {
        self.members.iter().map(|&i| set.vector(i)).collect()
    }

    pub fn owned_vectors(&self, set: &VectorSet) -> Vec<Vec<f64>> {
        self.members.iter().map(|&i| set.vector(i).to_vec()).collect()
    }

    /// `v_S = Σ_{r ∈ S} r`.
    pub fn sum(&self, set: &VectorSet) -> Vec<f64> {
        let mut acc = vec![0.0; set.dim()];
        for &i in &self.members {
            linalg::add_assign(&mut acc, set.vector(i));
        }
        acc
    }

    /// Norm of the sum of the members.
    pub fn norm(&self, set: &VectorSet) -> f64 {
        norm(&self.sum(set))
    }

    /// The complementary semi-star, cut out by `-direction`.
    pub fn complement(&self) -> SemiStar {
        SemiStar {
            members: self.members.iter().map(|&i| VectorSet::partner(i)).collect(),
            direction: Vector(self.direction.iter().map(|x| -x).collect()),
        }
    }

    /// Checks the defining invariants against `set`: one element per pair,
    /// and `direction` strictly separating members from non-members.
    pub fn is_valid(&self, set: &VectorSet) -> bool {
        if self.members.len() != set.pair_count() {
            return false;
        }
        let tol = set.tol();
        let nc = self.direction.norm();
        self.members.iter().enumerate().all(|(k, &i)| {
            if i / 2 != k {
                return false;
            }
            let r = set.vector(i);
            let bound = tol.eps_abs * norm(r) * nc;
            dot(r, &self.direction) > bound && dot(set.vector(VectorSet::partner(i)), &self.direction) < -bound
        })
    }

    /// Image of the semi-star under a permutation of the parent set, if the
    /// image is again of the form "one element per pair".
    pub fn permuted(&self, perm: &[usize]) -> Option<Vec<usize>> {
        let mut members: Vec<usize> = self.members.iter().map(|&i| perm[i]).collect();
        members.sort_unstable();
        members
            .iter()
            .enumerate()
            .all(|(k, &i)| i / 2 == k)
            .then_some(members)
    }
}

/// All semi-stars of a set, with the smallest max-margin value over the
/// chambers they came from (a stability indicator: how close the
/// arrangement is to a degenerate one).
#[derive(Clone, Debug)]
pub struct SemiStarEnumeration {
    pub stars: Vec<SemiStar>,
    pub min_margin: f64,
}

struct Chamber {
    /// Bit `j` set when the chamber lies on the positive side of normal `j`.
    signs: Vec<u64>,
    witness: Vec<f64>,
}

fn bit(signs: &[u64], j: usize) -> bool {
    signs[j / 64] >> (j % 64) & 1 == 1
}

fn set_bit(signs: &mut [u64], j: usize) {
    signs[j / 64] |= 1 << (j % 64);
}

fn sign_key(normals: &[Vec<f64>], p: &[f64], words: usize) -> Result<Vec<u64>> {
    let mut key = vec![0; words];
    for (j, u) in normals.iter().enumerate() {
        let v = dot(u, p);
        if v == 0.0 {
            return Err(Error::Consistency("restricted witness lies on a hyperplane".into()));
        }
        if v > 0.0 {
            set_bit(&mut key, j);
        }
    }
    Ok(key)
}

/// Unit normals of `normals` projected to `u^⊥`, in coordinates of `basis`,
/// with parallel images merged.
fn restrict(normals: &[Vec<f64>], basis: &[Vec<f64>], tol: &ToleranceContext) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for u in normals {
        let w = linalg::unit(&linalg::coordinates(u, basis));
        let neg = linalg::scaled(&w, -1.0);
        if !out.iter().any(|x| tol.vec_eq(x, &w) || tol.vec_eq(x, &neg)) {
            out.push(w);
        }
    }
    out
}

/// One interior point per chamber of the arrangement restricted to `u^⊥`,
/// in ambient coordinates.
fn restricted_witnesses(
    earlier: &[Vec<f64>],
    u: &[f64],
    tol: &ToleranceContext,
    cap: usize,
) -> Result<Vec<Vec<f64>>> {
    let m = u.len();
    if m == 1 {
        return Ok(vec![vec![0.0]]);
    }
    let basis = linalg::complement_basis(&[u.to_vec()], m);
    let sub = chambers(&restrict(earlier, &basis, tol), m - 1, tol, cap)?;
    Ok(sub
        .into_iter()
        .map(|c| {
            let mut p = vec![0.0; m];
            for (b, x) in basis.iter().zip(&c.witness) {
                linalg::add_assign(&mut p, &linalg::scaled(b, *x));
            }
            p
        })
        .collect())
}

/// Largest step along `u` from `p` (on `u^⊥`) that stays inside the chamber
/// of `p`, halved.
fn step_off(earlier: &[Vec<f64>], u: &[f64], p: &[f64]) -> f64 {
    earlier
        .iter()
        .filter_map(|w| {
            let b = dot(w, u).abs();
            (b > 0.0).then(|| dot(w, p).abs() / b)
        })
        .fold(1.0, f64::min)
        * 0.5
}

/// Chambers of the central arrangement with pairwise non-parallel unit
/// `normals` in ℝ^m, by deletion–restriction: inserting normal `i` splits
/// exactly the chambers met by `u_i^⊥`, and those correspond one-to-one to
/// the chambers of the earlier normals restricted to `u_i^⊥`, a problem in
/// one dimension less.
fn chambers(normals: &[Vec<f64>], m: usize, tol: &ToleranceContext, cap: usize) -> Result<Vec<Chamber>> {
    let n = normals.len();
    let words = n.div_ceil(64).max(1);
    let cuts: Vec<Vec<Vec<f64>>> = (0..n)
        .into_par_iter()
        .map(|i| restricted_witnesses(&normals[..i], &normals[i], tol, cap))
        .collect::<Result<_>>()?;
    let mut current = vec![Chamber {
        signs: vec![0; words],
        witness: linalg::generic_direction(m, 0),
    }];
    for (i, u) in normals.iter().enumerate() {
        let index: HashMap<&[u64], usize> = current
            .iter()
            .enumerate()
            .map(|(k, c)| (c.signs.as_slice(), k))
            .collect();
        let mut cut_at: Vec<Option<&[f64]>> = vec![None; current.len()];
        for p in &cuts[i] {
            let key = sign_key(&normals[..i], p, words)?;
            let k = *index
                .get(key.as_slice())
                .ok_or_else(|| Error::Consistency("restricted chamber has no parent".into()))?;
            if cut_at[k].replace(p).is_some() {
                return Err(Error::Consistency("two restricted chambers share a parent".into()));
            }
        }
        let mut next = Vec::with_capacity(current.len() + cuts[i].len());
        for (c, cut) in current.iter().zip(cut_at) {
            match cut {
                Some(p) => {
                    let t = step_off(&normals[..i], u, p);
                    let mut plus = c.signs.clone();
                    set_bit(&mut plus, i);
                    let along = linalg::scaled(u, t);
                    let mut wp = p.to_vec();
                    linalg::add_assign(&mut wp, &along);
                    let wm = linalg::sub(p, &along);
                    next.push(Chamber {
                        signs: plus,
                        witness: linalg::unit(&wp),
                    });
                    next.push(Chamber {
                        signs: c.signs.clone(),
                        witness: linalg::unit(&wm),
                    });
                }
                None => {
                    let v = dot(u, &c.witness);
                    if v == 0.0 {
                        return Err(Error::Consistency("uncut chamber witness lies on a hyperplane".into()));
                    }
                    let mut signs = c.signs.clone();
                    if v > 0.0 {
                        set_bit(&mut signs, i);
                    }
                    next.push(Chamber {
                        signs,
                        witness: c.witness.clone(),
                    });
                }
            }
        }
        if next.len() > cap {
            return Err(Error::CapExceeded {
                what: "semi-star (chamber) count",
                cap,
            });
        }
        current = next;
    }
    Ok(current)
}

fn chamber_lp(units: &[Vec<f64>], signs: &[u64], dim: usize) -> Result<(f64, Vec<f64>)> {
    lp::max_margin(
        dim,
        units
            .iter()
            .enumerate()
            .map(|(j, u)| (u.as_slice(), if bit(signs, j) { 1.0 } else { -1.0 })),
    )
}

/// Enumerates every semi-star of `set` exactly once.
///
/// Semi-stars correspond to the chambers of the central arrangement
/// `{r^⊥ : r ∈ set}`, found by deletion–restriction without any
/// optimization. Each chamber is then certified by a max-margin program,
/// whose optimizer becomes the semi-star's direction. The result is sorted
/// by member indices.
pub fn semi_stars(set: &VectorSet, max_chambers: usize) -> Result<SemiStarEnumeration> {
    let dim = set.dim();
    let tol = set.tol();
    let floor = tol.margin_floor();
    let units: Vec<Vec<f64>> = set.representatives().map(linalg::unit).collect();
    let found = chambers(&units, dim, tol, max_chambers)?;

    let finished: Result<Vec<(SemiStar, f64)>> = found
        .into_par_iter()
        .map(|ch| {
            let (t, c) = chamber_lp(&units, &ch.signs, dim)?;
            if t <= floor {
                return Err(Error::Consistency(format!(
                    "chamber has no certified interior (margin {t:e})"
                )));
            }
            let members = (0..units.len())
                .map(|k| if bit(&ch.signs, k) { 2 * k } else { 2 * k + 1 })
                .collect();
            Ok((
                SemiStar {
                    members,
                    direction: Vector(c),
                },
                t,
            ))
        })
        .collect();
    let mut finished = finished?;
    let min_margin = finished.iter().map(|(_, t)| *t).fold(f64::INFINITY, f64::min);
    finished.sort_by(|a, b| a.0.members.cmp(&b.0.members));
    Ok(SemiStarEnumeration {
        stars: finished.into_iter().map(|(s, _)| s).collect(),
        min_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, CatalogSpec};
    use crate::tolerance::ToleranceContext;

    fn set(raw: &[&[f64]]) -> VectorSet {
        let raw: Vec<Vector> = raw.iter().map(|v| Vector::from(*v)).collect();
        VectorSet::canonicalize(&raw, ToleranceContext::default()).unwrap()
    }

    fn hexagon() -> VectorSet {
        let s = 3f64.sqrt() / 2.0;
        set(&[&[1.0, 0.0], &[0.5, s], &[-0.5, s]])
    }

    /// Brute force: all 2^n sign patterns, kept when the max-margin program
    /// certifies a nonempty open cone.
    fn brute_force(set: &VectorSet) -> Vec<Vec<usize>> {
        let n = set.pair_count();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|k| {
                    let s = if mask >> k & 1 == 1 { 1.0 } else { -1.0 };
                    set.representative(k).iter().map(|x| s * x).collect()
                })
                .collect();
            let (t, _) = lp::max_margin(set.dim(), rows.iter().map(|r| (r.as_slice(), 1.0))).unwrap();
            if t > 1e-7 {
                out.push((0..n).map(|k| if mask >> k & 1 == 1 { 2 * k } else { 2 * k + 1 }).collect());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn square_has_four_quadrant_semi_stars() {
        let sq = set(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let e = semi_stars(&sq, DEFAULT_MAX_CHAMBERS).unwrap();
        assert_eq!(e.stars.len(), 4);
        let sums: Vec<Vec<f64>> = e.stars.iter().map(|s| s.sum(&sq)).collect();
        for v in [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]] {
            assert!(sums.iter().any(|s| s == &v));
        }
    }

    #[test]
    fn hexagon_semi_stars_match_brute_force() {
        let hex = hexagon();
        let e = semi_stars(&hex, DEFAULT_MAX_CHAMBERS).unwrap();
        let got: Vec<Vec<usize>> = e.stars.iter().map(|s| s.members.clone()).collect();
        assert_eq!(got, brute_force(&hex));
        assert_eq!(got.len(), 6);
        // each semi-star is three consecutive unit vectors: their sum has norm 2
        for s in &e.stars {
            assert!((s.norm(&hex) - 2.0).abs() < 1e-12);
            assert!(s.is_valid(&hex));
        }
    }

    #[test]
    fn b3_has_48_semi_stars() {
        let b3 = catalog(&"B:3".parse::<CatalogSpec>().unwrap(), ToleranceContext::default()).unwrap();
        let e = semi_stars(&b3, DEFAULT_MAX_CHAMBERS).unwrap();
        assert_eq!(e.stars.len(), 48);
        let got: Vec<Vec<usize>> = e.stars.iter().map(|s| s.members.clone()).collect();
        assert_eq!(got, brute_force(&b3));
    }

    #[test]
    fn complements_are_semi_stars() {
        let b3 = catalog(&"B:3".parse::<CatalogSpec>().unwrap(), ToleranceContext::default()).unwrap();
        let e = semi_stars(&b3, DEFAULT_MAX_CHAMBERS).unwrap();
        assert_eq!(e.stars.len() % 2, 0);
        for s in &e.stars {
            let c = s.complement();
            assert!(c.is_valid(&b3));
            assert!(e.stars.iter().any(|t| t.members == c.members));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let b3 = catalog(&"B:3".parse::<CatalogSpec>().unwrap(), ToleranceContext::default()).unwrap();
        assert!(matches!(semi_stars(&b3, 10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn lower_dimensional_sets_enumerate_within_their_span() {
        let flat = set(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        assert_eq!(semi_stars(&flat, DEFAULT_MAX_CHAMBERS).unwrap().stars.len(), 4);
    }

    #[test]
    fn from_direction_rejects_orthogonal_directions() {
        let sq = set(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert!(matches!(
            SemiStar::from_direction(&sq, &[1.0, 0.0]),
            Err(Error::NonGenericDirection)
        ));
        let s = SemiStar::from_direction(&sq, &[1.0, -2.0]).unwrap();
        assert_eq!(s.sum(&sq), vec![1.0, -1.0]);
    }

    #[test]
    fn direction_checks_and_accessors() {
        let hex = hexagon();
        assert!(matches!(SemiStar::from_direction(&hex, &[1.0]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(SemiStar::from_direction(&hex, &[0.0, 1.0]), Err(Error::NonGenericDirection)));
        let s = SemiStar::from_direction(&hex, &[1.0, 0.1]).unwrap();
        assert_eq!(s.len(), 3);
        assert!(!s.is_empty());
        let signs: Vec<bool> = s.signs().collect();
        assert_eq!(signs.len(), 3);
        assert_eq!(s.complement().signs().map(|b| !b).collect::<Vec<_>>(), signs);
        let mut bad = s.clone();
        bad.members.swap(0, 1);
        assert!(!bad.is_valid(&hex));
        // The complement is the semi-star of the opposite direction.
        assert!(s.complement().is_valid(&hex));
    }
}
