use std::collections::BTreeSet;

use serde::Serialize;

use super::VectorSet;
use crate::error::Result;
use crate::linalg::{self, norm};

/// The intersection of a vector set with a linear subspace, closed under
/// negation. `members` is sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Flat {
    pub members: Vec<usize>,
    pub rank: usize,
}

impl Flat {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Pair indices covered by the flat.
    pub fn pairs(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().filter(|&&i| i % 2 == 0).map(|&i| i / 2)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn vectors<'a>(&self, set: &'a VectorSet) -> Vec<&'a [f64]> {
        self.members.iter().map(|&i| set.vector(i)).collect()
    }

    /// The members as a vector set of their own (same ambient dimension).
    pub fn as_vector_set(&self, set: &VectorSet) -> Result<VectorSet> {
        set.subset(&self.members)
    }

    /// Orthonormal basis of the span of the members.
    pub fn span_basis(&self, set: &VectorSet) -> Vec<Vec<f64>> {
        linalg::orthonormal_basis(self.pairs().map(|k| set.representative(k)), set.tol())
    }

    /// Checks closure under negation and `Span(F) ∩ R = F`.
    pub fn is_closed(&self, set: &VectorSet) -> bool {
        if !self.members.iter().all(|&i| self.contains(VectorSet::partner(i))) {
            return false;
        }
        let basis = self.span_basis(set);
        if basis.len() != self.rank {
            return false;
        }
        let tol = set.tol();
        (0..set.len()).all(|i| {
            let v = set.vector(i);
            let inside = tol.is_zero(linalg::residual_norm(v, &basis), norm(v));
            inside == self.contains(i)
        })
    }
}

/// Smallest flat containing the given pair indices.
pub fn span_closure(set: &VectorSet, pairs: &[usize]) -> Flat {
    let basis = linalg::orthonormal_basis(pairs.iter().map(|&k| set.representative(k)), set.tol());
    closure_of_basis(set, &basis)
}

fn closure_of_basis(set: &VectorSet, basis: &[Vec<f64>]) -> Flat {
    let tol = set.tol();
    let mut members = Vec::new();
    for k in 0..set.pair_count() {
        let r = set.representative(k);
        if tol.is_zero(linalg::residual_norm(r, basis), norm(r)) {
            members.push(2 * k);
            members.push(2 * k + 1);
        }
    }
    Flat {
        members,
        rank: basis.len(),
    }
}

/// All distinct flats of rank `1..=max_rank`, ordered by rank and then by
/// member indices. Rank-`k` flats are produced by extending every rank-`k-1`
/// flat with one outside pair and taking the span closure.
pub fn flats(set: &VectorSet, max_rank: usize) -> Vec<Flat> {
    let mut out = Vec::new();
    let mut level: Vec<Flat> = Vec::new();
    for rank in 1..=max_rank.min(set.dim()) {
        let mut next: BTreeSet<Flat> = BTreeSet::new();
        if rank == 1 {
            for k in 0..set.pair_count() {
                next.insert(Flat {
                    members: vec![2 * k, 2 * k + 1],
                    rank: 1,
                });
            }
        } else {
            for f in &level {
                let basis = f.span_basis(set);
                for k in 0..set.pair_count() {
                    if f.contains(2 * k) {
                        continue;
                    }
                    let mut b = basis.clone();
                    let mut r = set.representative(k).to_vec();
                    linalg::reject(&mut r, &b);
                    b.push(linalg::unit(&r));
                    let g = closure_of_basis(set, &b);
                    next.insert(g);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next.into_iter().collect();
        out.extend(level.iter().cloned());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, CatalogSpec};
    use crate::tolerance::ToleranceContext;
    use crate::vectorset::Vector;

    fn b3() -> VectorSet {
        catalog(&"B:3".parse::<CatalogSpec>().unwrap(), ToleranceContext::default()).unwrap()
    }

    #[test]
    fn square_flats() {
        let sq = VectorSet::canonicalize(
            &[Vector(vec![1.0, 0.0]), Vector(vec![0.0, 1.0])],
            ToleranceContext::default(),
        )
        .unwrap();
        let fl = flats(&sq, 2);
        assert_eq!(fl.len(), 3);
        assert_eq!(fl.iter().filter(|f| f.rank == 1).count(), 2);
        let top = fl.iter().find(|f| f.rank == 2).unwrap();
        assert_eq!(top.members, vec![0, 1, 2, 3]);
    }

    /// Oracle: close Span{r, s} ∩ R for every non-parallel pair by direct
    /// 2x2 determinant tests (coplanarity via the triple product in ℝ³).
    fn brute_force_two_flat_sizes(set: &VectorSet) -> Vec<usize> {
        let n = set.pair_count();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                let (r, s) = (set.representative(a), set.representative(b));
                let normal = [
                    r[1] * s[2] - r[2] * s[1],
                    r[2] * s[0] - r[0] * s[2],
                    r[0] * s[1] - r[1] * s[0],
                ];
                let members: Vec<usize> = (0..n)
                    .filter(|&k| {
                        let t = set.representative(k);
                        (t[0] * normal[0] + t[1] * normal[1] + t[2] * normal[2]).abs() < 1e-9
                    })
                    .collect();
                seen.insert(members);
            }
        }
        let mut sizes: Vec<usize> = seen.iter().map(|m| 2 * m.len()).collect();
        sizes.sort();
        sizes
    }

    #[test]
    fn b3_two_flats_match_brute_force() {
        let set = b3();
        let mut sizes: Vec<usize> = flats(&set, 2).iter().filter(|f| f.rank == 2).map(|f| f.len()).collect();
        sizes.sort();
        assert_eq!(sizes, brute_force_two_flat_sizes(&set));
        // 6 orthogonal pairs (4 vectors), 4 triangular (6), 3 square-octagonal (8)
        assert_eq!(sizes, [vec![4; 6], vec![6; 4], vec![8; 3]].concat());
    }

    #[test]
    fn every_flat_is_closed() {
        let set = b3();
        for f in flats(&set, 3) {
            assert!(f.is_closed(&set), "{f:?}");
        }
    }

    #[test]
    fn hexagon_rank_one_flats_are_pairs() {
        let hex = catalog(&"I2:3".parse::<CatalogSpec>().unwrap(), ToleranceContext::default()).unwrap();
        let fl = flats(&hex, 1);
        assert_eq!(fl.len(), 3);
        assert!(fl.iter().all(|f| f.len() == 2));
    }

    #[test]
    fn closure_and_validity() {
        let set = b3();
        // Two coordinate axes span a plane holding four lines of B3.
        let axes: Vec<usize> = (0..set.pair_count())
            .filter(|&k| set.representative(k).iter().filter(|x| x.abs() > 1e-12).count() == 1)
            .take(2)
            .collect();
        let plane = span_closure(&set, &axes);
        assert_eq!(plane.rank, 2);
        assert_eq!(plane.len(), 8);
        assert!(!plane.is_empty());
        assert!(plane.is_closed(&set));
        let mut missing_partner = plane.clone();
        missing_partner.members.pop();
        assert!(!missing_partner.is_closed(&set));
        let mut wrong_rank = plane.clone();
        wrong_rank.rank = 3;
        assert!(!wrong_rank.is_closed(&set));
        let mut not_saturated = plane.clone();
        not_saturated.members.truncate(4);
        assert!(!not_saturated.is_closed(&set));
    }
}
