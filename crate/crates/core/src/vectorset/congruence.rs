//! Congruence of finite point sets under O(d) by Gram-matrix matching.

use nalgebra::DMatrix;

use super::{OrthogonalMap, PointIndex};
use crate::linalg::{self, dot, norm};
use crate::tolerance::ToleranceContext;

/// Per-vector invariants: squared norm and the sorted row of inner products.
fn signatures(vs: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let gram: Vec<Vec<f64>> = vs.iter().map(|a| vs.iter().map(|b| dot(a, b)).collect()).collect();
    let sigs = gram
        .iter()
        .map(|row| {
            let mut s = row.clone();
            s.sort_by(f64::total_cmp);
            s
        })
        .collect();
    (gram, sigs)
}

fn max_norm_sq(vs: &[Vec<f64>]) -> f64 {
    vs.iter().map(|v| dot(v, v)).fold(0.0, f64::max)
}

/// Precomputed data for matching one source set against many targets.
#[derive(Clone, Debug)]
pub struct CongruenceProbe {
    source: Vec<Vec<f64>>,
    gram: Vec<Vec<f64>>,
    sigs: Vec<Vec<f64>>,
    dim: usize,
    tol: ToleranceContext,
}

impl CongruenceProbe {
    pub fn new(source: Vec<Vec<f64>>, tol: ToleranceContext) -> Self {
        let dim = source.first().map_or(0, Vec::len);
        let (gram, sigs) = signatures(&source);
        Self {
            source,
            gram,
            sigs,
            dim,
            tol,
        }
    }

    /// Finds an orthogonal map `T` with `T·source = target` as sets.
    ///
    /// Candidate images are restricted to target vectors with matching norm
    /// and inner-product row multiset. A linearly independent subset of the
    /// source (most constrained vectors first) is matched by backtracking with
    /// pairwise Gram consistency; each complete basis assignment determines
    /// `T`, which is then verified on every source vector.
    pub fn match_onto(&self, target: &[Vec<f64>]) -> Option<OrthogonalMap> {
        let n = self.source.len();
        if n != target.len() {
            return None;
        }
        if n == 0 {
            return Some(OrthogonalMap::identity(self.dim));
        }
        if target.iter().any(|t| t.len() != self.dim) {
            return None;
        }
        let (tgram, tsigs) = signatures(target);
        let gtol = self
            .tol
            .threshold(max_norm_sq(&self.source).max(max_norm_sq(target)));
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= gtol);

        let candidates: Vec<Vec<usize>> = self
            .sigs
            .iter()
            .map(|s| (0..n).filter(|&j| close(s, &tsigs[j])).collect())
            .collect();
        if candidates.iter().any(Vec::is_empty) {
            return None;
        }

        // Basis selection: fewest candidates, then shortest, then lexicographic.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            candidates[a]
                .len()
                .cmp(&candidates[b].len())
                .then(self.gram[a][a].total_cmp(&self.gram[b][b]))
                .then_with(|| {
                    self.source[a]
                        .iter()
                        .zip(&self.source[b])
                        .map(|(x, y)| x.total_cmp(y))
                        .find(|o| o.is_ne())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
        });
        let mut basis_idx = Vec::new();
        let mut ortho: Vec<Vec<f64>> = Vec::new();
        for &i in &order {
            let v = &self.source[i];
            let mut w = v.clone();
            linalg::reject(&mut w, &ortho);
            if norm(&w) > self.tol.threshold(norm(v)) {
                ortho.push(linalg::unit(&w));
                basis_idx.push(i);
            }
        }

        let lookup = PointIndex::new(self.dim, target.iter().map(Vec::as_slice));
        let mut assignment = Vec::with_capacity(basis_idx.len());
        let mut used = vec![false; n];
        self.search(
            &basis_idx,
            &candidates,
            &tgram,
            gtol,
            target,
            &lookup,
            &mut assignment,
            &mut used,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        basis_idx: &[usize],
        candidates: &[Vec<usize>],
        tgram: &[Vec<f64>],
        gtol: f64,
        target: &[Vec<f64>],
        lookup: &PointIndex,
        assignment: &mut Vec<usize>,
        used: &mut [bool],
    ) -> Option<OrthogonalMap> {
        let depth = assignment.len();
        if depth == basis_idx.len() {
            return self.verify(basis_idx, assignment, target, lookup);
        }
        let i = basis_idx[depth];
        for &j in &candidates[i] {
            if used[j] {
                continue;
            }
            let consistent = basis_idx[..depth]
                .iter()
                .zip(assignment.iter())
                .all(|(&a, &b)| (self.gram[i][a] - tgram[j][b]).abs() <= gtol);
            if !consistent {
                continue;
            }
            used[j] = true;
            assignment.push(j);
            let found = self.search(basis_idx, candidates, tgram, gtol, target, lookup, assignment, used);
            assignment.pop();
            used[j] = false;
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn verify(
        &self,
        basis_idx: &[usize],
        assignment: &[usize],
        target: &[Vec<f64>],
        lookup: &PointIndex,
    ) -> Option<OrthogonalMap> {
        let map = self.build_map(basis_idx, assignment, target);
        let mut hit = vec![false; target.len()];
        for v in &self.source {
            let j = lookup.find(&map.apply(v), &self.tol)?;
            if std::mem::replace(&mut hit[j], true) {
                return None;
            }
        }
        Some(map)
    }

    /// `T = Q'Qᵀ + P'Pᵀ` where `Q` orthonormalizes the matched source basis,
    /// `Q'` applies the same triangular transform to the images, and `P`, `P'`
    /// complete both to orthonormal bases of ℝ^d.
    fn build_map(&self, basis_idx: &[usize], assignment: &[usize], target: &[Vec<f64>]) -> OrthogonalMap {
        let d = self.dim;
        let mut q: Vec<Vec<f64>> = Vec::new();
        let mut q_img: Vec<Vec<f64>> = Vec::new();
        for (&a, &b) in basis_idx.iter().zip(assignment) {
            let mut w = self.source[a].clone();
            let mut w_img = target[b].clone();
            for (qm, qm_img) in q.iter().zip(&q_img) {
                let c = dot(&self.source[a], qm);
                for ((x, y), (z, u)) in w.iter_mut().zip(qm).zip(w_img.iter_mut().zip(qm_img)) {
                    *x -= c * y;
                    *z -= c * u;
                }
            }
            let r = norm(&w);
            q.push(linalg::scaled(&w, 1.0 / r));
            q_img.push(linalg::scaled(&w_img, 1.0 / r));
        }
        let p = linalg::complement_basis(&q, d);
        let p_img = linalg::complement_basis(&q_img, d);
        let mut m = DMatrix::<f64>::zeros(d, d);
        for (src, img) in q.iter().zip(&q_img).chain(p.iter().zip(&p_img)) {
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] += img[i] * src[j];
                }
            }
        }
        OrthogonalMap::from_matrix_unchecked(m)
    }
}

/// Orthogonal map carrying `a` onto `b` as sets, if one exists.
pub fn are_congruent(a: &[Vec<f64>], b: &[Vec<f64>], tol: &ToleranceContext) -> Option<OrthogonalMap> {
    if let (Some(x), Some(y)) = (a.first(), b.first()) {
        if x.len() != y.len() {
            return None;
        }
    }
    CongruenceProbe::new(a.to_vec(), *tol).match_onto(b)
}
