//! Zonotopes `Zon(R) = Σ_{r ∈ R} conv{0, r}` and their faces.
//!
//! Each ± pair of generators contributes the segment `[-r, r]`. Vertices are
//! semi-star sums and faces are translates of zonotopes of flats.

mod mesh;

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;

pub use mesh::{obj_string, write_obj};

use crate::error::{Error, Result};
use crate::linalg::{self, dot, generic_direction, norm};
use crate::rootsystem;
use crate::vectorset::{
    flats, semi_stars, Flat, PointIndex, SemiStar, SemiStarEnumeration, Vector, VectorSet,
    DEFAULT_MAX_CHAMBERS,
};

#[derive(Clone, Debug)]
pub struct Zonotope {
    gens: VectorSet,
    max_chambers: usize,
    stars: OnceLock<SemiStarEnumeration>,
}

/// A face `translate + Zon(r_zero)` selected by `direction`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceDescriptor {
    /// Generators strictly on the positive side of `direction`.
    pub r_plus: Vec<usize>,
    /// Generators orthogonal to `direction`.
    pub r_zero: Flat,
    pub translate: Vector,
    pub face_dim: usize,
    pub direction: Vector,
}

impl FaceDescriptor {
    /// Vertex cycle of a 2-face, counter-clockwise when seen from the side
    /// `direction` points to (in 3-D) or in the plane's own orientation.
    pub fn polygon(&self, gens: &VectorSet) -> Result<Vec<Vector>> {
        if self.face_dim != 2 {
            return Err(Error::Degenerate(format!(
                "polygon requested for a face of dimension {}",
                self.face_dim
            )));
        }
        let basis = self.r_zero.span_basis(gens);
        let (u, mut w) = (basis[0].clone(), basis[1].clone());
        if gens.dim() == 3 && triple(&u, &w, &self.direction) < 0.0 {
            w = linalg::scaled(&w, -1.0);
        }
        let mut edges: Vec<(f64, &[f64])> = self
            .r_zero
            .members
            .iter()
            .map(|&i| {
                let v = gens.vector(i);
                (dot(v, &w).atan2(dot(v, &u)), v)
            })
            .collect();
        edges.sort_by(|a, b| a.0.total_cmp(&b.0));
        let m = edges.len() / 2;
        let mut p = self.translate.0.clone();
        for (_, v) in &edges[m..] {
            linalg::add_assign(&mut p, v);
        }
        let mut cycle = Vec::with_capacity(2 * m);
        for (_, v) in &edges {
            cycle.push(Vector(p.clone()));
            linalg::add_assign(&mut p, &linalg::scaled(v, 2.0));
        }
        Ok(cycle)
    }
}

fn triple(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    dot(&cross, c)
}

/// Whether all vertices lie on one sphere about the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Inscription {
    pub inscribed: bool,
    /// Largest vertex norm.
    pub radius: f64,
    /// Largest minus smallest vertex norm.
    pub spread: f64,
}

/// Result of projecting a zonotope along a direction.
#[derive(Clone, Debug)]
pub struct Projection {
    pub zonotope: Zonotope,
    /// Orthonormal basis of `r^⊥` in which the output is expressed.
    pub basis: Vec<Vec<f64>>,
    /// False when the direction was not parallel to any generator.
    pub parallel_to_generator: bool,
}

impl Zonotope {
    pub fn new(gens: VectorSet) -> Self {
        Self {
            gens,
            max_chambers: DEFAULT_MAX_CHAMBERS,
            stars: OnceLock::new(),
        }
    }

    pub fn with_max_chambers(mut self, max_chambers: usize) -> Self {
        self.max_chambers = max_chambers;
        self.stars = OnceLock::new();
        self
    }

    pub fn generators(&self) -> &VectorSet {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        self.gens.dim()
    }

    pub fn max_chambers(&self) -> usize {
        self.max_chambers
    }

    /// All semi-stars, computed once. Root systems whose Weyl order already
    /// exceeds the cap are refused without enumerating.
    pub fn semi_stars(&self) -> Result<&SemiStarEnumeration> {
        if let Some(s) = self.stars.get() {
            return Ok(s);
        }
        if let Some(order) = known_chamber_count(&self.gens)? {
            if order > self.max_chambers as u128 {
                return Err(Error::CapExceeded {
                    what: "chambers",
                    cap: self.max_chambers,
                });
            }
        }
        let e = semi_stars(&self.gens, self.max_chambers)?;
        Ok(self.stars.get_or_init(|| e))
    }

    /// Semi-star sums in semi-star order. Distinct semi-stars must give
    /// distinct vertices; a collision is reported as a consistency error.
    pub fn vertices(&self) -> Result<Vec<Vector>> {
        let stars = &self.semi_stars()?.stars;
        let sums: Vec<Vec<f64>> = stars.iter().map(|s| s.sum(&self.gens)).collect();
        let index = PointIndex::new(self.dim(), sums.iter().map(Vec::as_slice));
        for (i, v) in sums.iter().enumerate() {
            if index.find(v, self.gens.tol()) != Some(i) {
                return Err(Error::Consistency(format!(
                    "two semi-stars share the vertex {}",
                    Vector(v.clone())
                )));
            }
        }
        Ok(sums.into_iter().map(Vector).collect())
    }

    pub fn vertex_count(&self) -> Result<usize> {
        Ok(self.semi_stars()?.stars.len())
    }

    /// The face maximizing `<·, c>`.
    pub fn face_in_direction(&self, c: &[f64]) -> Result<FaceDescriptor> {
        let set = &self.gens;
        if c.len() != set.dim() {
            return Err(Error::DimensionMismatch {
                expected: set.dim(),
                found: c.len(),
            });
        }
        let nc = norm(c);
        if nc == 0.0 {
            return Err(Error::ZeroVector);
        }
        let tol = set.tol();
        let mut r_plus = Vec::new();
        let mut zero = Vec::new();
        let mut translate = vec![0.0; set.dim()];
        for k in 0..set.pair_count() {
            let r = set.representative(k);
            match tol.sign(dot(r, c), norm(r) * nc) {
                1 => r_plus.push(2 * k),
                -1 => r_plus.push(2 * k + 1),
                _ => {
                    zero.push(2 * k);
                    zero.push(2 * k + 1);
                }
            }
        }
        for &i in &r_plus {
            linalg::add_assign(&mut translate, set.vector(i));
        }
        let rank = linalg::orthonormal_basis(zero.iter().step_by(2).map(|&i| set.vector(i)), tol).len();
        Ok(FaceDescriptor {
            r_plus,
            r_zero: Flat { members: zero, rank },
            translate: Vector(translate),
            face_dim: rank,
            direction: Vector::from(c),
        })
    }

    fn whole(&self) -> FaceDescriptor {
        let set = &self.gens;
        FaceDescriptor {
            r_plus: Vec::new(),
            r_zero: Flat {
                members: (0..set.len()).collect(),
                rank: set.rank(),
            },
            translate: Vector(vec![0.0; set.dim()]),
            face_dim: set.rank(),
            direction: Vector(vec![0.0; set.dim()]),
        }
    }

    fn vertex_faces(&self) -> Result<Vec<FaceDescriptor>> {
        let stars = &self.semi_stars()?.stars;
        stars
            .iter()
            .map(|s| self.face_in_direction(&s.direction))
            .collect()
    }

    /// One face per rank-`k` flat `F`, with `Gen(face) = F`. The selecting
    /// direction lies in `F^⊥` and avoids every other generator's hyperplane.
    pub fn faces_from_flats(&self, k: usize) -> Result<Vec<FaceDescriptor>> {
        let set = &self.gens;
        if k > set.dim() {
            return Err(Error::UnsupportedDimension {
                dim: k,
                what: "face rank above the ambient dimension",
            });
        }
        if k == 0 {
            return self.vertex_faces();
        }
        let mut out = Vec::new();
        for flat in flats(set, k).into_iter().filter(|f| f.rank == k) {
            if flat.len() == set.len() {
                out.push(self.whole());
                continue;
            }
            let complement = linalg::complement_basis(&flat.span_basis(set), set.dim());
            let mut found = None;
            for seed in 0..64 {
                let g = generic_direction(complement.len(), seed);
                let mut c = vec![0.0; set.dim()];
                for (q, x) in complement.iter().zip(&g) {
                    linalg::add_assign(&mut c, &linalg::scaled(q, *x));
                }
                let face = self.face_in_direction(&c)?;
                if face.r_zero.members == flat.members {
                    found = Some(face);
                    break;
                }
            }
            out.push(found.ok_or(Error::NonGenericDirection)?);
        }
        Ok(out)
    }

    /// Every face whose generator set is a rank-`k` flat: for each flat `F`,
    /// the chambers of the other generators projected to `F^⊥`.
    pub fn all_faces(&self, k: usize) -> Result<Vec<FaceDescriptor>> {
        let set = &self.gens;
        if k > set.dim() {
            return Err(Error::UnsupportedDimension {
                dim: k,
                what: "face rank above the ambient dimension",
            });
        }
        if k == 0 {
            return self.vertex_faces();
        }
        let tol = *set.tol();
        let mut out = Vec::new();
        let mut budget = self.max_chambers;
        for flat in flats(set, k).into_iter().filter(|f| f.rank == k) {
            if flat.len() == set.len() {
                out.push(self.whole());
                continue;
            }
            let complement = linalg::complement_basis(&flat.span_basis(set), set.dim());
            let projected: Vec<Vector> = (0..set.len())
                .filter(|&i| !flat.contains(i))
                .map(|i| Vector(linalg::coordinates(set.vector(i), &complement)))
                .collect();
            let quotient = VectorSet::canonicalize(&projected, tol)?;
            let chambers = semi_stars(&quotient, budget)?;
            budget = budget.saturating_sub(chambers.stars.len());
            for star in &chambers.stars {
                let mut c = vec![0.0; set.dim()];
                for (q, x) in complement.iter().zip(star.direction.iter()) {
                    linalg::add_assign(&mut c, &linalg::scaled(q, *x));
                }
                let face = self.face_in_direction(&c)?;
                if face.r_zero.members != flat.members {
                    return Err(Error::Consistency(format!(
                        "quotient chamber selected a face with {} generators instead of {}",
                        face.r_zero.len(),
                        flat.len()
                    )));
                }
                out.push(face);
            }
        }
        Ok(out)
    }

    /// Vertex norms, from semi-star sums.
    pub fn is_inscribed(&self) -> Result<Inscription> {
        let stars = &self.semi_stars()?.stars;
        let norms: Vec<f64> = stars.iter().map(|s| s.norm(&self.gens)).collect();
        let max = norms.iter().copied().fold(0.0, f64::max);
        let min = norms.iter().copied().fold(f64::INFINITY, f64::min);
        let spread = max - min;
        Ok(Inscription {
            inscribed: self.gens.tol().is_zero(spread, max),
            radius: max,
            spread,
        })
    }

    pub fn has_equal_edges(&self) -> bool {
        let tol = self.gens.tol();
        let first = norm(self.gens.representative(0));
        self.gens.representatives().all(|r| tol.approx_eq(norm(r), first))
    }

    /// Equal edge lengths and inscribed.
    pub fn is_homogeneous(&self) -> Result<bool> {
        Ok(self.has_equal_edges() && self.is_inscribed()?.inscribed)
    }

    /// `Zon({r/|r|})`.
    pub fn normalize(&self) -> Result<Zonotope> {
        let units: Vec<Vector> = self.gens.iter().map(|r| Vector(linalg::unit(r))).collect();
        let gens = VectorSet::canonicalize(&units, *self.gens.tol())?;
        Ok(Zonotope::new(gens).with_max_chambers(self.max_chambers))
    }

    /// Orthogonal projection onto `r^⊥`, written in the basis obtained by
    /// Gram–Schmidt on `r, e_1, …, e_d` with the coordinate axis where `|r|`
    /// is largest left out, and `r` itself dropped.
    pub fn project_along(&self, r: &[f64]) -> Result<Projection> {
        let set = &self.gens;
        if r.len() != set.dim() {
            return Err(Error::DimensionMismatch {
                expected: set.dim(),
                found: r.len(),
            });
        }
        if norm(r) == 0.0 {
            return Err(Error::ZeroVector);
        }
        let tol = *set.tol();
        let d = set.dim();
        let pivot = (0..d)
            .max_by(|&a, &b| r[a].abs().total_cmp(&r[b].abs()).then(b.cmp(&a)))
            .expect("nonempty");
        let mut basis = vec![linalg::unit(r)];
        for j in (0..d).filter(|&j| j != pivot) {
            let mut e = vec![0.0; d];
            e[j] = 1.0;
            linalg::reject(&mut e, &basis);
            basis.push(linalg::unit(&e));
        }
        basis.remove(0);
        let ru = linalg::unit(r);
        let parallel_to_generator = set.iter().any(|g| {
            let c = dot(&linalg::unit(g), &ru).abs();
            tol.is_zero(1.0 - c, 1.0)
        });
        let images: Vec<Vector> = set
            .iter()
            .map(|g| Vector(linalg::coordinates(g, &basis)))
            .filter(|v| !tol.is_zero(v.norm(), set.max_norm()))
            .collect();
        if images.is_empty() {
            return Err(Error::Degenerate(
                "projection annihilates every generator".into(),
            ));
        }
        let gens = VectorSet::canonicalize(&images, tol)?;
        Ok(Projection {
            zonotope: Zonotope::new(gens).with_max_chambers(self.max_chambers),
            basis,
            parallel_to_generator,
        })
    }

    /// Edge vectors `(v_S - v_S')/2` between vertices whose semi-stars differ
    /// in one pair, deduplicated. For a reduced set this recovers `R`.
    pub fn edge_generators(&self) -> Result<VectorSet> {
        let stars = &self.semi_stars()?.stars;
        let by_members: HashMap<&[usize], usize> =
            stars.iter().enumerate().map(|(i, s)| (s.members.as_slice(), i)).collect();
        let sums: Vec<Vec<f64>> = stars.iter().map(|s| s.sum(&self.gens)).collect();
        let mut edges: Vec<Vec<f64>> = Vec::new();
        for (i, s) in stars.iter().enumerate() {
            let mut flipped = s.members.clone();
            for k in 0..flipped.len() {
                flipped[k] ^= 1;
                if let Some(&j) = by_members.get(flipped.as_slice()) {
                    edges.push(linalg::scaled(&linalg::sub(&sums[i], &sums[j]), 0.5));
                }
                flipped[k] ^= 1;
            }
        }
        let index = PointIndex::new(self.dim(), edges.iter().map(Vec::as_slice));
        let distinct: Vec<Vector> = edges
            .iter()
            .enumerate()
            .filter(|(i, e)| index.find(e, self.gens.tol()) == Some(*i))
            .map(|(_, e)| Vector(e.clone()))
            .collect();
        if distinct.is_empty() {
            return Err(Error::Degenerate("zonotope has no edges".into()));
        }
        VectorSet::canonicalize(&distinct, *self.gens.tol())
    }

    /// The semi-star cut out by `c`, as a vertex.
    pub fn vertex_in_direction(&self, c: &[f64]) -> Result<Vector> {
        Ok(Vector(SemiStar::from_direction(&self.gens, c)?.sum(&self.gens)))
    }
}

/// Product of Weyl orders when `set` is a root system, else `None`.
fn known_chamber_count(set: &VectorSet) -> Result<Option<u128>> {
    if !rootsystem::is_root_system(set).is_root_system {
        return Ok(None);
    }
    Ok(rootsystem::analyze(set)?.weyl_order)
}
