//! Vertex-transitivity, homogeneity and Γ-permutahedron classification.
//!
//! Three routes decide the same property and are computed independently:
//! congruence of all semi-stars, closure of the set under its own
//! reflections, and the angle pattern of every rank-2 flat. The verdict
//! records whether they agree.

mod pattern;
mod table;

use rayon::prelude::*;
use serde::Serialize;

pub use pattern::{bd_vertex_pattern, homogeneous_vertex_pattern_bd, same_up_to_scale};
pub use table::{homogeneous_table, TableEntry, TableRow};

use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm};
use crate::rootsystem::{self, weyl_closure, CoxeterType, RootSystemReport, DEFAULT_MAX_GROUP};
use crate::tolerance::ToleranceContext;
use crate::vectorset::{
    flats, is_centrally_symmetric, CongruenceProbe, Flat, OrthogonalMap, SemiStar, Vector, VectorSet,
    DEFAULT_MAX_CHAMBERS,
};
use crate::zonotope::{Inscription, Zonotope};

#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    pub max_chambers: usize,
    pub max_group: usize,
    /// Keep every congruence map in the verdict rather than just their count.
    pub full_witness: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            max_chambers: DEFAULT_MAX_CHAMBERS,
            max_group: DEFAULT_MAX_GROUP,
            full_witness: false,
        }
    }
}

/// Evidence for the vertex-transitivity verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VtWitness {
    /// `maps[i]` sends semi-star `base` onto semi-star `i`.
    Congruent {
        base: usize,
        count: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        maps: Option<Vec<OrthogonalMap>>,
    },
    /// Semi-star `other` admits no orthogonal map from `base`.
    NonCongruent {
        base: SemiStar,
        other: SemiStar,
        other_index: usize,
    },
    /// Too many chambers to enumerate; the verdict follows from the root
    /// system test.
    Inferred { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexTransitivity {
    pub vertex_transitive: bool,
    pub semi_star_count: usize,
    pub witness: VtWitness,
}

/// Compares every semi-star with the first one.
pub fn is_vertex_transitive(set: &VectorSet, max_chambers: usize) -> Result<VertexTransitivity> {
    let z = Zonotope::new(set.clone()).with_max_chambers(max_chambers);
    vertex_transitivity_of(&z)
}

fn vertex_transitivity_of(z: &Zonotope) -> Result<VertexTransitivity> {
    let set = z.generators();
    let stars = &z.semi_stars()?.stars;
    let probe = CongruenceProbe::new(stars[0].owned_vectors(set), *set.tol());
    let maps: Vec<Option<OrthogonalMap>> = stars
        .par_iter()
        .map(|s| probe.match_onto(&s.owned_vectors(set)))
        .collect();
    let count = stars.len();
    if let Some(bad) = maps.iter().position(Option::is_none) {
        return Ok(VertexTransitivity {
            vertex_transitive: false,
            semi_star_count: count,
            witness: VtWitness::NonCongruent {
                base: stars[0].clone(),
                other: stars[bad].clone(),
                other_index: bad,
            },
        });
    }
    Ok(VertexTransitivity {
        vertex_transitive: true,
        semi_star_count: count,
        witness: VtWitness::Congruent {
            base: 0,
            count,
            maps: Some(maps.into_iter().map(Option::unwrap).collect()),
        },
    })
}

/// Outcome of the rank-2 flat test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoFaceReport {
    pub holds: bool,
    pub flats_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending: Option<Flat>,
}

/// Whether the vectors of a rank-2 flat form a planar root system: `m` lines
/// spaced by exactly `π/m`, with equal lengths when `m` is odd and lengths
/// alternating between two values when `m` is even.
pub fn is_planar_root_system(vectors: &[&[f64]], tol: &ToleranceContext) -> bool {
    let reps: Vec<&[f64]> = vectors.iter().copied().step_by(2).collect();
    let basis = linalg::orthonormal_basis(reps.iter().copied(), tol);
    if basis.len() != 2 {
        return false;
    }
    let pi = std::f64::consts::PI;
    let mut lines: Vec<(f64, f64)> = reps
        .iter()
        .map(|r| {
            let mut a = dot(r, &basis[1]).atan2(dot(r, &basis[0]));
            if a < 0.0 {
                a += pi;
            }
            if a >= pi {
                a -= pi;
            }
            (a, norm(r))
        })
        .collect();
    lines.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m = lines.len();
    let step = pi / m as f64;
    let angle_ok = (0..m).all(|i| {
        let next = if i + 1 < m { lines[i + 1].0 } else { lines[0].0 + pi };
        tol.is_zero(next - lines[i].0 - step, 10.0)
    });
    let length_ok = if m % 2 == 1 {
        lines.iter().all(|l| tol.approx_eq(l.1, lines[0].1))
    } else {
        (0..m).all(|i| tol.approx_eq(lines[i].1, lines[i % 2].1))
    };
    angle_ok && length_ok
}

/// True iff every rank-2 flat is a planar root system.
pub fn check_two_face_criterion(set: &VectorSet) -> TwoFaceReport {
    let two: Vec<Flat> = flats(set, 2).into_iter().filter(|f| f.rank == 2).collect();
    let offending = two
        .iter()
        .find(|f| !is_planar_root_system(&f.vectors(set), set.tol()))
        .cloned();
    TwoFaceReport {
        holds: offending.is_none(),
        flats_checked: two.len(),
        offending,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormCriterion {
    pub all_norms_equal: bool,
    pub min_norm: f64,
    pub max_norm: f64,
}

/// For a centrally symmetric set of unit vectors: all semi-star norms are
/// equal exactly when the set is a root system. The function checks the
/// norms and fails with a consistency error if the answer disagrees with
/// the reflection-closure test.
pub fn semi_star_norm_criterion(set: &VectorSet, max_chambers: usize) -> Result<NormCriterion> {
    let tol = set.tol();
    for (index, r) in set.iter().enumerate() {
        let n = norm(r);
        if !tol.approx_eq(n, 1.0) {
            return Err(Error::NonUnitInput { index, norm: n });
        }
    }
    let z = Zonotope::new(set.clone()).with_max_chambers(max_chambers);
    let stars = &z.semi_stars()?.stars;
    let norms: Vec<f64> = stars.iter().map(|s| s.norm(set)).collect();
    let max_norm = norms.iter().copied().fold(0.0, f64::max);
    let min_norm = norms.iter().copied().fold(f64::INFINITY, f64::min);
    let all_norms_equal = tol.is_zero(max_norm - min_norm, max_norm);
    let root = rootsystem::is_root_system(set).is_root_system;
    if all_norms_equal != root {
        return Err(Error::Consistency(format!(
            "semi-star norms equal = {all_norms_equal} but root system = {root}"
        )));
    }
    Ok(NormCriterion {
        all_norms_equal,
        min_norm,
        max_norm,
    })
}

/// [`semi_star_norm_criterion`] on a raw list, which must already be
/// centrally symmetric and consist of unit vectors.
pub fn semi_star_norm_criterion_raw(
    raw: &[Vector],
    tol: ToleranceContext,
    max_chambers: usize,
) -> Result<NormCriterion> {
    if !is_centrally_symmetric(raw, &tol) {
        return Err(Error::NotCentrallySymmetric);
    }
    for (index, r) in raw.iter().enumerate() {
        let n = r.norm();
        if !tol.approx_eq(n, 1.0) {
            return Err(Error::NonUnitInput { index, norm: n });
        }
    }
    semi_star_norm_criterion(&VectorSet::canonicalize(raw, tol)?, max_chambers)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputSummary {
    pub dim: usize,
    pub generator_count: usize,
    pub rank: usize,
    pub spans_ambient: bool,
}

/// Which route produced the vertex-transitivity verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictPath {
    Enumerated,
    Inferred,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylClosureSummary {
    pub order: Option<usize>,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationVerdict {
    pub input_summary: InputSummary,
    pub vertex_transitive: bool,
    pub vt_path: VerdictPath,
    pub vt_witness: VtWitness,
    pub vertex_count: Option<u128>,
    /// `None` when the chambers could not be enumerated and the set is not a
    /// root system.
    pub homogeneous: Option<bool>,
    pub inscribed: Option<Inscription>,
    pub root_system: RootSystemReport,
    pub weyl_closure: Option<WeylClosureSummary>,
    pub two_face: TwoFaceReport,
    pub permutahedron_types: Vec<CoxeterType>,
    /// Smallest chamber margin met during enumeration.
    pub min_margin: Option<f64>,
    pub equivalences_consistent: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inconsistencies: Vec<String>,
}

/// Canonicalizes `raw` and classifies it.
pub fn classify(raw: &[Vector], tol: ToleranceContext, options: ClassifyOptions) -> Result<ClassificationVerdict> {
    classify_set(&VectorSet::canonicalize(raw, tol)?, options)
}

pub fn classify_set(set: &VectorSet, options: ClassifyOptions) -> Result<ClassificationVerdict> {
    let root = rootsystem::analyze(set)?;
    let is_root = root.is_root_system();
    let z = Zonotope::new(set.clone()).with_max_chambers(options.max_chambers);

    let weyl = match root.weyl_order {
        Some(order) if order <= options.max_group as u128 => {
            let g = weyl_closure(set, options.max_group);
            Some(WeylClosureSummary {
                order: g.order(),
                truncated: g.truncated,
            })
        }
        _ => None,
    };

    let too_many = root.weyl_order.is_some_and(|o| o > options.max_chambers as u128);
    let enumerated = if too_many {
        None
    } else {
        match vertex_transitivity_of(&z) {
            Ok(vt) => Some(vt),
            Err(Error::CapExceeded { .. }) => None,
            Err(e) => return Err(e),
        }
    };

    let (vt, vt_path, inscribed, min_margin) = match enumerated {
        Some(mut vt) => {
            if !options.full_witness {
                if let VtWitness::Congruent { maps, .. } = &mut vt.witness {
                    *maps = None;
                }
            }
            let ins = z.is_inscribed()?;
            let margin = z.semi_stars()?.min_margin;
            (vt, VerdictPath::Enumerated, Some(ins), Some(margin))
        }
        None => {
            let reason = format!(
                "more than {} chambers; vertex-transitive exactly when the set is a root system",
                options.max_chambers
            );
            let vt = VertexTransitivity {
                vertex_transitive: is_root,
                semi_star_count: 0,
                witness: VtWitness::Inferred { reason },
            };
            // every vertex of a Γ-permutahedron is an image of one vertex
            let ins = if is_root {
                let c = linalg::generic_direction(set.dim(), 5);
                let radius = z.vertex_in_direction(&c)?.norm();
                Some(Inscription {
                    inscribed: true,
                    radius,
                    spread: 0.0,
                })
            } else {
                None
            };
            (vt, VerdictPath::Inferred, ins, None)
        }
    };

    let two_face = check_two_face_criterion(set);
    let homogeneous = inscribed.map(|i| i.inscribed && z.has_equal_edges());
    let vertex_count = match vt_path {
        VerdictPath::Enumerated => Some(vt.semi_star_count as u128),
        VerdictPath::Inferred => root.weyl_order,
    };

    let mut inconsistencies = Vec::new();
    if vt.vertex_transitive != is_root {
        inconsistencies.push(format!(
            "semi-star congruence says {} but reflection closure says {}",
            vt.vertex_transitive, is_root
        ));
    }
    if two_face.holds != is_root {
        inconsistencies.push(format!(
            "rank-2 flat test says {} but reflection closure says {}",
            two_face.holds, is_root
        ));
    }
    if homogeneous == Some(true) && !vt.vertex_transitive {
        inconsistencies.push("homogeneous but not vertex-transitive".into());
    }
    if let (Some(w), Some(order)) = (&weyl, root.weyl_order) {
        if w.order.map(|o| o as u128) != Some(order) {
            inconsistencies.push(format!(
                "reflection closure has order {:?}, the identified types predict {order}",
                w.order
            ));
        }
    }
    if vt_path == VerdictPath::Enumerated && is_root {
        if let Some(order) = root.weyl_order {
            if vt.semi_star_count as u128 != order {
                inconsistencies.push(format!(
                    "{} semi-stars but the Weyl group has order {order}",
                    vt.semi_star_count
                ));
            }
        }
    }

    let permutahedron_types = if vt.vertex_transitive {
        root.components.iter().filter_map(|c| c.coxeter.clone()).collect()
    } else {
        Vec::new()
    };
    Ok(ClassificationVerdict {
        input_summary: InputSummary {
            dim: set.dim(),
            generator_count: set.len(),
            rank: set.rank(),
            spans_ambient: set.spans_ambient(),
        },
        vertex_transitive: vt.vertex_transitive,
        vt_path,
        vt_witness: vt.witness,
        vertex_count,
        homogeneous,
        inscribed,
        root_system: root,
        weyl_closure: weyl,
        two_face,
        permutahedron_types,
        min_margin,
        equivalences_consistent: inconsistencies.is_empty(),
        inconsistencies,
    })
}
