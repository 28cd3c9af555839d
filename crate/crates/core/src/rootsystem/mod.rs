//! Reflections, the root-system test, irreducible decomposition and Coxeter
//! type identification.

pub mod catalog;
pub mod coxeter;
pub mod weyl;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

pub use catalog::{catalog, CatalogSpec, PHI};
pub use coxeter::{identify_type, simple_roots, CoxeterLabel, CoxeterType};
pub use weyl::{orbit, weyl_closure, WeylGroup, DEFAULT_MAX_GROUP};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::tolerance::ToleranceContext;
use crate::vectorset::{Flat, OrthogonalMap, Vector, VectorSet};

/// `T_r v = v - 2 <v, r>/<r, r> r`.
pub fn reflect(r: &[f64], v: &[f64]) -> Vec<f64> {
    let c = 2.0 * dot(v, r) / dot(r, r);
    v.iter().zip(r).map(|(a, b)| a - c * b).collect()
}

/// `I - 2 r rᵀ / |r|²`.
pub fn reflection_matrix(r: &[f64]) -> DMatrix<f64> {
    let d = r.len();
    let rr = dot(r, r);
    DMatrix::from_fn(d, d, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - 2.0 * r[i] * r[j] / rr
    })
}

/// The reflection `T_r` through the hyperplane `r^⊥`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reflection {
    pub root: Vector,
    pub map: OrthogonalMap,
}

impl Reflection {
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        reflect(&self.root, v)
    }
}

pub fn reflection(r: &[f64], tol: &ToleranceContext) -> Result<Reflection> {
    if r.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index: 0 });
    }
    if norm(r) <= tol.eps_abs {
        return Err(Error::ZeroVector);
    }
    Ok(Reflection {
        root: Vector::from(r),
        map: OrthogonalMap::new(reflection_matrix(r), tol)?,
    })
}

/// A reflection that carries a member of the set outside it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub root_index: usize,
    pub target_index: usize,
    pub root: Vector,
    pub target: Vector,
    pub image: Vector,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootCheck {
    pub is_root_system: bool,
    pub violation: Option<Violation>,
}

/// Checks `T_r R = R` for every `r ∈ R`. Only representatives need testing
/// since `T_{-r} = T_r` and `T_r(-s) = -T_r s`. The reported violation is the
/// first in (root, target) index order.
pub fn is_root_system(set: &VectorSet) -> RootCheck {
    let pairs = set.pair_count();
    let violation = (0..pairs).into_par_iter().find_map_first(|k| {
        let r = set.representative(k);
        (0..pairs).find_map(|j| {
            let s = set.representative(j);
            let image = reflect(r, s);
            (!set.contains(&image)).then(|| Violation {
                root_index: 2 * k,
                target_index: 2 * j,
                root: Vector::from(r),
                target: Vector::from(s),
                image: Vector(image),
            })
        })
    });
    RootCheck {
        is_root_system: violation.is_none(),
        violation,
    }
}

/// Connected components of the non-orthogonality graph on `set`, as flats
/// ordered by their smallest member. For a root system these are the
/// irreducible components.
pub fn decompose(set: &VectorSet) -> Vec<Flat> {
    let tol = set.tol();
    let n = set.pair_count();
    let mut component = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        component[start] = id;
        let mut stack = vec![start];
        let mut pairs = vec![start];
        while let Some(k) = stack.pop() {
            let r = set.representative(k);
            for (j, slot) in component.iter_mut().enumerate() {
                if *slot != usize::MAX {
                    continue;
                }
                let s = set.representative(j);
                if !tol.is_zero(dot(r, s), norm(r) * norm(s)) {
                    *slot = id;
                    stack.push(j);
                    pairs.push(j);
                }
            }
        }
        pairs.sort_unstable();
        let members: Vec<usize> = pairs.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let rank = crate::linalg::orthonormal_basis(pairs.iter().map(|&k| set.representative(k)), tol).len();
        out.push(Flat { members, rank });
    }
    out
}

/// One irreducible component with its type, when it is a root system.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Component {
    pub flat: Flat,
    pub coxeter: Option<CoxeterType>,
}

/// Full root-system analysis of a set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootSystemReport {
    pub check: RootCheck,
    pub components: Vec<Component>,
    /// Product of the component Weyl orders, from the identified types.
    pub weyl_order: Option<u128>,
}

impl RootSystemReport {
    pub fn is_root_system(&self) -> bool {
        self.check.is_root_system
    }

    pub fn labels(&self) -> Vec<CoxeterLabel> {
        self.components
            .iter()
            .filter_map(|c| c.coxeter.as_ref().map(|t| t.label))
            .collect()
    }
}

pub fn analyze(set: &VectorSet) -> Result<RootSystemReport> {
    let check = is_root_system(set);
    let flats = decompose(set);
    let mut components = Vec::with_capacity(flats.len());
    for flat in flats {
        let coxeter = if check.is_root_system {
            Some(identify_type(&flat.as_vector_set(set)?)?)
        } else {
            None
        };
        components.push(Component { flat, coxeter });
    }
    let weyl_order = check.is_root_system.then(|| {
        components
            .iter()
            .filter_map(|c| c.coxeter.as_ref())
            .fold(1u128, |acc, t| acc.saturating_mul(t.label.weyl_order()))
    });
    Ok(RootSystemReport {
        check,
        components,
        weyl_order,
    })
}
