//! Per-dimension count of irreducible homogeneous zonotopes.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::generic_direction;
use crate::rootsystem::{self, catalog, CatalogSpec, CoxeterLabel};
use crate::tolerance::ToleranceContext;
use crate::vectorset::{are_congruent, SemiStar, VectorSet};
use crate::zonotope::Zonotope;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableEntry {
    pub label: CoxeterLabel,
    pub root_count: usize,
    pub weyl_order: u128,
    pub irreducible_root_system: bool,
    /// Checked on the normalized zonotope when its vertex count is within
    /// the enumeration cap, otherwise `None`.
    pub homogeneous: Option<bool>,
    /// An earlier entry whose normalized star has congruent semi-stars.
    pub coincides_with: Option<CoxeterLabel>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub dim: usize,
    pub count: usize,
    pub entries: Vec<TableEntry>,
}

/// Irreducible root systems of rank `d`, each family once.
fn families(d: usize) -> Vec<CoxeterLabel> {
    let mut out = vec![CoxeterLabel::A(d), CoxeterLabel::B(d), CoxeterLabel::D(d)];
    match d {
        3 => out.push(CoxeterLabel::H3),
        4 => out.extend([CoxeterLabel::F4, CoxeterLabel::H4]),
        6 => out.push(CoxeterLabel::E6),
        7 => out.push(CoxeterLabel::E7),
        8 => out.push(CoxeterLabel::E8),
        _ => {}
    }
    out
}

/// Builds every irreducible root system of rank `d`, normalizes it, checks
/// that it is an irreducible root system (and, below `enumeration_cap`
/// vertices, that its zonotope is homogeneous), then merges entries whose
/// positive systems are congruent.
pub fn homogeneous_table(
    dims: RangeInclusive<usize>,
    enumeration_cap: u128,
    tol: ToleranceContext,
) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for d in dims {
        if d < 3 {
            return Err(Error::UnsupportedDimension {
                dim: d,
                what: "count table (rank 2 has infinitely many types)",
            });
        }
        let mut entries: Vec<TableEntry> = Vec::new();
        let mut positives: Vec<(usize, Vec<Vec<f64>>)> = Vec::new();
        for label in families(d) {
            let raw = catalog(&CatalogSpec::new(label), tol)?;
            let z = Zonotope::new(raw).normalize()?;
            let set: &VectorSet = z.generators();
            let irreducible_root_system =
                rootsystem::is_root_system(set).is_root_system && rootsystem::decompose(set).len() == 1;
            let weyl_order = label.weyl_order();
            let homogeneous = if weyl_order <= enumeration_cap {
                Some(z.clone().with_max_chambers(enumeration_cap as usize).is_homogeneous()?)
            } else {
                None
            };
            let positive = SemiStar::from_direction(set, &generic_direction(d, 9))?.owned_vectors(set);
            let coincides_with = positives
                .iter()
                .find(|(_, p)| p.len() == positive.len() && are_congruent(p, &positive, &tol).is_some())
                .map(|(i, _)| entries[*i].label);
            positives.push((entries.len(), positive));
            entries.push(TableEntry {
                label,
                root_count: set.len(),
                weyl_order,
                irreducible_root_system,
                homogeneous,
                coincides_with,
            });
        }
        let count = entries
            .iter()
            .filter(|e| e.irreducible_root_system && e.homogeneous != Some(false) && e.coincides_with.is_none())
            .count();
        rows.push(TableRow { dim: d, count, entries });
    }
    Ok(rows)
}
