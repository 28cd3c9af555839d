//! JSON wire format for vector sets.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::ToleranceContext;
use crate::vectorset::{Vector, VectorSet};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_abs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_rel: Option<f64>,
}

/// A generator list as stored on disk. `generators` may hold one vector per
/// ± pair or the full symmetric set; loading symmetrizes and reduces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorSetDocument {
    pub dimension: usize,
    pub generators: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceOverrides>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl VectorSetDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::Document("dimension must be at least 1".into()));
        }
        if self.generators.is_empty() {
            return Err(Error::EmptyInput);
        }
        for g in &self.generators {
            if g.len() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    found: g.len(),
                });
            }
        }
        Ok(())
    }

    /// The document's tolerance overrides applied on top of `base`.
    pub fn tolerance(&self, base: ToleranceContext) -> Result<ToleranceContext> {
        let o = self.tolerance.unwrap_or_default();
        ToleranceContext::new(o.eps_abs.unwrap_or(base.eps_abs), o.eps_rel.unwrap_or(base.eps_rel))
            .ok_or_else(|| Error::Document("tolerances must be positive and finite".into()))
    }

    pub fn to_vector_set(&self, base: ToleranceContext) -> Result<VectorSet> {
        self.validate()?;
        let raw: Vec<Vector> = self.generators.iter().cloned().map(Vector).collect();
        VectorSet::canonicalize(&raw, self.tolerance(base)?)
    }

    /// Stores the full canonical set together with its tolerance.
    pub fn from_vector_set(set: &VectorSet, metadata: BTreeMap<String, String>) -> Self {
        let tol = set.tol();
        Self {
            dimension: set.dim(),
            generators: set.iter().map(<[f64]>::to_vec).collect(),
            tolerance: Some(ToleranceOverrides {
                eps_abs: Some(tol.eps_abs),
                eps_rel: Some(tol.eps_rel),
            }),
            metadata,
        }
    }
}
