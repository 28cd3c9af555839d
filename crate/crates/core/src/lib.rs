//! Classification of zonotopes by the symmetry of their generator sets.
//!
//! A zonotope is determined by a reduced, centrally symmetric set of
//! generators. Its vertices are the sums of semi-stars (the generators on the
//! positive side of a hyperplane), and it is vertex-transitive exactly when
//! the generators form a root system.

pub mod classify;
pub mod document;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod random;
pub mod rootsystem;
pub mod tolerance;
pub mod vectorset;
pub mod zonotope;

pub use error::{Error, Result};
pub use rootsystem::catalog;
pub use tolerance::ToleranceContext;
pub use vectorset::{Vector, VectorSet};
