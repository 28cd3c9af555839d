use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input is empty after removing zero vectors")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("{what} exceeded the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("matrix is not orthogonal within tolerance (deviation {deviation:e})")]
    NotOrthogonal { deviation: f64 },
    #[error("invalid catalog request: {0}")]
    InvalidCatalog(String),
    #[error("Coxeter diagram not recognized: {0}")]
    UnmatchedDiagram(String),
    #[error("expected an irreducible root system, found {components} components")]
    NotIrreducible { components: usize },
    #[error("input is not a root system")]
    NotRootSystem,
    #[error("direction is orthogonal to a generator and could not be perturbed to a generic one")]
    NonGenericDirection,
    #[error("generator {index} has norm {norm}, expected a unit vector")]
    NonUnitInput { index: usize, norm: f64 },
    #[error("input is not centrally symmetric")]
    NotCentrallySymmetric,
    #[error("unsupported dimension {dim} for {what}")]
    UnsupportedDimension { dim: usize, what: &'static str },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("group closure is truncated")]
    TruncatedGroup,
    #[error("document error: {0}")]
    Document(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
