use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("classes live over different rings: {left} vs {right}")]
    BaseMismatch { left: String, right: String },

    #[error("class is not a unit: degree-0 term is {constant}, expected 1")]
    NonUnit { constant: String },

    #[error("integration requires a projective-space base, got {base}")]
    NoIntegration { base: String },

    #[error("no assignment for symbol `{0}` on the target base")]
    MissingAssignment(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("formal base of dimension {formal} cannot be specialized to a base of dimension {target}")]
    DimensionTooSmall { formal: u32, target: u32 },

    #[error("class is not a base class (contains bundle symbol `{0}`)")]
    NotABaseClass(String),

    #[error("invalid projective bundle: {0}")]
    InvalidBundle(String),

    #[error("degenerate presentation: codimension {codim} exceeds ambient dimension {ambient}")]
    DegeneratePresentation { codim: usize, ambient: u32 },

    #[error("invalid hypersurface class {class}: {reason}")]
    InvalidHypersurface { class: String, reason: String },

    #[error("presentation is not flagged smooth; use the Chern-Fulton class instead")]
    NotSmooth,

    #[error("stratum `{0}` is not registered")]
    UnregisteredStratum(String),

    #[error("duplicate stratum `{0}`")]
    DuplicateStratum(String),

    #[error("stratum `{0}` has no known CSM class")]
    UnsolvedStratum(String),

    #[error("stratum solve is underdetermined: {0}")]
    Underdetermined(String),

    #[error("stratum `{name}` enters with coefficient {coefficient}; only ±1 can be solved for")]
    NonInvertible { name: String, coefficient: i64 },

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("invalid resolution datum: {0}")]
    InvalidResolution(String),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("equation cannot be made homogeneous: {0}")]
    NonHomogenizable(String),

    #[error("malformed equation `{0}`")]
    MalformedEquation(String),

    #[error("catalog integrity check failed for {family}: {reason}")]
    CatalogIntegrity { family: String, reason: String },

    #[error("formal dimension {requested} outside the allowed range 1..={cap}")]
    DimensionCap { requested: u32, cap: u32 },

    #[error("scenario file: {0}")]
    Scenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
