use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrientationError {
    #[error("orientation string is empty")]
    Empty,
    #[error("invalid symbol {found:?} at position {position} (expected '+', '-' or '*')")]
    InvalidSymbol { position: usize, found: char },
    #[error("a cycle needs length at least 3, got {len}")]
    TooShort { len: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error(transparent)]
    Orientation(#[from] OrientationError),
    #[error("expected {expected} images, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    /// 1-based index of the first edge of the source whose image is not an arc.
    #[error("edge {edge} of the source is not mapped to an arc of the target")]
    EdgeViolation { edge: usize },
    #[error("homomorphisms are between different cycles")]
    InstanceMismatch,
    #[error("map is not increasing")]
    NotIncreasing,
    #[error("invalid selection function: {0}")]
    InvalidSelection(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error("enumeration visited more than {cap} partial assignments")]
    CapExceeded { cap: usize },
    #[error("the two maps are not adjacent in the Hom-graph")]
    NotAdjacent,
}
