use thiserror::Error;

/// Errors raised by the combinatorics engine.
///
/// The `Display` strings are part of the command-line contract: the CLI
/// prints them verbatim as its single-line failure reason.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("not finite type")]
    NotFiniteType,
    #[error("unknown group label: {0}")]
    UnknownLabel(String),
    #[error("invalid simple index: {0}")]
    InvalidSimpleIndex(usize),
    #[error("mixed parents")]
    MixedParents,
    /// A named precondition failed, e.g. "w not I-reduced".
    #[error("{0}")]
    Precondition(&'static str),
    #[error("w not Coxeter")]
    NotCoxeter,
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("ambiguous character product")]
    AmbiguousCharacterProduct,
    #[error("mixed label kinds")]
    MixedLabelKinds,
    #[error("invalid character label: {0}")]
    InvalidLabel(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
