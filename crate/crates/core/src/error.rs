use thiserror::Error;

/// Errors raised by the constructions and checkers in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what}: size {size} exceeds enumeration bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("partitions live on different ground sets ({left} vs {right})")]
    GroundMismatch { left: usize, right: usize },
    #[error("partitions are not comparable in the refinement order")]
    NotComparable,
    #[error("discrete quotients belong to different towers")]
    TowerMismatch,
    #[error("cone is not compatible: {0}")]
    IncompatibleCone(String),
    #[error("presheaf does not preserve the finite product for this decomposition: {0}")]
    ProductPreservationFailed(String),
    #[error("value {value} is not an element of the underlying set (size {size})")]
    ValueNotInUnderlying { value: usize, size: usize },
    #[error("not a natural transformation: {0}")]
    NotANaturalTransformation(String),
    #[error("left adjoint is not fully faithful: {0}")]
    LeftNotFullyFaithful(String),
    #[error("witness is not a natural isomorphism: {0}")]
    WitnessNotIso(String),
    #[error("precondition was not certified for this functor: {0}")]
    PreconditionUnchecked(String),
    #[error("map is not linear: {0}")]
    NotLinear(String),
    #[error("extensionality violated: distinct sections agree on every fibre")]
    ExtensionalityViolated,
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
