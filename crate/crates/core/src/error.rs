use thiserror::Error;

use crate::wring::Namespace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("namespace mismatch: expected {expected:?}, found {found:?}")]
    NamespaceMismatch { expected: Namespace, found: Namespace },

    #[error("no image given for variable index {0}")]
    MissingImage(u32),

    #[error("operation is only defined on Stiefel-Whitney classes, not on root variables")]
    RootNamespace,

    #[error("incompatible ambient rings: {0}")]
    IncompatibleAmbient(&'static str),

    #[error("the ring context needs a finite degree cap or rank cap to materialize {0}")]
    UnboundedContext(&'static str),

    #[error("invalid index set {set} at rank {rank}: {reason}")]
    InvalidIndexSet {
        set: String,
        rank: String,
        reason: &'static str,
    },

    #[error("degree cap {cap:?} is below the required degree {needed}")]
    DegreeCapTooSmall { needed: u32, cap: Option<u32> },

    #[error("rank cap {cap:?} is below the required rank {needed}")]
    RankCapTooSmall { needed: u32, cap: Option<u32> },

    #[error("class is not complexifiable (offending monomial {witness})")]
    NotComplexifiable { witness: String },

    #[error("class is not in the ideal generated by squares (square-free monomial {witness})")]
    NotInIdeal { witness: String },

    #[error("relation {relation}: {reason}")]
    SideCondition { relation: u8, reason: String },

    #[error("integer coefficient overflow")]
    CoefficientOverflow,

    #[error("a total class must have constant term 1, got {0}")]
    NotATotalClass(String),
}
