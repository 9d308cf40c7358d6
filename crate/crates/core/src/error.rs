use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field order {0}")]
    UnsupportedField(u8),
    #[error("element does not belong to backend {expected}: {found}")]
    BackendMismatch { expected: String, found: String },
    #[error("window {window} too small, need at least {needed}")]
    InsufficientWindow { window: usize, needed: usize },
    #[error("tuples have different lengths ({0} vs {1})")]
    Arity(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size bound exceeded: {what} is {size}, bound {bound}")]
    SizeBound { what: String, size: u64, bound: u64 },
    #[error("no closed set sandwiches the subgroup of order {order}")]
    NoSupport { order: usize },
    #[error("no automorphism pair found: {0}")]
    NoWitness(String),
    #[error("weak canonical base is not unique: {0}")]
    NonUnique(String),
    #[error("not attempted on this backend: {0}")]
    NotAttempted(String),
    #[error("operation not applicable: {0}")]
    Inapplicable(String),
    #[error("image leaves the window: {0}")]
    WindowOverflow(String),
    #[error("map is not an isomorphism of the window: {0}")]
    NotAnIsomorphism(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
