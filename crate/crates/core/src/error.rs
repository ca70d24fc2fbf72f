use thiserror::Error;

/// Errors raised by module, preradical and entropy computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation `{0}` is not supported on shift modules")]
    ShiftUnsupported(&'static str),
    #[error("submodule parent does not match the morphism side")]
    MismatchedParent,
    #[error("modules live over different rings")]
    MismatchedRing,
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid submodule: {0}")]
    InvalidSubmodule(String),
    #[error("not representable in this model: {0}")]
    Unrepresentable(String),
    #[error("map is not a flow morphism")]
    NotAFlowMorphism,
    #[error("flow morphism is not a monomorphism")]
    NotMono,
    #[error("{what} has size {size}, above the cap {cap}")]
    TooLarge { what: &'static str, size: u128, cap: u128 },
    #[error("support window {window} exceeds the cap {cap}")]
    SupportOverflow { window: usize, cap: usize },
    #[error("sequence is not subadditive at n={n}, m={m}")]
    NotSubadditive { n: usize, m: usize },
    #[error("no affine tail detected within {0} terms")]
    NoStabilization(usize),
    #[error("supremum not determined: {0}")]
    Undetermined(String),
    #[error("base submodule has infinite norm")]
    InfiniteNorm,
    #[error("endomorphism family is empty")]
    EmptyFamily,
    #[error("unsupported ring map: {0}")]
    UnsupportedRingMap(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("{0} is not a prime")]
    BadPrime(i64),
    #[error("cannot parse norm value `{0}`")]
    BadNorm(String),
    #[error("invalid option: {0}")]
    InvalidOption(String),
}

pub type Result<T> = std::result::Result<T, Error>;
