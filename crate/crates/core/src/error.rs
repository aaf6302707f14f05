use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported Cartan type {kind}{rank} (supported: A_n n>=2, D_n n>=4, E_6, E_7, E_8)")]
    UnsupportedType { kind: String, rank: usize },

    #[error("weight has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weight {0:?} is not in the positive root cone")]
    NegativeWeight(Vec<i64>),

    #[error("root {0:?} is not a positive real root")]
    NotRealRoot(Vec<i64>),

    #[error("vertex {0} is not a finite-type vertex")]
    NotFiniteVertex(usize),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("simple root alpha_{vertex} not found among beta_k with |k| <= {bound}")]
    SimpleRootNotFound { vertex: usize, bound: i64 },

    #[error("diagonal block {class} is singular")]
    SingularBlock { class: usize },

    #[error("entry ({row}, {col}) is not a Laurent polynomial: {value}")]
    NotInA { row: usize, col: usize, value: String },

    #[error("no divided-power word of weight {0:?} passes the fiber checks")]
    NoMonomial(Vec<i64>),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
