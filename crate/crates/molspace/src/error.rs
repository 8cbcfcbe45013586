use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {0} not found")]
    VertexNotFound(VertexId),
    #[error("edge {0}-{1} not found")]
    EdgeNotFound(VertexId, VertexId),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invalid gluing: {0}")]
    InvalidGluing(String),
    #[error("duplicate kirpich at rows {0} and {1}")]
    DuplicateKirpich(usize, usize),
    #[error("digitization selected no cubes")]
    EmptyDigitization,
    #[error("invalid stencil: {0}")]
    InvalidStencil(String),
    #[error("hyperbolic step needs two layers")]
    NeedsTwoLayers,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("invalid base: {0}")]
    InvalidBase(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
}

impl Error {
    /// Stable machine-readable tag used by the CLI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::VertexNotFound(_) => "VertexNotFound",
            Error::EdgeNotFound(..) => "EdgeNotFound",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::IllegalMove(_) => "IllegalMove",
            Error::InvalidChain(_) => "InvalidChain",
            Error::InvalidGluing(_) => "InvalidGluing",
            Error::DuplicateKirpich(..) => "DuplicateKirpich",
            Error::EmptyDigitization => "EmptyDigitization",
            Error::InvalidStencil(_) => "InvalidStencil",
            Error::NeedsTwoLayers => "NeedsTwoLayers",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::InvalidBase(_) => "InvalidBase",
            Error::InternalInvariantViolation(_) => "InternalInvariantViolation",
            Error::Parse(_) => "ParseError",
            Error::UnknownCatalog(_) => "UnknownCatalog",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
