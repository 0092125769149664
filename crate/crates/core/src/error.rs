use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("assignment contains both {0} and -{0}")]
    InconsistentAssignment(u32),

    #[error("assignments may only contain variable literals, not TRUE/FALSE")]
    SentinelInAssignment,

    #[error("variable and vertex ids start at 1")]
    ZeroId,

    #[error("edges must contain at least one vertex")]
    EmptyEdge,

    #[error("graphs must contain at least one edge")]
    EmptyGraph,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("graph has {vertices} vertices, over the bound of {bound}")]
    VertexBound { vertices: usize, bound: usize },

    #[error("vertex {vertex} has degree {degree}; {requirement}")]
    Degree {
        vertex: u32,
        degree: u32,
        requirement: &'static str,
    },

    #[error("{what} needs {count} cases, over the budget of {budget}")]
    Budget {
        what: &'static str,
        count: String,
        budget: u64,
    },

    #[error("{0} variables exceed the enumeration bound")]
    VariableBound(usize),

    #[error("TRUE and FALSE have no supporting graph")]
    NoSupportingGraph,

    #[error("edge {0} is not a simple edge")]
    NotSimple(String),

    #[error("computation interrupted: deadline reached")]
    Timeout,

    #[error("{0}")]
    Io(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
