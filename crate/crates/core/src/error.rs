use std::path::PathBuf;

use crate::graph::{EdgeRef, NodeId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on node '{label}' is not allowed")]
    SelfLoopInput { line: usize, label: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("edge {0} is not in the graph")]
    EdgeNotFound(EdgeRef),

    #[error("node {0} is out of range for a graph with {1} nodes")]
    NodeOutOfRange(NodeId, usize),

    #[error("self-loop ({0}, {0}) requested")]
    SelfLoop(NodeId),

    #[error(
        "exact transport on edge {edge} needs degrees ({deg_u}, {deg_v}) but the guard allows at most {guard}"
    )]
    Capability {
        edge: EdgeRef,
        deg_u: usize,
        deg_v: usize,
        guard: usize,
    },

    #[error("curvature map was computed on a different graph (fingerprint {expected:#018x}, graph {actual:#018x})")]
    Stale { expected: u64, actual: u64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("correlation is undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("mixture fit needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("sample variance {0:e} is below the degeneracy threshold")]
    ZeroVariance(f64),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
