use thiserror::Error;

use crate::graph::Violation;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count must be positive")]
    EmptyGraph,
    #[error("edge endpoint out of range: ({tail}, {head})")]
    OutOfRangeEndpoint { tail: u16, head: u16 },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: u16 },
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OgcError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("inadmissible input: {0}")]
    InadmissibleInput(Violation),
    #[error("edge label {label} out of range 1..={count}")]
    EdgeOutOfRange { label: usize, count: usize },
    #[error("resource limit exceeded: {0}")]
    ResourceLimitExceeded(String),
    #[error("basis not available for {0}")]
    MissingBasis(String),
    #[error("skeleton graph contains marked (both-ways) edges")]
    ContainsEe,
    #[error("loop order {0} has no skeleton model")]
    UnsupportedLoopOrder(i64),
    #[error("map stage mismatch: expected stage {expected}, got {got}")]
    WrongStage { expected: usize, got: usize },
    #[error("core graph is disconnected")]
    Disconnected,
    #[error("matrices do not form a chain map: {0}")]
    NotAChainMap(String),
    #[error("range does not cover the full complex: {0}")]
    IncompleteRange(String),
    #[error("residues disagree between primes {0} and {1}")]
    PrimeDisagreement(u64, u64),
    #[error("cache entry corrupt: {0}")]
    CorruptCache(String),
    #[error("cache format version mismatch (found {found}, expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for OgcError {
    fn from(e: std::io::Error) -> Self {
        OgcError::Io(e.to_string())
    }
}
