use thiserror::Error;

/// Errors produced by every part of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: usize },
    #[error("line {line}: negative or non-finite weight {weight}")]
    BadWeight { line: usize, weight: String },
    #[error("invalid {kind} id {id} (graph has {limit})")]
    InvalidId { kind: &'static str, id: usize, limit: usize },
    #[error("node {0} is removed in this subnetwork")]
    RemovedEndpoint(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("failure set has {got} elements, oracle tolerates at most {max}")]
    TooManyFailures { got: usize, max: usize },
    #[error("failure kind mismatch: {0}")]
    FailureKind(String),
    #[error("{what}: requires {required}, cap is {allowed}")]
    CapExceeded { what: &'static str, required: u128, allowed: u128 },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("malformed container: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
