//! Sensitivity oracles for graphs with up to `f` failing edges or nodes.
//!
//! * [`rpc`]: sampling-tree `(L, f)`-replacement path coverings and the flat
//!   baseline they are compared against.
//! * [`dso`]: `L`-hop distance sensitivity oracle over a covering, and the
//!   general oracle for bounded-diameter graphs.
//! * [`motif`]: fixed-parameter sensitivity oracles for `k`-paths and
//!   `k`-cliques.
//! * [`verify`]: brute-force ground truth and statistical trial drivers.
//! * [`bench`]: work and size counters, trees versus flat baseline.

pub mod bench;
pub mod cli;
mod codec;
pub mod dso;
pub mod error;
pub mod generators;
pub mod graph;
pub mod motif;
pub mod paths;
pub mod rng;
pub mod rpc;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{parse_edge_list, parse_edge_list_str, EdgeId, FailureSet, Graph, HopDistance, NodeId, SubnetworkView};
