//! Monotone fan-in-2 circuits for directed reachability.
//!
//! Circuits are built by repeated squaring, by lifting a small circuit
//! through a covering set family, or from the lines of a finite affine
//! plane, and each builder reports an exact per-stage depth ledger. The
//! [`verification`] module holds the brute-force oracles every circuit is
//! checked against.

pub mod circuit;
pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod rng;
pub mod verification;

pub use circuit::{Gate, GateOp, MonotoneCircuit, Violation, WireId, WireMatrix};
pub use error::{Error, Result};
pub use graph::AdjacencyMatrix;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
