//! Rank-based representative tables for connectivity dynamic programs on
//! tree decompositions: Steiner tree and Hamiltonian cycle / TSP.

pub mod bench;
pub mod decomposition;
pub mod engine;
pub mod error;
pub mod graph;
pub mod oracles;
pub mod partition;
pub mod reduce;
pub mod schema;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
