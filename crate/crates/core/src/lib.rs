//! Simulation of Lindblad decoherence for graph states, with a closed-form
//! oracle for the complete graph and a dense brute-force reference.

pub mod dense;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod linalg;
pub mod mps;
pub mod oracle;
pub mod pauli;
pub mod vectorized;

pub use error::{Error, Result};
