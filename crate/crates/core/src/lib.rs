pub mod basis;
pub mod cli;
pub mod eigensolve;
pub mod ensemble;
pub mod entanglement;
pub mod error;
pub mod hamiltonian;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
