//! Second-quantized simulation of qubit teleportation between spatial modes
//! using the mode entanglement of a single massive particle, with a condensate
//! serving as phase reference under the particle-number superselection rule.
//!
//! The crate is organized bottom-up:
//!
//! * [`fock`]: dense Fock-space states, operators and measurements.
//! * [`reservoir`]: phase grids, twirling, superselection checks and
//!   truncated coherent states.
//! * [`gates`]: the idealized qubit-mode gate set.
//! * [`hamiltonian`]: the Bose-Hubbard Hamiltonian with reservoir coupling,
//!   exact evolution, and scans quantifying the hard-core and large-reservoir
//!   limits.
//! * [`protocol`]: teleportation and dense-coding circuits.
//! * [`report`], [`config`], [`cli`], [`selftest`]: serialization, the batch driver and
//!   the built-in acceptance checks.

pub mod cli;
pub mod config;
pub mod error;
pub mod fock;
pub mod gates;
pub mod hamiltonian;
pub mod protocol;
pub mod report;
pub mod reservoir;
pub mod selftest;
pub mod tolerances;

pub use error::{Error, Result};
pub use fock::C64;
