//! Simulation and verification of one-dimensional lattices of two-state,
//! two-symbol finite state machines updated by reflexive composition.
//!
//! * [`machine`]: the 256 machines, their encoding and symmetries.
//! * [`engine`]: lattice steps, runs, and boundary-input policies.
//! * [`eca`]: elementary cellular automata and brute-force preimages.
//! * [`analysis`]: machine-vs-automaton verifications.
//! * [`render`]: portable bitmap output.
//! * [`export`]: trajectory JSON and plain-text rows.

pub mod analysis;
pub mod eca;
pub mod engine;
pub mod error;
pub mod export;
pub mod machine;
pub mod render;
pub mod rng;

pub use eca::{Boundary, EcaRow, EcaRule};
pub use engine::{BoundaryPolicy, Direction, LatticeState, StepRecord, Trajectory};
pub use error::{Error, Result};
pub use machine::{Machine, MachineClass, MachineId, State, Symbol};
