//! Exact simulation toolkit for the four-qubit diamond gate.
//!
//! The crate builds the diamond unitary family, checks its circuit identities
//! and decompositions, runs diamond-native quantum Fourier transforms, and
//! trains diamond-entangled variational circuits.

pub mod circuit;
pub mod decomp;
pub mod diamond;
pub mod error;
pub mod gates;
pub mod qft;
pub mod qml;
pub mod sim;
pub mod verify;

pub use circuit::{apply_circuit, apply_circuit_traced, circuit_unitary, Circuit, GateOp};
pub use diamond::{ControlSector, DiamondParams};
pub use error::{Error, Result};
pub use gates::Gate;
pub use sim::{Matrix, StateVector, UnitaryMatrix, C64};
