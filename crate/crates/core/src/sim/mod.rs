//! Dense state-vector and unitary engine.
//!
//! Everything here is a pure function of its inputs. Qubit 0 is the leftmost
//! ket label and the most significant bit of every amplitude or matrix index.

mod matrix;
mod state;

pub use matrix::{Matrix, UnitaryMatrix, C64, I, ONE, ZERO};
pub use state::{
    embed, equal_up_to_global_phase, expectation_z, reduced_density_matrix, reduced_purity, reset_qubits,
    reset_qubits_traced, PhaseEquality, ResetTarget, StateVector, NORM_TOL, RESET_PURITY_TOL,
};

pub(crate) use state::{apply_local, check_qubits};
