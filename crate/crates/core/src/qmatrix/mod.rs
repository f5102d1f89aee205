//! Dense complex matrices and qubit-register density operators.
//!
//! Qubit 0 is the leftmost (most significant) tensor factor: in a register of
//! `n` qubits, basis-index bit `n-1-q` belongs to qubit `q`.

mod io;
mod matrix;
mod state;

pub use io::{
    parse_state_json, pure_to_json, read_state_file, state_to_json, LoadedState, StateFile,
    StateKind,
};
pub use matrix::{kron, ComplexMatrix};
pub use state::{validate, PureState, QubitState, ValidationReport};
