//! Variational quantum algorithm scaling toolkit.
//!
//! Builds UCCSD and hardware-efficient ansatz circuits from Pauli-string
//! algebra, counts their gate-layer depths, simulates them on a dense
//! statevector (expectations, shot noise, gradients, gradient descent), and
//! evaluates wall-clock models for ideal quantum execution versus classical
//! statevector simulation.
//!
//! Index conventions: fermionic orbitals are 1-based, qubits are 0-based,
//! and orbital `k` lives on qubit `k - 1`. Basis state `|x⟩` stores qubit `q`
//! in bit `q` of `x`.

pub mod circuit;
pub mod cost;
pub mod dense;
pub mod depth;
pub mod error;
pub mod hamiltonian;
pub mod pauli;
pub mod sim;

pub use error::{Error, Result};
