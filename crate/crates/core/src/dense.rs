//! Dense-matrix routes built from Kronecker products.
//!
//! These are deliberately independent of the bit-twiddling statevector
//! kernels so they can serve as oracles for them, and they give exact ground
//! energies of small Hamiltonians.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::circuit::{Gate, ParamCircuit};
use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString, PauliSum};

/// Dense routes stop here; `2^12 × 2^12` complex is already 256 MiB.
pub const MAX_DENSE_QUBITS: usize = 12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_matrix(axis: Option<Axis>) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match axis {
        None => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Some(Axis::X) => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Some(Axis::Y) => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Some(Axis::Z) => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// `ops[q]` acts on qubit `q`; qubit `q` is bit `q` of the basis index, so
/// the Kronecker product runs from the highest qubit down.
pub fn kron_chain(ops: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    ops.iter()
        .rev()
        .fold(DMatrix::from_element(1, 1, c(1.0, 0.0)), |acc, m| {
            acc.kronecker(m)
        })
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            requested: n,
            max: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

pub fn pauli_string_matrix(p: &PauliString, n: usize) -> Result<DMatrix<Complex64>> {
    check_size(n)?;
    if p.max_qubit().is_some_and(|q| q >= n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.max_qubit().unwrap() + 1,
        });
    }
    let ops: Vec<_> = (0..n)
        .map(|q| pauli_matrix(p.factors().get(&q).copied()))
        .collect();
    Ok(kron_chain(&ops) * p.coeff)
}

pub fn pauli_sum_matrix(h: &PauliSum, n: usize) -> Result<DMatrix<Complex64>> {
    check_size(n)?;
    let dim = 1 << n;
    h.terms()
        .iter()
        .try_fold(DMatrix::zeros(dim, dim), |acc, t| {
            Ok(acc + pauli_string_matrix(t, n)?)
        })
}

/// Lowest eigenvalue of a Hermitian Pauli sum on `n` qubits.
pub fn ground_energy(h: &PauliSum, n: usize) -> Result<f64> {
    let m = pauli_sum_matrix(h, n)?;
    let eig = SymmetricEigen::new(m);
    Ok(eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min))
}

/// `exp(-i θ P)` for a unit-coefficient string, as `cos θ I − i sin θ P`.
pub fn exp_pauli_matrix(p: &PauliString, theta: f64, n: usize) -> Result<DMatrix<Complex64>> {
    let pm = pauli_string_matrix(&p.unit(), n)?;
    let id = DMatrix::<Complex64>::identity(1 << n, 1 << n);
    Ok(id * c(theta.cos(), 0.0) - pm * c(0.0, theta.sin()))
}

fn single_gate(gate: &Gate, theta: &[f64]) -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rot = |axis: Axis, angle: f64| {
        let id = pauli_matrix(None);
        id * c((angle / 2.0).cos(), 0.0) - pauli_matrix(Some(axis)) * c(0.0, (angle / 2.0).sin())
    };
    match *gate {
        Gate::H(_) => DMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]),
        Gate::X(_) => pauli_matrix(Some(Axis::X)),
        Gate::RxHalfPi { inverse, .. } => {
            let half = std::f64::consts::FRAC_PI_2;
            rot(Axis::X, if inverse { half } else { -half })
        }
        Gate::Rot {
            axis,
            param,
            multiplier,
            ..
        } => rot(axis, multiplier * theta[param]),
        Gate::Cnot { .. } => unreachable!(),
    }
}

/// Full-register matrix of one gate.
pub fn gate_matrix(gate: &Gate, theta: &[f64], n: usize) -> DMatrix<Complex64> {
    match *gate {
        Gate::Cnot { control, target } => {
            // |0⟩⟨0|_c ⊗ I + |1⟩⟨1|_c ⊗ X_t
            let p0 = DMatrix::from_row_slice(
                2,
                2,
                &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            );
            let p1 = DMatrix::from_row_slice(
                2,
                2,
                &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            );
            let mut a: Vec<_> = (0..n).map(|_| pauli_matrix(None)).collect();
            let mut b = a.clone();
            a[control] = p0;
            b[control] = p1;
            b[target] = pauli_matrix(Some(Axis::X));
            kron_chain(&a) + kron_chain(&b)
        }
        _ => {
            let (q, _) = gate.qubits();
            let mut ops: Vec<_> = (0..n).map(|_| pauli_matrix(None)).collect();
            ops[q] = single_gate(gate, theta);
            kron_chain(&ops)
        }
    }
}

/// Product of all gate matrices, last gate leftmost.
pub fn circuit_unitary(c: &ParamCircuit, theta: &[f64]) -> Result<DMatrix<Complex64>> {
    let n = c.n_qubits();
    check_size(n)?;
    if theta.len() != c.n_params() {
        return Err(Error::DimensionMismatch {
            expected: c.n_params(),
            got: theta.len(),
        });
    }
    let dim = 1 << n;
    Ok(c.gates()
        .iter()
        .fold(DMatrix::identity(dim, dim), |acc, g| {
            gate_matrix(g, theta, n) * acc
        }))
}

/// `⟨ψ|M|ψ⟩`.
pub fn expectation_dense(m: &DMatrix<Complex64>, psi: &DVector<Complex64>) -> Complex64 {
    (psi.adjoint() * m * psi)[(0, 0)]
}
