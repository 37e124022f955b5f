//! Cost objective and gradient estimators.

use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::observe::{expectation, sample_expectation};
use super::{apply_circuit_shifted, StateVector};
use crate::circuit::ParamCircuit;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// `C(θ) = ⟨0|U(θ)† H U(θ)|0⟩`, exact or shot-sampled, counting evaluations.
#[derive(Debug, Clone)]
pub struct Objective<'a> {
    circuit: &'a ParamCircuit,
    hamiltonian: &'a PauliSum,
    shots: u64,
    rng: ChaCha8Rng,
    evaluations: u64,
}

impl<'a> Objective<'a> {
    pub fn exact(circuit: &'a ParamCircuit, hamiltonian: &'a PauliSum) -> Result<Self> {
        Self::sampled(circuit, hamiltonian, 0, 0)
    }

    /// `shots == 0` means exact expectations.
    pub fn sampled(
        circuit: &'a ParamCircuit,
        hamiltonian: &'a PauliSum,
        shots: u64,
        seed: u64,
    ) -> Result<Self> {
        if hamiltonian.n_qubits() > circuit.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: circuit.n_qubits(),
                got: hamiltonian.n_qubits(),
            });
        }
        if !hamiltonian.is_hermitian(1e-12) {
            return Err(Error::NonHermitian {
                term: "hamiltonian".into(),
                coeff: "complex".into(),
            });
        }
        Ok(Self {
            circuit,
            hamiltonian,
            shots,
            rng: ChaCha8Rng::seed_from_u64(seed),
            evaluations: 0,
        })
    }

    pub fn circuit(&self) -> &ParamCircuit {
        self.circuit
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn evaluate(&mut self, theta: &[f64]) -> Result<f64> {
        self.evaluate_shifted(theta, None)
    }

    /// Cost with gate `shift.0`'s rotation angle moved by `shift.1`.
    pub fn evaluate_shifted(&mut self, theta: &[f64], shift: Option<(usize, f64)>) -> Result<f64> {
        let s = StateVector::zero(self.circuit.n_qubits())?;
        let s = apply_circuit_shifted(self.circuit, theta, s, shift)?;
        self.evaluations += 1;
        if self.shots == 0 {
            expectation(&s, self.hamiltonian)
        } else {
            sample_expectation(&s, self.hamiltonian, self.shots, &mut self.rng)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum GradientMethod {
    #[default]
    ParameterShift,
    /// Central difference with step `delta`.
    FiniteDifference { delta: f64 },
}

impl GradientMethod {
    pub fn name(self) -> &'static str {
        match self {
            GradientMethod::ParameterShift => "parameter_shift",
            GradientMethod::FiniteDifference { .. } => "finite_difference",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientRecord {
    pub values: Vec<f64>,
    pub method: GradientMethod,
    pub evaluations_used: u64,
}

impl GradientRecord {
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|g| g * g).sum::<f64>().sqrt()
    }
}

/// Exact `∂C/∂θ_j` by the shift rule, applied to every gate `j` feeds.
///
/// A rotation `exp(-i x σ/2)` with `x = m·θ_j` contributes
/// `(m/2)·[C(x + π/2) − C(x − π/2)]`. For `exp(-iθP)` (`m = 2`) this is
/// `C(θ+π/4) − C(θ−π/4)`; for half-angle gates (`m = 1`) it is
/// `½[C(θ+π/2) − C(θ−π/2)]`.
pub fn grad_parameter_shift(obj: &mut Objective<'_>, theta: &[f64], j: usize) -> Result<f64> {
    if j >= obj.circuit.n_params() {
        return Err(Error::InvalidArgument(format!(
            "parameter {j} out of range for L = {}",
            obj.circuit.n_params()
        )));
    }
    let mut total = 0.0;
    for g in obj.circuit.param_gates(j) {
        let (_, m) = obj.circuit.gates()[g].param().expect("parameterized gate");
        let plus = obj.evaluate_shifted(theta, Some((g, FRAC_PI_2)))?;
        let minus = obj.evaluate_shifted(theta, Some((g, -FRAC_PI_2)))?;
        total += 0.5 * m * (plus - minus);
    }
    Ok(total)
}

/// `[C(θ + δ e_j) − C(θ − δ e_j)] / 2δ`.
pub fn grad_finite_difference(
    obj: &mut Objective<'_>,
    theta: &[f64],
    j: usize,
    delta: f64,
) -> Result<f64> {
    if delta <= 0.0 || delta.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step must be > 0, got {delta}"
        )));
    }
    if j >= theta.len() {
        return Err(Error::InvalidArgument(format!(
            "parameter {j} out of range"
        )));
    }
    let mut t = theta.to_vec();
    t[j] = theta[j] + delta;
    let plus = obj.evaluate(&t)?;
    t[j] = theta[j] - delta;
    let minus = obj.evaluate(&t)?;
    Ok((plus - minus) / (2.0 * delta))
}

/// Full gradient; `evaluations_used` counts the cost evaluations spent.
pub fn gradient(
    obj: &mut Objective<'_>,
    theta: &[f64],
    method: GradientMethod,
) -> Result<GradientRecord> {
    let before = obj.evaluations();
    let values = (0..obj.circuit.n_params())
        .map(|j| match method {
            GradientMethod::ParameterShift => grad_parameter_shift(obj, theta, j),
            GradientMethod::FiniteDifference { delta } => {
                grad_finite_difference(obj, theta, j, delta)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GradientRecord {
        values,
        method,
        evaluations_used: obj.evaluations() - before,
    })
}
