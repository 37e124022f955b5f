//! Desk-scale statevector simulation.
//!
//! Amplitude `x` of a [`StateVector`] is the basis state whose bit `q` is the
//! value of qubit `q`. Registers are capped at [`MAX_QUBITS`].

mod gradient;
mod observe;
mod probe;
mod train;

pub use gradient::{
    grad_finite_difference, grad_parameter_shift, gradient, GradientMethod, GradientRecord,
    Objective,
};
pub use observe::{expectation, pauli_expectation, sample_expectation};
pub use probe::{
    gradient_rank_probe, redundant_instances, trig_monomial_check, MonomialReport, ParamFit,
    ProbeInstance, RankProbe,
};
pub use train::{train, TraceRow, TrainConfig, TrainTrace};

use num_complex::Complex64;

use crate::circuit::{Gate, ParamCircuit};
use crate::error::{Error, Result};
use crate::pauli::Axis;

pub const MAX_QUBITS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        if index >= amps.len() {
            return Err(Error::DimensionMismatch {
                expected: amps.len(),
                got: index,
            });
        }
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps amplitudes as given (no normalization); length must be `2^n`.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count must be a power of two, got {len}"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1 << q;
        for i0 in 0..self.amps.len() {
            if i0 & bit != 0 {
                continue;
            }
            let i1 = i0 | bit;
            let (a0, a1) = (self.amps[i0], self.amps[i1]);
            self.amps[i0] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[i1] = m[1][0] * a0 + m[1][1] * a1;
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (1 << control, 1 << target);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    /// Applies `gate` with its rotation angle shifted by `angle_offset`.
    pub fn apply_gate(&mut self, gate: &Gate, theta: &[f64], angle_offset: f64) {
        match *gate {
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
            _ => {
                let (q, _) = gate.qubits();
                self.apply_1q(q, single_qubit_matrix(gate, theta, angle_offset));
            }
        }
    }

    /// Applies the adjoint of `gate`.
    pub fn apply_gate_adjoint(&mut self, gate: &Gate, theta: &[f64]) {
        match *gate {
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
            _ => {
                let (q, _) = gate.qubits();
                let m = single_qubit_matrix(gate, theta, 0.0);
                let adj = [
                    [m[0][0].conj(), m[1][0].conj()],
                    [m[0][1].conj(), m[1][1].conj()],
                ];
                self.apply_1q(q, adj);
            }
        }
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: n,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

fn rotation(axis: Axis, angle: f64) -> [[Complex64; 2]; 2] {
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    match axis {
        Axis::X => [[re(c), im(-s)], [im(-s), re(c)]],
        Axis::Y => [[re(c), re(-s)], [re(s), re(c)]],
        Axis::Z => [
            [Complex64::new(c, -s), re(0.0)],
            [re(0.0), Complex64::new(c, s)],
        ],
    }
}

fn single_qubit_matrix(gate: &Gate, theta: &[f64], angle_offset: f64) -> [[Complex64; 2]; 2] {
    let re = |x: f64| Complex64::new(x, 0.0);
    match *gate {
        Gate::H(_) => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            [[re(s), re(s)], [re(s), re(-s)]]
        }
        Gate::X(_) => [[re(0.0), re(1.0)], [re(1.0), re(0.0)]],
        Gate::RxHalfPi { inverse, .. } => {
            let half = std::f64::consts::FRAC_PI_2;
            rotation(Axis::X, if inverse { half } else { -half })
        }
        Gate::Rot {
            axis,
            param,
            multiplier,
            ..
        } => rotation(axis, multiplier * theta[param] + angle_offset),
        Gate::Cnot { .. } => unreachable!("two-qubit gate"),
    }
}

fn check_theta(c: &ParamCircuit, theta: &[f64]) -> Result<()> {
    if theta.len() != c.n_params() {
        return Err(Error::DimensionMismatch {
            expected: c.n_params(),
            got: theta.len(),
        });
    }
    Ok(())
}

fn check_state(c: &ParamCircuit, s: &StateVector) -> Result<()> {
    if s.n_qubits != c.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: c.n_qubits(),
            got: s.n_qubits,
        });
    }
    Ok(())
}

/// Runs every gate of `c` on `s`.
pub fn apply_circuit(c: &ParamCircuit, theta: &[f64], mut s: StateVector) -> Result<StateVector> {
    check_theta(c, theta)?;
    check_state(c, &s)?;
    for g in c.gates() {
        s.apply_gate(g, theta, 0.0);
    }
    Ok(s)
}

/// Runs `c` with gate `shift.0`'s rotation angle moved by `shift.1`.
pub fn apply_circuit_shifted(
    c: &ParamCircuit,
    theta: &[f64],
    mut s: StateVector,
    shift: Option<(usize, f64)>,
) -> Result<StateVector> {
    check_theta(c, theta)?;
    check_state(c, &s)?;
    for (i, g) in c.gates().iter().enumerate() {
        let offset = match shift {
            Some((k, d)) if k == i => d,
            _ => 0.0,
        };
        s.apply_gate(g, theta, offset);
    }
    Ok(s)
}

/// Runs the inverse of `c`: gates reversed, each adjointed.
pub fn apply_circuit_inverse(
    c: &ParamCircuit,
    theta: &[f64],
    mut s: StateVector,
) -> Result<StateVector> {
    check_theta(c, theta)?;
    check_state(c, &s)?;
    for g in c.gates().iter().rev() {
        s.apply_gate_adjoint(g, theta);
    }
    Ok(s)
}

/// `U(θ)|0…0⟩`.
pub fn prepare(c: &ParamCircuit, theta: &[f64]) -> Result<StateVector> {
    apply_circuit(c, theta, StateVector::zero(c.n_qubits())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_uccsd, CircuitBuilder, UccsdSpec};

    #[test]
    fn empty_circuit_is_identity() {
        let c = CircuitBuilder::new(2).finish().unwrap();
        let amps: Vec<Complex64> = (0..4).map(|k| Complex64::new(k as f64, 0.5)).collect();
        let s = StateVector::from_amplitudes(amps.clone()).unwrap();
        assert_eq!(apply_circuit(&c, &[], s).unwrap().amplitudes(), &amps[..]);
    }

    #[test]
    fn uccsd_zero_angles_give_hartree_fock() {
        let c = build_uccsd(UccsdSpec::new(4, 2).unwrap()).unwrap();
        let s = prepare(&c, &vec![0.0; c.n_params()]).unwrap();
        // qubits 0 and 1 set
        let hf = StateVector::basis(4, 0b0011).unwrap();
        assert!((s.overlap(&hf) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn size_and_dimension_errors() {
        assert!(matches!(
            StateVector::zero(21),
            Err(Error::TooManyQubits { .. })
        ));
        assert!(StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0); 3]).is_err());
        let c = build_uccsd(UccsdSpec::new(4, 2).unwrap()).unwrap();
        assert!(matches!(
            prepare(&c, &[0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(apply_circuit(&c, &[0.0; 5], StateVector::zero(3).unwrap()).is_err());
    }
}
