//! Exact and shot-sampled expectation values.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::StateVector;
use crate::error::{Error, Result};
use crate::pauli::{fmt_complex, PauliString, PauliSum};

const HERMITIAN_TOL: f64 = 1e-12;

/// `⟨ψ|P|ψ⟩` for the unit string of `p` (its coefficient is ignored).
pub fn pauli_expectation(s: &StateVector, p: &PauliString) -> Result<f64> {
    if p.max_qubit().is_some_and(|q| q >= s.n_qubits()) {
        return Err(Error::DimensionMismatch {
            expected: s.n_qubits(),
            got: p.max_qubit().unwrap() + 1,
        });
    }
    let (xm, zm, ny) = p.masks();
    let amps = s.amplitudes();
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, &a) in amps.iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let sign = if (x as u64 & zm).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        acc += amps[x ^ xm as usize].conj() * a * sign;
    }
    // Y = iXZ contributes one factor of i each
    let phase = Complex64::new(0.0, 1.0).powu(ny);
    let v = acc * phase;
    debug_assert!(v.im.abs() < 1e-10 * v.norm().max(1.0), "{v}");
    Ok(v.re)
}

fn check_hermitian(h: &PauliSum) -> Result<()> {
    match h.terms().iter().find(|t| t.coeff.im.abs() > HERMITIAN_TOL) {
        Some(t) => Err(Error::NonHermitian {
            term: t.label(),
            coeff: fmt_complex(t.coeff),
        }),
        None => Ok(()),
    }
}

/// `⟨ψ|H|ψ⟩` for Hermitian `H`.
pub fn expectation(s: &StateVector, h: &PauliSum) -> Result<f64> {
    check_hermitian(h)?;
    h.terms().iter().try_fold(
        0.0,
        |acc, t| Ok(acc + t.coeff.re * pauli_expectation(s, t)?),
    )
}

/// Shot-noise estimate of `⟨H⟩`: each non-identity term `c·P` with exact value
/// `v` is measured independently with `shots` shots, `k ~ Binomial(shots, (1+v)/2)`,
/// contributing `c·(2k/shots − 1)`.
pub fn sample_expectation<R: Rng + ?Sized>(
    s: &StateVector,
    h: &PauliSum,
    shots: u64,
    rng: &mut R,
) -> Result<f64> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be >= 1".into()));
    }
    check_hermitian(h)?;
    let mut total = 0.0;
    for t in h.terms() {
        if t.is_identity() {
            total += t.coeff.re;
            continue;
        }
        let v = pauli_expectation(s, t)?;
        let p = ((1.0 + v) / 2.0).clamp(0.0, 1.0);
        let k = Binomial::new(shots, p)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .sample(rng);
        total += t.coeff.re * (2.0 * k as f64 / shots as f64 - 1.0);
    }
    Ok(total)
}
