//! Text format for qubit Hamiltonians.
//!
//! One term per line: a real coefficient followed by factors such as
//! `X0 Z2`, or a bare `I` for the identity. `#` starts a comment; blank
//! lines are ignored. Repeated terms are summed.
//!
//! ```text
//! # two-site transverse-field Ising
//! -1.0 Z0 Z1
//! -1.0 X0
//! -1.0 X1
//! ```

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString, PauliSum};

pub fn parse_hamiltonian(text: &str) -> Result<PauliSum> {
    let mut terms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut tokens = body.split_whitespace();
        let coeff_tok = tokens.next().expect("non-empty line");
        let coeff: f64 = coeff_tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("expected a real coefficient, got {coeff_tok:?}"),
        })?;
        if !coeff.is_finite() {
            return Err(Error::Parse {
                line,
                msg: format!("coefficient must be finite, got {coeff_tok}"),
            });
        }
        let factors: Vec<&str> = tokens.collect();
        if factors.is_empty() {
            return Err(Error::Parse {
                line,
                msg: "missing Pauli factors (write I for the identity)".into(),
            });
        }
        let mut pairs: Vec<(usize, Axis)> = Vec::new();
        if factors != ["I"] {
            for tok in factors {
                let (axis, q) = parse_factor(tok).ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("bad factor {tok:?}, expected X<q>, Y<q> or Z<q>"),
                })?;
                if pairs.iter().any(|&(p, _)| p == q) {
                    return Err(Error::Parse {
                        line,
                        msg: format!("qubit {q} appears twice"),
                    });
                }
                pairs.push((q, axis));
            }
        }
        terms.push(PauliString::new(Complex64::new(coeff, 0.0), pairs));
    }
    Ok(PauliSum::from_terms(terms))
}

fn parse_factor(tok: &str) -> Option<(Axis, usize)> {
    let mut chars = tok.chars();
    let axis = match chars.next()? {
        'X' => Axis::X,
        'Y' => Axis::Y,
        'Z' => Axis::Z,
        _ => return None,
    };
    let rest = chars.as_str();
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let q: usize = rest.parse().ok()?;
    (q < 64).then_some((axis, q))
}

/// Writes a Hermitian sum back in the text format. Imaginary parts must be zero.
pub fn format_hamiltonian(h: &PauliSum) -> Result<String> {
    let mut out = String::new();
    for t in h.terms() {
        if t.coeff.im != 0.0 {
            return Err(Error::NonHermitian {
                term: t.label(),
                coeff: t.coeff.to_string(),
            });
        }
        let _ = writeln!(out, "{:e} {}", t.coeff.re, t.label());
    }
    Ok(out)
}

/// `−J Σ Z_i Z_{i+1} − h Σ X_i` on an open chain.
pub fn transverse_field_ising(n: usize, j: f64, h: f64) -> PauliSum {
    let zz = (0..n.saturating_sub(1))
        .map(|i| PauliString::new(Complex64::new(-j, 0.0), [(i, Axis::Z), (i + 1, Axis::Z)]));
    let x = (0..n).map(|i| PauliString::new(Complex64::new(-h, 0.0), [(i, Axis::X)]));
    PauliSum::from_terms(zz.chain(x))
}

/// `n_terms` random non-identity strings on `n` qubits with coefficients
/// uniform in `[-1, 1)`. Repeated strings merge, so the result can be shorter.
pub fn random_hamiltonian<R: Rng + ?Sized>(n: usize, n_terms: usize, rng: &mut R) -> PauliSum {
    if n == 0 {
        return PauliSum::zero();
    }
    let axes = [None, Some(Axis::X), Some(Axis::Y), Some(Axis::Z)];
    let terms = (0..n_terms).map(|_| loop {
        let pairs: Vec<(usize, Axis)> = (0..n)
            .filter_map(|q| axes[rng.random_range(0..4)].map(|a| (q, a)))
            .collect();
        if !pairs.is_empty() {
            break PauliString::new(Complex64::new(rng.random_range(-1.0..1.0), 0.0), pairs);
        }
    });
    PauliSum::from_terms(terms.collect::<Vec<_>>())
}
