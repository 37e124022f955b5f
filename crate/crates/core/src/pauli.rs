//! Pauli-string algebra and the Jordan–Wigner map of fermionic operators.
//!
//! A [`PauliString`] is a complex coefficient times a tensor product of
//! single-qubit Pauli factors. Identity factors are never stored. A
//! [`PauliSum`] is a canonical linear combination: one entry per distinct
//! factor map, sorted, with near-zero coefficients dropped.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients with modulus below this are dropped on canonicalization.
pub const COEFF_TOL: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn name(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    /// Product of two single-qubit Paulis as `(phase, axis)`; `None` is identity.
    pub fn times(self, other: Axis) -> (Complex64, Option<Axis>) {
        use Axis::*;
        match (self, other) {
            (a, b) if a == b => (ONE, None),
            (X, Y) => (I, Some(Z)),
            (Y, X) => (-I, Some(Z)),
            (Y, Z) => (I, Some(X)),
            (Z, Y) => (-I, Some(X)),
            (Z, X) => (I, Some(Y)),
            (X, Z) => (-I, Some(Y)),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Sparse qubit-index -> axis map. Absence means identity.
pub type Factors = BTreeMap<usize, Axis>;

#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub coeff: Complex64,
    factors: Factors,
}

impl PauliString {
    pub fn identity(coeff: Complex64) -> Self {
        Self {
            coeff,
            factors: Factors::new(),
        }
    }

    /// Builds a string from `(qubit, axis)` pairs; a repeated qubit multiplies
    /// its factors in the order given.
    pub fn new(coeff: Complex64, factors: impl IntoIterator<Item = (usize, Axis)>) -> Self {
        factors
            .into_iter()
            .fold(Self::identity(coeff), |acc, (q, a)| {
                acc * Self::single(q, a)
            })
    }

    pub fn single(qubit: usize, axis: Axis) -> Self {
        Self {
            coeff: ONE,
            factors: Factors::from([(qubit, axis)]),
        }
    }

    pub fn factors(&self) -> &Factors {
        &self.factors
    }

    pub fn locality(&self) -> usize {
        self.factors.len()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Highest qubit index acted on, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.keys().next_back().copied()
    }

    pub fn scale(mut self, by: Complex64) -> Self {
        self.coeff *= by;
        self
    }

    pub fn adjoint(&self) -> Self {
        Self {
            coeff: self.coeff.conj(),
            factors: self.factors.clone(),
        }
    }

    /// Same factors, coefficient 1.
    pub fn unit(&self) -> Self {
        Self {
            coeff: ONE,
            factors: self.factors.clone(),
        }
    }

    /// Masks `(x_mask, z_mask, n_y)` of the unit string: `X` sets the x bit,
    /// `Z` the z bit, `Y` both.
    pub fn masks(&self) -> (u64, u64, u32) {
        let mut x = 0u64;
        let mut z = 0u64;
        let mut ny = 0;
        for (&q, &a) in &self.factors {
            match a {
                Axis::X => x |= 1 << q,
                Axis::Z => z |= 1 << q,
                Axis::Y => {
                    x |= 1 << q;
                    z |= 1 << q;
                    ny += 1;
                }
            }
        }
        (x, z, ny)
    }

    /// Factors as text, e.g. `X0 Z1 Y2`; `I` for the identity.
    pub fn label(&self) -> String {
        if self.factors.is_empty() {
            return "I".to_string();
        }
        self.factors
            .iter()
            .map(|(q, a)| format!("{a}{q}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl Mul for &PauliString {
    type Output = PauliString;

    fn mul(self, rhs: &PauliString) -> PauliString {
        let mut coeff = self.coeff * rhs.coeff;
        let mut factors = self.factors.clone();
        for (&q, &b) in &rhs.factors {
            match factors.get(&q) {
                None => {
                    factors.insert(q, b);
                }
                Some(&a) => {
                    let (phase, prod) = a.times(b);
                    coeff *= phase;
                    match prod {
                        Some(axis) => {
                            factors.insert(q, axis);
                        }
                        None => {
                            factors.remove(&q);
                        }
                    }
                }
            }
        }
        PauliString { coeff, factors }
    }
}

impl Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        &self * &rhs
    }
}

/// Product `a · b` including the accumulated phase.
pub fn pauli_mul(a: &PauliString, b: &PauliString) -> PauliString {
    a * b
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", fmt_complex(self.coeff), self.label())
    }
}

pub(crate) fn fmt_complex(c: Complex64) -> String {
    match (c.re == 0.0, c.im == 0.0) {
        (_, true) => format!("{}", c.re),
        (true, false) => format!("{}i", c.im),
        _ => format!("{}{:+}i", c.re, c.im),
    }
}

/// Canonical sum of Pauli strings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PauliSum {
    terms: Vec<PauliString>,
}

impl PauliSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = PauliString>) -> Self {
        let mut acc: BTreeMap<Factors, Complex64> = BTreeMap::new();
        for t in terms {
            *acc.entry(t.factors).or_default() += t.coeff;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| c.norm() >= COEFF_TOL)
            .map(|(factors, coeff)| PauliString { coeff, factors })
            .collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, by: Complex64) -> Self {
        Self::from_terms(self.terms.iter().cloned().map(|t| t.scale(by)))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.terms.iter().map(PauliString::adjoint))
    }

    /// Number of qubits needed to hold every term.
    pub fn n_qubits(&self) -> usize {
        self.terms
            .iter()
            .filter_map(PauliString::max_qubit)
            .max()
            .map_or(0, |q| q + 1)
    }

    /// True when every coefficient is real within `tol` (each unit string is
    /// Hermitian, so this is Hermiticity of the canonical sum).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.coeff.im.abs() <= tol)
    }

    /// Checks the sum against `other` term by term within `tol`.
    pub fn approx_eq(&self, other: &PauliSum, tol: f64) -> bool {
        let diff = self + &other.scale(-ONE);
        diff.terms.iter().all(|t| t.coeff.norm() <= tol)
    }
}

impl From<PauliString> for PauliSum {
    fn from(s: PauliString) -> Self {
        Self::from_terms([s])
    }
}

impl Add for &PauliSum {
    type Output = PauliSum;

    fn add(self, rhs: &PauliSum) -> PauliSum {
        PauliSum::from_terms(self.terms.iter().chain(rhs.terms.iter()).cloned())
    }
}

impl Neg for &PauliSum {
    type Output = PauliSum;

    fn neg(self) -> PauliSum {
        self.scale(-ONE)
    }
}

impl Mul for &PauliSum {
    type Output = PauliSum;

    fn mul(self, rhs: &PauliSum) -> PauliSum {
        PauliSum::from_terms(
            self.terms
                .iter()
                .flat_map(|a| rhs.terms.iter().map(move |b| a * b)),
        )
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// 1-based spin-orbital index. Orbital `k` maps to qubit `k - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Orbital(usize);

impl Orbital {
    pub fn new(index: usize) -> Result<Self> {
        if index == 0 {
            return Err(Error::ZeroOrbital);
        }
        Ok(Self(index))
    }

    pub fn index(self) -> usize {
        self.0
    }

    pub fn qubit(self) -> usize {
        self.0 - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create,
    Annihilate,
}

/// Jordan–Wigner image of `a_j†` or `a_j`:
/// `½ [∏_{k<j} Z_k] (X_j ∓ i Y_j)` on qubits `0..j`.
pub fn jw_ladder(j: Orbital, kind: Ladder) -> PauliSum {
    let q = j.qubit();
    let chain: Vec<(usize, Axis)> = (0..q).map(|k| (k, Axis::Z)).collect();
    let y_sign = match kind {
        Ladder::Create => -1.0,
        Ladder::Annihilate => 1.0,
    };
    let x_term = PauliString::new(Complex64::new(0.5, 0.0), chain.iter().copied())
        * PauliString::single(q, Axis::X);
    let y_term = PauliString::new(Complex64::new(0.0, 0.5 * y_sign), chain.iter().copied())
        * PauliString::single(q, Axis::Y);
    PauliSum::from_terms([x_term, y_term])
}

fn orbitals(indices: &[usize]) -> Result<Vec<Orbital>> {
    indices.iter().map(|&k| Orbital::new(k)).collect()
}

/// Product of ladder operators, left to right.
pub fn ladder_product(ops: &[(Orbital, Ladder)]) -> PauliSum {
    ops.iter().fold(
        PauliSum::from(PauliString::identity(ONE)),
        |acc, &(j, kind)| &acc * &jw_ladder(j, kind),
    )
}

/// `a_i† a_α − a_α† a_i` for `i > α ≥ 1`, composed symbolically.
pub fn single_excitation_strings(i: usize, alpha: usize) -> Result<PauliSum> {
    if alpha == 0 || i <= alpha {
        return Err(Error::ExcitationOrder {
            expected: "i > alpha >= 1",
            got: vec![i, alpha],
        });
    }
    let [i, a] = orbitals(&[i, alpha])?[..] else {
        unreachable!()
    };
    let fwd = ladder_product(&[(i, Ladder::Create), (a, Ladder::Annihilate)]);
    let back = ladder_product(&[(a, Ladder::Create), (i, Ladder::Annihilate)]);
    Ok(&fwd + &(-&back))
}

/// `a_i† a_j† a_α a_β − a_β† a_α† a_j a_i` for `i > j > α > β ≥ 1`.
pub fn double_excitation_strings(
    i: usize,
    j: usize,
    alpha: usize,
    beta: usize,
) -> Result<PauliSum> {
    if beta == 0 || !(i > j && j > alpha && alpha > beta) {
        return Err(Error::ExcitationOrder {
            expected: "i > j > alpha > beta >= 1",
            got: vec![i, j, alpha, beta],
        });
    }
    let [i, j, a, b] = orbitals(&[i, j, alpha, beta])?[..] else {
        unreachable!()
    };
    use Ladder::*;
    let fwd = ladder_product(&[(i, Create), (j, Create), (a, Annihilate), (b, Annihilate)]);
    let back = ladder_product(&[(b, Create), (a, Create), (j, Annihilate), (i, Annihilate)]);
    Ok(&fwd + &(-&back))
}

/// Support size of every double-excitation string under Jordan–Wigner:
/// the `Z` chains of `a_i†` and `a_j†` cancel strictly between `α` and `j`.
pub fn double_excitation_locality(i: usize, j: usize, alpha: usize, beta: usize) -> usize {
    (i - j) + (alpha - beta) + 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ps(coeff: Complex64, f: &[(usize, Axis)]) -> PauliString {
        PauliString::new(coeff, f.iter().copied())
    }

    #[test]
    fn single_qubit_products() {
        let x = PauliString::single(0, Axis::X);
        let y = PauliString::single(0, Axis::Y);
        assert_eq!(pauli_mul(&x, &y), ps(c(0.0, 1.0), &[(0, Axis::Z)]));
        let xx = pauli_mul(&x, &x);
        assert!(xx.is_identity());
        assert_eq!(xx.coeff, ONE);
        let xz = ps(ONE, &[(0, Axis::X), (1, Axis::Z)]);
        assert_eq!(
            pauli_mul(&xz, &y),
            ps(c(0.0, 1.0), &[(0, Axis::Z), (1, Axis::Z)])
        );
    }

    #[test]
    fn ladder_examples() {
        let one = Orbital::new(1).unwrap();
        let expected = PauliSum::from_terms([
            ps(c(0.5, 0.0), &[(0, Axis::X)]),
            ps(c(0.0, -0.5), &[(0, Axis::Y)]),
        ]);
        assert_eq!(jw_ladder(one, Ladder::Create), expected);

        let three = Orbital::new(3).unwrap();
        let expected = PauliSum::from_terms([
            ps(c(0.5, 0.0), &[(0, Axis::Z), (1, Axis::Z), (2, Axis::X)]),
            ps(c(0.0, -0.5), &[(0, Axis::Z), (1, Axis::Z), (2, Axis::Y)]),
        ]);
        assert_eq!(jw_ladder(three, Ladder::Create), expected);

        let two = Orbital::new(2).unwrap();
        let expected = PauliSum::from_terms([
            ps(c(0.5, 0.0), &[(0, Axis::Z), (1, Axis::X)]),
            ps(c(0.0, 0.5), &[(0, Axis::Z), (1, Axis::Y)]),
        ]);
        assert_eq!(jw_ladder(two, Ladder::Annihilate), expected);
    }

    #[test]
    fn zero_orbital_rejected() {
        assert_eq!(Orbital::new(0), Err(Error::ZeroOrbital));
    }

    #[test]
    fn creation_is_adjoint_of_annihilation() {
        for j in 1..=6 {
            let j = Orbital::new(j).unwrap();
            assert_eq!(
                jw_ladder(j, Ladder::Create),
                jw_ladder(j, Ladder::Annihilate).adjoint()
            );
        }
    }

    #[test]
    fn canonical_anticommutation() {
        let id = PauliSum::from(PauliString::identity(ONE));
        for p in 1..=6 {
            for q in 1..=6 {
                let (p, q) = (Orbital::new(p).unwrap(), Orbital::new(q).unwrap());
                let ap = jw_ladder(p, Ladder::Annihilate);
                let aq_dag = jw_ladder(q, Ladder::Create);
                let anti = &(&ap * &aq_dag) + &(&aq_dag * &ap);
                let expected = if p == q { id.clone() } else { PauliSum::zero() };
                assert!(anti.approx_eq(&expected, 1e-14), "p={p:?} q={q:?}: {anti}");

                let aq = jw_ladder(q, Ladder::Annihilate);
                let anti = &(&ap * &aq) + &(&aq * &ap);
                assert!(anti.is_empty());
            }
        }
    }

    #[test]
    fn single_excitation_two_one() {
        let s = single_excitation_strings(2, 1).unwrap();
        let expected = PauliSum::from_terms([
            ps(c(0.0, 0.5), &[(0, Axis::Y), (1, Axis::X)]),
            ps(c(0.0, -0.5), &[(0, Axis::X), (1, Axis::Y)]),
        ]);
        assert_eq!(s, expected);
    }

    #[test]
    fn single_excitation_three_one() {
        let s = single_excitation_strings(3, 1).unwrap();
        assert_eq!(s.len(), 2);
        for t in s.terms() {
            assert_eq!(t.locality(), 3);
            assert_eq!(t.factors()[&1], Axis::Z);
            assert!(t.factors()[&0] != Axis::Z && t.factors()[&2] != Axis::Z);
            assert!((t.coeff.norm() - 0.5).abs() < 1e-15 && t.coeff.re == 0.0);
        }
    }

    #[test]
    fn excitation_structure_up_to_ten() {
        for i in 2..=10 {
            for a in 1..i {
                let s = single_excitation_strings(i, a).unwrap();
                assert_eq!(s.len(), 2);
                assert!(s.terms().iter().all(|t| t.locality() == i - a + 1));
                assert_eq!(s.adjoint(), -&s);
            }
        }
        for i in 4..=10 {
            for j in 3..i {
                for a in 2..j {
                    for b in 1..a {
                        let d = double_excitation_strings(i, j, a, b).unwrap();
                        assert_eq!(d.len(), 8);
                        let k = double_excitation_locality(i, j, a, b);
                        assert!(d.terms().iter().all(|t| t.locality() == k));
                        assert!(d
                            .terms()
                            .iter()
                            .all(|t| (t.coeff.norm() - 0.125).abs() < 1e-15));
                        assert_eq!(d.adjoint(), -&d);
                    }
                }
            }
        }
    }

    #[test]
    fn double_excitation_localities() {
        let d = double_excitation_strings(4, 3, 2, 1).unwrap();
        assert!(d.terms().iter().all(|t| t.locality() == 4));
        // qubits 2 (between alpha=2 and j=4 in orbitals) drop out
        let d = double_excitation_strings(5, 4, 2, 1).unwrap();
        assert!(d.terms().iter().all(|t| t.locality() == 4));
        assert!(d.terms().iter().all(|t| !t.factors().contains_key(&2)));
    }

    #[test]
    fn ordering_errors() {
        assert!(single_excitation_strings(1, 1).is_err());
        assert!(single_excitation_strings(1, 2).is_err());
        assert!(single_excitation_strings(2, 0).is_err());
        assert!(double_excitation_strings(4, 2, 3, 1).is_err());
        assert!(double_excitation_strings(4, 3, 2, 2).is_err());
        assert!(double_excitation_strings(4, 3, 2, 0).is_err());
    }

    #[test]
    fn canonicalization_merges_and_drops() {
        let a = ps(c(0.5, 0.0), &[(0, Axis::X)]);
        let b = ps(c(-0.5, 0.0), &[(0, Axis::X)]);
        let z = ps(c(1e-13, 0.0), &[(1, Axis::Z)]);
        assert!(PauliSum::from_terms([a.clone(), b, z]).is_empty());
        let s = PauliSum::from_terms([a.clone(), a]);
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms()[0].coeff, ONE);
    }
}
