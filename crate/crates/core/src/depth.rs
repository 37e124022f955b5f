//! Gate-layer depth counting and the closed-form depth formulas.
//!
//! Layers are typed: a layer holds either single-qubit gates or two-qubit
//! gates, never both, and gates in one layer act on disjoint qubits.

use std::fmt::Write as _;

use crate::circuit::{build_hea, build_uccsd, BlockKind, Gate, HeaSpec, ParamCircuit, UccsdSpec};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthMethod {
    /// Blocks run strictly one after another; each block is layered greedily.
    SequentialBlock,
    /// Greedy earliest-layer placement over all block gates at once.
    AsapGlobal,
}

impl DepthMethod {
    pub fn name(self) -> &'static str {
        match self {
            DepthMethod::SequentialBlock => "sequential_block",
            DepthMethod::AsapGlobal => "asap_global",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthReport {
    pub l_single: u128,
    pub l_double: u128,
    pub method: DepthMethod,
    pub n_qubits: usize,
}

/// Greedy typed-layer scheduler.
#[derive(Debug, Default)]
struct Layering {
    /// `true` for two-qubit layers.
    layers: Vec<bool>,
    /// Index of the last layer touching each qubit, plus one (0 = untouched).
    frontier: Vec<usize>,
}

impl Layering {
    fn new(n_qubits: usize) -> Self {
        Self {
            layers: Vec::new(),
            frontier: vec![0; n_qubits],
        }
    }

    fn place(&mut self, gate: &Gate) {
        let (a, b) = gate.qubits();
        let two = gate.is_two_qubit();
        let earliest = b.map_or(self.frontier[a], |b| self.frontier[a].max(self.frontier[b]));
        let slot = match (earliest..self.layers.len()).find(|&l| self.layers[l] == two) {
            Some(l) => l,
            None => {
                self.layers.push(two);
                self.layers.len() - 1
            }
        };
        self.frontier[a] = slot + 1;
        if let Some(b) = b {
            self.frontier[b] = slot + 1;
        }
    }

    fn counts(&self) -> (u128, u128) {
        let double = self.layers.iter().filter(|&&t| t).count() as u128;
        (self.layers.len() as u128 - double, double)
    }
}

fn layer_gates<'a>(n_qubits: usize, gates: impl IntoIterator<Item = &'a Gate>) -> (u128, u128) {
    let mut l = Layering::new(n_qubits);
    for g in gates {
        l.place(g);
    }
    l.counts()
}

/// `(single, double)` layer depths of one block in isolation.
pub fn block_depths(c: &ParamCircuit, block: usize) -> (u128, u128) {
    let range = c.blocks()[block].gates.clone();
    layer_gates(c.n_qubits(), &c.gates()[range])
}

/// Layer depths of the parameterized portion (state preparation excluded).
pub fn layer_depths(c: &ParamCircuit, method: DepthMethod) -> DepthReport {
    let (l_single, l_double) = match method {
        DepthMethod::SequentialBlock => (0..c.blocks().len())
            .map(|b| block_depths(c, b))
            .fold((0, 0), |(s, d), (bs, bd)| (s + bs, d + bd)),
        DepthMethod::AsapGlobal => {
            let start = c.prep_gates().len();
            layer_gates(c.n_qubits(), &c.gates()[start..])
        }
    };
    DepthReport {
        l_single,
        l_double,
        method,
        n_qubits: c.n_qubits(),
    }
}

/// Sequential two-qubit depth split by block kind.
pub fn double_depth_by_kind(c: &ParamCircuit, kind: BlockKind) -> u128 {
    (0..c.blocks().len())
        .filter(|&b| c.blocks()[b].kind == kind)
        .map(|b| block_depths(c, b).1)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DepthFormulaVariant {
    /// The depth theorem as printed.
    #[default]
    Printed,
    /// Double-excitation two-qubit term doubled, per the per-string `2k−2` rule
    /// with the printed `(i−β+1)` locality.
    Reconstructed,
}

impl DepthFormulaVariant {
    pub fn name(self) -> &'static str {
        match self {
            DepthFormulaVariant::Printed => "printed",
            DepthFormulaVariant::Reconstructed => "reconstructed",
        }
    }
}

/// Single-excitation two-qubit term `2 n_o C¹C¹`.
pub fn uccsd_single_double_term(spec: UccsdSpec) -> u128 {
    2 * spec.n_o as u128 * spec.singles()
}

/// Printed double-excitation two-qubit term `8/3 (2n_o+1) C²C²`, in exact
/// integers. Panics if the division by 3 leaves a remainder.
pub fn uccsd_printed_double_term(spec: UccsdSpec) -> u128 {
    let num = 8 * (2 * spec.n_o as u128 + 1) * spec.doubles();
    assert_eq!(num % 3, 0, "8/3 (2n_o+1) C2C2 not integral for {spec:?}");
    num / 3
}

/// `(l_single, l_double)` from the UCCSD depth theorem.
pub fn uccsd_depth_formula(spec: UccsdSpec, variant: DepthFormulaVariant) -> (u128, u128) {
    let l_single = 6 * spec.singles() + 24 * spec.doubles();
    let doubles = match variant {
        DepthFormulaVariant::Printed => uccsd_printed_double_term(spec),
        DepthFormulaVariant::Reconstructed => 2 * uccsd_printed_double_term(spec),
    };
    (l_single, uccsd_single_double_term(spec) + doubles)
}

/// `(3P, nP)`.
pub fn hea_depth_formula(spec: HeaSpec) -> (u128, u128) {
    (3 * spec.p as u128, (spec.n * spec.p) as u128)
}

/// Exact ratio `num/den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Self {
        let g = gcd(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn is_integer(&self, k: u128) -> bool {
        self.den == 1 && self.num == k
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One UCCSD row of the depth verification table.
#[derive(Debug, Clone, PartialEq)]
pub struct UccsdDepthRow {
    pub n_o: usize,
    pub n_e: usize,
    pub printed_single: u128,
    pub constructed_single: u128,
    pub printed_single_exc_double: u128,
    pub constructed_single_exc_double: u128,
    pub printed_double_exc_double: u128,
    /// `Σ 8·2(i−β)` over tuples, i.e. the printed locality fed through `2k−2`.
    pub nominal_locality_double_exc_double: u128,
    pub constructed_double_exc_double: u128,
    pub asap_single: u128,
    pub asap_double: u128,
}

impl UccsdDepthRow {
    pub fn single_ok(&self) -> bool {
        self.printed_single == self.constructed_single
    }

    pub fn single_exc_ok(&self) -> bool {
        self.printed_single_exc_double == self.constructed_single_exc_double
    }

    /// Constructed / printed for the double-excitation two-qubit term.
    pub fn double_ratio(&self) -> Ratio {
        Ratio::new(
            self.constructed_double_exc_double,
            self.printed_double_exc_double,
        )
    }

    pub fn nominal_locality_ratio(&self) -> Ratio {
        Ratio::new(
            self.nominal_locality_double_exc_double,
            self.printed_double_exc_double,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeaDepthRow {
    pub n: usize,
    pub p: usize,
    pub formula: (u128, u128),
    pub constructed: (u128, u128),
    pub asap: (u128, u128),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerificationReport {
    pub uccsd: Vec<UccsdDepthRow>,
    pub hea: Vec<HeaDepthRow>,
}

pub fn uccsd_depth_row(spec: UccsdSpec) -> Result<UccsdDepthRow> {
    let c = build_uccsd(spec)?;
    let seq = layer_depths(&c, DepthMethod::SequentialBlock);
    let asap = layer_depths(&c, DepthMethod::AsapGlobal);
    let nominal_locality = spec
        .double_tuples()
        .iter()
        .map(|&(i, _, _, b)| 8 * 2 * (i - b) as u128)
        .sum();
    Ok(UccsdDepthRow {
        n_o: spec.n_o,
        n_e: spec.n_e,
        printed_single: uccsd_depth_formula(spec, DepthFormulaVariant::Printed).0,
        constructed_single: seq.l_single,
        printed_single_exc_double: uccsd_single_double_term(spec),
        constructed_single_exc_double: double_depth_by_kind(&c, BlockKind::SingleExcitation),
        printed_double_exc_double: uccsd_printed_double_term(spec),
        nominal_locality_double_exc_double: nominal_locality,
        constructed_double_exc_double: double_depth_by_kind(&c, BlockKind::DoubleExcitation),
        asap_single: asap.l_single,
        asap_double: asap.l_double,
    })
}

pub fn hea_depth_row(spec: HeaSpec) -> Result<HeaDepthRow> {
    let c = build_hea(spec)?;
    let seq = layer_depths(&c, DepthMethod::SequentialBlock);
    let asap = layer_depths(&c, DepthMethod::AsapGlobal);
    Ok(HeaDepthRow {
        n: spec.n,
        p: spec.p,
        formula: hea_depth_formula(spec),
        constructed: (seq.l_single, seq.l_double),
        asap: (asap.l_single, asap.l_double),
    })
}

/// Compares the depth formulas against constructed circuits for every UCCSD
/// spec with `n_o ≤ max_orbitals` and every HEA with `n ≤ max_qubits`,
/// `P ≤ max_blocks`.
pub fn verify_depths(
    max_orbitals: usize,
    max_qubits: usize,
    max_blocks: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    for n_o in 2..=max_orbitals {
        for n_e in 1..n_o {
            report
                .uccsd
                .push(uccsd_depth_row(UccsdSpec::new(n_o, n_e)?)?);
        }
    }
    for n in 2..=max_qubits {
        for p in 1..=max_blocks {
            report.hea.push(hea_depth_row(HeaSpec::new(n, p)?)?);
        }
    }
    Ok(report)
}

impl VerificationReport {
    /// Exact matches the formulas are expected to hit: printed single depth,
    /// the single-excitation two-qubit term and the HEA depths.
    pub fn exact_checks_pass(&self) -> bool {
        self.uccsd
            .iter()
            .all(|r| r.single_ok() && r.single_exc_ok())
            && self.hea.iter().all(|r| r.formula == r.constructed)
    }

    /// Rows whose double-excitation constructed/printed ratio is not 2.
    pub fn ratio_deviations(&self) -> Vec<&UccsdDepthRow> {
        self.uccsd
            .iter()
            .filter(|r| r.printed_double_exc_double > 0 && !r.double_ratio().is_integer(2))
            .collect()
    }

    pub fn uccsd_csv(&self) -> String {
        let mut out = String::from(
            "n_o,n_e,printed_single,constructed_single,printed_single_exc_double,\
constructed_single_exc_double,printed_double_exc_double,nominal_locality_double_exc_double,\
constructed_double_exc_double,constructed_over_printed,asap_single,asap_double\n",
        );
        for r in &self.uccsd {
            let ratio = if r.printed_double_exc_double == 0 {
                "n/a".to_string()
            } else {
                r.double_ratio().to_string()
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.n_o,
                r.n_e,
                r.printed_single,
                r.constructed_single,
                r.printed_single_exc_double,
                r.constructed_single_exc_double,
                r.printed_double_exc_double,
                r.nominal_locality_double_exc_double,
                r.constructed_double_exc_double,
                ratio,
                r.asap_single,
                r.asap_double
            );
        }
        out
    }

    pub fn hea_csv(&self) -> String {
        let mut out = String::from(
            "n,P,formula_single,formula_double,constructed_single,constructed_double,asap_single,asap_double\n",
        );
        for r in &self.hea {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.n,
                r.p,
                r.formula.0,
                r.formula.1,
                r.constructed.0,
                r.constructed.1,
                r.asap.0,
                r.asap.1
            );
        }
        out
    }

    /// Fixed-width table for terminals.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>4} {:>4} | {:>8} {:>8} | {:>8} {:>8} | {:>8} {:>10} {:>8} {:>7}",
            "n_o",
            "n_e",
            "l1 prn",
            "l1 con",
            "s2 prn",
            "s2 con",
            "d2 prn",
            "d2 2k-2",
            "d2 con",
            "ratio"
        );
        for r in &self.uccsd {
            let ratio = if r.printed_double_exc_double == 0 {
                "-".to_string()
            } else {
                r.double_ratio().to_string()
            };
            let _ = writeln!(
                out,
                "{:>4} {:>4} | {:>8} {:>8} | {:>8} {:>8} | {:>8} {:>10} {:>8} {:>7}",
                r.n_o,
                r.n_e,
                r.printed_single,
                r.constructed_single,
                r.printed_single_exc_double,
                r.constructed_single_exc_double,
                r.printed_double_exc_double,
                r.nominal_locality_double_exc_double,
                r.constructed_double_exc_double,
                ratio
            );
        }
        let bad_hea = self
            .hea
            .iter()
            .filter(|r| r.formula != r.constructed)
            .count();
        let _ = writeln!(
            out,
            "HEA: {} specs checked, {} mismatches against (3P, nP)",
            self.hea.len(),
            bad_hea
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::exp_pauli_circuit;
    use crate::pauli::{Axis, PauliString};
    use num_complex::Complex64;

    #[test]
    fn hea_single_block() {
        let c = build_hea(HeaSpec::new(4, 1).unwrap()).unwrap();
        let d = layer_depths(&c, DepthMethod::SequentialBlock);
        assert_eq!((d.l_single, d.l_double), (3, 4));
    }

    #[test]
    fn exp_pauli_block_depth() {
        let p = PauliString::new(
            Complex64::new(1.0, 0.0),
            [(0, Axis::X), (1, Axis::Z), (2, Axis::Y)],
        );
        let gates = exp_pauli_circuit(0, 1.0, &p).unwrap();
        assert_eq!(layer_gates(3, &gates), (3, 4));

        let z = PauliString::new(Complex64::new(1.0, 0.0), [(0, Axis::Z)]);
        assert_eq!(
            layer_gates(1, &exp_pauli_circuit(0, 1.0, &z).unwrap()),
            (1, 0)
        );

        let four = PauliString::new(
            Complex64::new(1.0, 0.0),
            [(0, Axis::X), (1, Axis::Z), (2, Axis::Z), (5, Axis::Y)],
        );
        assert_eq!(
            layer_gates(6, &exp_pauli_circuit(0, 1.0, &four).unwrap()).1,
            6
        );
    }

    #[test]
    fn uccsd_four_two() {
        let spec = UccsdSpec::new(4, 2).unwrap();
        let c = build_uccsd(spec).unwrap();
        let d = layer_depths(&c, DepthMethod::SequentialBlock);
        assert_eq!((d.l_single, d.l_double), (48, 80));
        assert_eq!(
            uccsd_depth_formula(spec, DepthFormulaVariant::Printed),
            (48, 56)
        );
        assert_eq!(
            uccsd_depth_formula(spec, DepthFormulaVariant::Reconstructed),
            (48, 80)
        );
    }

    #[test]
    fn printed_double_term_six_three() {
        assert_eq!(
            uccsd_printed_double_term(UccsdSpec::new(6, 3).unwrap()),
            312
        );
    }

    #[test]
    fn printed_double_term_is_integral() {
        for n_o in 2..=40 {
            for n_e in 1..n_o {
                uccsd_printed_double_term(UccsdSpec::new(n_o, n_e).unwrap());
            }
        }
    }

    #[test]
    fn printed_double_term_equals_nominal_sum() {
        // 8 Σ_i Σ_β (i−β)(n_e−β)(i−n_e−1)
        for n_o in 2..=20 {
            for n_e in 1..n_o {
                let spec = UccsdSpec::new(n_o, n_e).unwrap();
                let mut sum = 0u128;
                for i in n_e + 1..=n_o {
                    for b in 1..=n_e {
                        sum += ((i - b) * (n_e - b) * (i - n_e - 1)) as u128;
                    }
                }
                assert_eq!(8 * sum, uccsd_printed_double_term(spec), "{spec:?}");
            }
        }
    }

    #[test]
    fn hea_formula_examples() {
        assert_eq!(hea_depth_formula(HeaSpec::new(4, 1).unwrap()), (3, 4));
        assert_eq!(hea_depth_formula(HeaSpec::new(7, 3).unwrap()), (9, 21));
    }

    #[test]
    fn ratio_display() {
        assert_eq!(Ratio::new(528, 312).to_string(), "22/13");
        assert!(Ratio::new(48, 24).is_integer(2));
    }
}
