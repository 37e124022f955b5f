//! Gate-level circuit IR and the ansatz builders.

use std::fmt::{self, Write as _};
use std::ops::Range;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::{double_excitation_strings, single_excitation_strings, Axis, PauliString};

/// Gate set of the exp-Pauli template and the HEA.
///
/// Rotations follow `R_a(x) = exp(-i x σ_a / 2)`; a parameterized rotation has
/// angle `multiplier · θ[param]`, so `multiplier = 2` gives `exp(-i θ σ_a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// Hadamard, the X-basis change.
    H(usize),
    /// Fixed `R_X(±π/2)`, the Y-basis change. `inverse` selects `+π/2`.
    RxHalfPi {
        qubit: usize,
        inverse: bool,
    },
    Rot {
        axis: Axis,
        qubit: usize,
        param: usize,
        multiplier: f64,
    },
    /// Pauli X, used for reference-state preparation.
    X(usize),
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::X(q) => (q, None),
            Gate::RxHalfPi { qubit, .. } | Gate::Rot { qubit, .. } => (qubit, None),
            Gate::Cnot { control, target } => (control, Some(target)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    pub fn param(&self) -> Option<(usize, f64)> {
        match *self {
            Gate::Rot {
                param, multiplier, ..
            } => Some((param, multiplier)),
            _ => None,
        }
    }

    fn max_qubit(&self) -> usize {
        let (a, b) = self.qubits();
        b.map_or(a, |b| a.max(b))
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::RxHalfPi { qubit, inverse } => {
                let name = if inverse { "RX(pi/2)" } else { "RX(-pi/2)" };
                write!(f, "{name} {qubit}")
            }
            Gate::Rot {
                axis,
                qubit,
                param,
                multiplier,
            } => write!(f, "R{axis} {qubit} {param} {multiplier}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    SingleExcitation,
    DoubleExcitation,
    /// A generic exp(-iθP) block.
    PauliExponential,
    HeaRotations,
    HeaEntangler,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub kind: BlockKind,
    pub gates: Range<usize>,
    /// Support size of the exponentiated string, for exp-Pauli blocks.
    pub locality: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamCircuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    n_params: usize,
    blocks: Vec<Block>,
}

impl ParamCircuit {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Parameter count `L`.
    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Gates outside every block (state preparation).
    pub fn prep_gates(&self) -> &[Gate] {
        let end = self
            .blocks
            .first()
            .map_or(self.gates.len(), |b| b.gates.start);
        &self.gates[..end]
    }

    /// Indices of gates fed by parameter `param`.
    pub fn param_gates(&self, param: usize) -> Vec<usize> {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| g.param().is_some_and(|(p, _)| p == param))
            .map(|(i, _)| i)
            .collect()
    }

    /// Line-oriented dump: header comment, then `GATE qubit(s) [param multiplier]`.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "# qubits={} params={} blocks={}\n",
            self.n_qubits,
            self.n_params,
            self.blocks.len()
        );
        for g in &self.gates {
            let _ = writeln!(out, "{g}");
        }
        out
    }
}

/// Incremental circuit construction; [`CircuitBuilder::finish`] checks the
/// circuit invariants.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    n_qubits: usize,
    gates: Vec<Gate>,
    n_params: usize,
    blocks: Vec<Block>,
}

impl CircuitBuilder {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            n_params: 0,
            blocks: Vec::new(),
        }
    }

    /// Reserves a fresh parameter slot and returns its index.
    pub fn new_param(&mut self) -> usize {
        self.n_params += 1;
        self.n_params - 1
    }

    /// Appends a gate outside any block. Only valid before the first block.
    pub fn prep(&mut self, gate: Gate) -> &mut Self {
        debug_assert!(self.blocks.is_empty());
        self.gates.push(gate);
        self
    }

    /// Appends `gates` as one block.
    pub fn block(
        &mut self,
        kind: BlockKind,
        locality: Option<usize>,
        gates: Vec<Gate>,
    ) -> &mut Self {
        let start = self.gates.len();
        self.gates.extend(gates);
        self.blocks.push(Block {
            kind,
            gates: start..self.gates.len(),
            locality,
        });
        self
    }

    /// Appends `exp(-i · multiplier · θ[param] · P)` as a block.
    pub fn exp_pauli(
        &mut self,
        kind: BlockKind,
        param: usize,
        multiplier: f64,
        p: &PauliString,
    ) -> Result<&mut Self> {
        let gates = exp_pauli_circuit(param, multiplier, p)?;
        Ok(self.block(kind, Some(p.locality()), gates))
    }

    pub fn finish(self) -> Result<ParamCircuit> {
        let mut used = vec![false; self.n_params];
        for g in &self.gates {
            match *g {
                Gate::Cnot { control, target } if control == target => {
                    return Err(Error::InvalidGate(format!(
                        "CNOT control == target == {control}"
                    )));
                }
                _ => {}
            }
            if g.max_qubit() >= self.n_qubits {
                return Err(Error::InvalidGate(format!(
                    "{g} exceeds {} qubits",
                    self.n_qubits
                )));
            }
            if let Some((p, _)) = g.param() {
                if p >= self.n_params {
                    return Err(Error::InvalidGate(format!("{g}: parameter out of range")));
                }
                used[p] = true;
            }
        }
        if let Some(p) = used.iter().position(|u| !u) {
            return Err(Error::UnusedParameter(p));
        }
        Ok(ParamCircuit {
            n_qubits: self.n_qubits,
            gates: self.gates,
            n_params: self.n_params,
            blocks: self.blocks,
        })
    }
}

/// Gate template for `exp(-i · multiplier · θ · P)`.
///
/// Basis changes (H for X, `R_X(-π/2)` for Y), a CNOT ladder from the acted
/// qubits in ascending order onto the highest acted qubit, `R_Z(2·multiplier·θ)`
/// on that qubit, then the mirror image. The coefficient of `P` must have unit
/// modulus; its sign is folded into the rotation angle.
///
/// `R_X(-π/2)` conjugates `Z` into `−Y`, so every `Y` factor also flips the
/// sign of the `R_Z` angle.
pub fn exp_pauli_circuit(param: usize, multiplier: f64, p: &PauliString) -> Result<Vec<Gate>> {
    if p.is_identity() {
        return Err(Error::EmptyPauli);
    }
    let modulus = p.coeff.norm();
    if (modulus - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitCoefficient(modulus));
    }
    if p.coeff.im.abs() > 1e-12 {
        return Err(Error::InvalidGate(format!(
            "exp(-i theta P) needs a real coefficient, got {}",
            p.coeff
        )));
    }
    let n_y = p.factors().values().filter(|&&a| a == Axis::Y).count();
    let sign = p.coeff.re.signum() * if n_y % 2 == 1 { -1.0 } else { 1.0 };
    let factors: Vec<(usize, Axis)> = p.factors().iter().map(|(&q, &a)| (q, a)).collect();
    let &(target, _) = factors.last().expect("non-empty");

    let mut gates = Vec::with_capacity(4 * factors.len() + 1);
    let basis = |q: usize, a: Axis, inverse: bool| match a {
        Axis::X => Some(Gate::H(q)),
        Axis::Y => Some(Gate::RxHalfPi { qubit: q, inverse }),
        Axis::Z => None,
    };
    gates.extend(factors.iter().filter_map(|&(q, a)| basis(q, a, false)));
    let ladder: Vec<Gate> = factors[..factors.len() - 1]
        .iter()
        .map(|&(q, _)| Gate::Cnot { control: q, target })
        .collect();
    gates.extend(ladder.iter().copied());
    gates.push(Gate::Rot {
        axis: Axis::Z,
        qubit: target,
        param,
        multiplier: 2.0 * multiplier * sign,
    });
    gates.extend(ladder.iter().rev().copied());
    gates.extend(factors.iter().rev().filter_map(|&(q, a)| basis(q, a, true)));
    Ok(gates)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UccsdSpec {
    pub n_o: usize,
    pub n_e: usize,
}

impl UccsdSpec {
    pub fn new(n_o: usize, n_e: usize) -> Result<Self> {
        if n_e < 1 || n_e >= n_o {
            return Err(Error::InvalidUccsd { n_o, n_e });
        }
        Ok(Self { n_o, n_e })
    }

    /// Half filling, `n_e = n_o / 2`.
    pub fn half_filled(n_o: usize) -> Result<Self> {
        Self::new(n_o, n_o / 2)
    }

    /// `C(n_e,1)·C(n_o−n_e,1)`, the single-excitation count.
    pub fn singles(&self) -> u128 {
        binomial(self.n_e, 1) * binomial(self.n_o - self.n_e, 1)
    }

    /// `C(n_e,2)·C(n_o−n_e,2)`, the double-excitation count.
    pub fn doubles(&self) -> u128 {
        binomial(self.n_e, 2) * binomial(self.n_o - self.n_e, 2)
    }

    /// Closed-form parameter count.
    pub fn n_params(&self) -> u128 {
        self.singles() + self.doubles()
    }

    /// `(i, α)` pairs in the Trotter order: lexicographic in `(α, i)`.
    pub fn single_pairs(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for a in 1..=self.n_e {
            for i in self.n_e + 1..=self.n_o {
                v.push((i, a));
            }
        }
        v
    }

    /// `(i, j, α, β)` tuples with `i > j > α > β` in the Trotter order:
    /// lexicographic in `(β, α, j, i)`.
    pub fn double_tuples(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut v = Vec::new();
        for b in 1..=self.n_e {
            for a in b + 1..=self.n_e {
                for j in self.n_e + 1..=self.n_o {
                    for i in j + 1..=self.n_o {
                        v.push((i, j, a, b));
                    }
                }
            }
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeaSpec {
    pub n: usize,
    pub p: usize,
}

impl HeaSpec {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if n < 2 || p < 1 {
            return Err(Error::InvalidHea { n, p });
        }
        Ok(Self { n, p })
    }

    pub fn n_params(&self) -> u128 {
        3 * self.n as u128 * self.p as u128
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, t| acc * (n - t) as u128 / (t as u128 + 1))
}

/// Hartree–Fock preparation followed by one exp-Pauli block per string of
/// every single and double excitation (first-order Trotter). All strings of
/// one excitation share that excitation's parameter.
pub fn build_uccsd(spec: UccsdSpec) -> Result<ParamCircuit> {
    let spec = UccsdSpec::new(spec.n_o, spec.n_e)?;
    let mut b = CircuitBuilder::new(spec.n_o);
    for q in 0..spec.n_e {
        b.prep(Gate::X(q));
    }
    for (i, a) in spec.single_pairs() {
        let param = b.new_param();
        let sum = single_excitation_strings(i, a)?;
        push_excitation(&mut b, BlockKind::SingleExcitation, param, sum.terms())?;
    }
    for (i, j, a, bb) in spec.double_tuples() {
        let param = b.new_param();
        let sum = double_excitation_strings(i, j, a, bb)?;
        push_excitation(&mut b, BlockKind::DoubleExcitation, param, sum.terms())?;
    }
    b.finish()
}

// exp(θ · c·P) with c = i·r purely imaginary equals exp(-i·(-r)·θ·P).
fn push_excitation(
    b: &mut CircuitBuilder,
    kind: BlockKind,
    param: usize,
    terms: &[PauliString],
) -> Result<()> {
    for t in terms {
        debug_assert!(t.coeff.re.abs() < 1e-15);
        b.exp_pauli(kind, param, -t.coeff.im, &t.unit())?;
    }
    Ok(())
}

/// `P` repetitions of `R_Z R_X R_Z` on every qubit (three fresh parameters
/// per qubit) followed by the cyclic CNOT chain `(0,1), …, (n−2,n−1), (n−1,0)`.
pub fn build_hea(spec: HeaSpec) -> Result<ParamCircuit> {
    let spec = HeaSpec::new(spec.n, spec.p)?;
    let mut b = CircuitBuilder::new(spec.n);
    for _ in 0..spec.p {
        let mut rot = Vec::with_capacity(3 * spec.n);
        for q in 0..spec.n {
            for axis in [Axis::Z, Axis::X, Axis::Z] {
                let param = b.new_param();
                rot.push(Gate::Rot {
                    axis,
                    qubit: q,
                    param,
                    multiplier: 1.0,
                });
            }
        }
        b.block(BlockKind::HeaRotations, None, rot);
        let chain = (0..spec.n)
            .map(|q| Gate::Cnot {
                control: q,
                target: (q + 1) % spec.n,
            })
            .collect();
        b.block(BlockKind::HeaEntangler, None, chain);
    }
    b.finish()
}

/// `(single-qubit gates, two-qubit gates)` over the whole gate list.
pub fn count_gates(c: &ParamCircuit) -> (usize, usize) {
    let two = c.gates().iter().filter(|g| g.is_two_qubit()).count();
    (c.gates().len() - two, two)
}

fn random_pairs<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Vec<(usize, Axis)> {
    let k = rng.random_range(1..=n_qubits.min(3));
    let axes = [Axis::X, Axis::Y, Axis::Z];
    sample(rng, n_qubits, k)
        .iter()
        .enumerate()
        .map(|(pos, q)| {
            let axis = if pos == 0 {
                axes[rng.random_range(0..2)]
            } else {
                axes[rng.random_range(0..3)]
            };
            (q, axis)
        })
        .collect()
}

fn anticommute(a: &[(usize, Axis)], b: &[(usize, Axis)]) -> bool {
    let clashes = a
        .iter()
        .filter(|(q, x)| b.iter().any(|(r, y)| q == r && x != y))
        .count();
    clashes % 2 == 1
}

/// Random circuit of `n_params` exp-Pauli blocks, each fed by its own
/// parameter.
///
/// Strings are 1- to 3-local with a random sign and multiplier in
/// `{1/2, 1}`. The first factor is always `X` or `Y`, so no block acts on
/// `|0…0⟩` as a bare phase, and consecutive strings anticommute.
pub fn random_circuit<R: Rng + ?Sized>(
    n_qubits: usize,
    n_params: usize,
    rng: &mut R,
) -> Result<ParamCircuit> {
    if n_qubits == 0 {
        return Err(Error::InvalidArgument(
            "random circuit needs at least one qubit".into(),
        ));
    }
    let mut b = CircuitBuilder::new(n_qubits);
    let mut previous: Option<Vec<(usize, Axis)>> = None;
    for _ in 0..n_params {
        // Resample until the string anticommutes with its predecessor, so no
        // two neighbouring blocks merge into one rotation.
        let pairs = loop {
            let candidate = random_pairs(n_qubits, rng);
            if previous
                .as_ref()
                .is_none_or(|prev| anticommute(prev, &candidate))
            {
                break candidate;
            }
        };
        previous = Some(pairs.clone());
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let p = PauliString::new(num_complex::Complex64::new(sign, 0.0), pairs);
        let multiplier = if rng.random_bool(0.5) { 1.0 } else { 0.5 };
        let param = b.new_param();
        b.exp_pauli(BlockKind::PauliExponential, param, multiplier, &p)?;
    }
    b.finish()
}
