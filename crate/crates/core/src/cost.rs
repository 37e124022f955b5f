//! Wall-clock models for ideal quantum execution and classical statevector
//! simulation of a variational training run.
//!
//! Quantum: `t_VQA = t_sample · N_sample · N_gradient · N_iterate`, with
//! `t_sample = t_gate = l_single·t_single + l_double·t_double` by default.
//! Classical: every gate costs `t_n = t_10 · 2^(n−10)`, no sampling.

use std::ops::RangeInclusive;

use crate::circuit::{HeaSpec, UccsdSpec};
use crate::depth::{hea_depth_formula, uccsd_depth_formula, DepthFormulaVariant, DepthReport};
use crate::error::{Error, Result};

/// 365 days.
pub const YEAR_S: f64 = 3.1536e7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardwareParams {
    pub t_single: f64,
    pub t_double: f64,
    /// Initialization plus readout per shot.
    pub t_init_read: f64,
    /// Charge `t_init_read` to every shot. Off by default.
    pub include_init_read: bool,
}

impl Default for HardwareParams {
    fn default() -> Self {
        Self {
            t_single: 30e-9,
            t_double: 60e-9,
            t_init_read: 1e-6,
            include_init_read: false,
        }
    }
}

impl HardwareParams {
    pub fn validate(&self) -> Result<()> {
        if [self.t_single, self.t_double, self.t_init_read]
            .iter()
            .all(|t| t.is_finite() && *t > 0.0)
        {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "hardware times must be strictly positive: {self:?}"
            )))
        }
    }

    pub fn t_sample(&self, depths: (u128, u128)) -> f64 {
        let init = if self.include_init_read {
            self.t_init_read
        } else {
            0.0
        };
        t_gate_time(depths, self) + init
    }
}

/// `l_single · t_single + l_double · t_double`.
pub fn t_gate_time(depths: impl Into<(u128, u128)>, hw: &HardwareParams) -> f64 {
    let (s, d) = depths.into();
    s as f64 * hw.t_single + d as f64 * hw.t_double
}

impl From<DepthReport> for (u128, u128) {
    fn from(d: DepthReport) -> Self {
        (d.l_single, d.l_double)
    }
}

/// Cost evaluations charged per gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GradientConvention {
    /// Two evaluations per parameter (shifted pair or central difference).
    #[default]
    TwoPerParameter,
    /// One evaluation per parameter, reproducing the printed closed forms.
    OnePerParameter,
}

impl GradientConvention {
    pub fn n_gradient(self, n_params: u128) -> u128 {
        match self {
            GradientConvention::TwoPerParameter => n_gradient(n_params),
            GradientConvention::OnePerParameter => n_params,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GradientConvention::TwoPerParameter => "2L",
            GradientConvention::OnePerParameter => "L",
        }
    }
}

/// `2L`: two cost evaluations per gradient element.
pub fn n_gradient(n_params: u128) -> u128 {
    2 * n_params
}

/// `ceil(1/ε²)` shots for sampling error `ε`.
pub fn n_sample_for_accuracy(epsilon: f64) -> Result<u128> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be > 0, got {epsilon}"
        )));
    }
    let x = 1.0 / (epsilon * epsilon);
    let r = x.round();
    // 1/ε² is often an integer that floating point lands a hair above
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        Ok(r as u128)
    } else {
        Ok(x.ceil() as u128)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    pub t_sample: f64,
    pub n_sample: f64,
    pub n_gradient: f64,
    pub n_iterate: f64,
    pub n_si: f64,
    pub t_total: f64,
}

impl CostBreakdown {
    pub fn quantum(
        depths: (u128, u128),
        n_params: u128,
        n_sample: f64,
        n_iterate: f64,
        hw: &HardwareParams,
        conv: GradientConvention,
    ) -> Self {
        let t_sample = hw.t_sample(depths);
        let n_gradient = conv.n_gradient(n_params) as f64;
        Self {
            t_sample,
            n_sample,
            n_gradient,
            n_iterate,
            n_si: n_sample * n_iterate,
            t_total: t_sample * n_sample * n_gradient * n_iterate,
        }
    }
}

/// Total quantum time for `N_si = N_sample · N_iterate`.
pub fn t_vqa(
    depths: (u128, u128),
    n_params: u128,
    n_si: f64,
    hw: &HardwareParams,
    conv: GradientConvention,
) -> f64 {
    hw.t_sample(depths) * n_si * conv.n_gradient(n_params) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormVariant {
    /// Double coefficient `16 n_o + 88` as printed.
    Printed,
    /// Double coefficient `32 n_o + 88`: the printed depth theorem substituted
    /// into the general composition (one evaluation per parameter, default gate times).
    Reconstructed,
}

impl ClosedFormVariant {
    pub fn name(self) -> &'static str {
        match self {
            ClosedFormVariant::Printed => "printed",
            ClosedFormVariant::Reconstructed => "reconstructed",
        }
    }
}

/// `10⁻⁸ · N_si · (C¹C¹ + C²C²) · [(12n_o+18) C¹C¹ + (a·n_o+88) C²C²]`.
pub fn t_vqa_uccsd_closed(spec: UccsdSpec, n_si: f64, variant: ClosedFormVariant) -> f64 {
    let n_o = spec.n_o as u128;
    let a = match variant {
        ClosedFormVariant::Printed => 16,
        ClosedFormVariant::Reconstructed => 32,
    };
    let bracket = (12 * n_o + 18) * spec.singles() + (a * n_o + 88) * spec.doubles();
    1e-8 * n_si * (spec.n_params() * bracket) as f64
}

/// `9·10⁻⁸ · N_si · (2n² + 3n) · P²`.
pub fn t_vqa_hea_closed(spec: HeaSpec, n_si: f64) -> f64 {
    let (n, p) = (spec.n as u128, spec.p as u128);
    9e-8 * n_si * ((2 * n * n + 3 * n) * p * p) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalSimParams {
    /// Seconds per gate on a 10-qubit statevector.
    pub t_10: f64,
}

impl Default for ClassicalSimParams {
    fn default() -> Self {
        Self { t_10: 1e-3 }
    }
}

impl ClassicalSimParams {
    /// `t_10 · 2^(n−10)`.
    pub fn gate_time(&self, n: usize) -> f64 {
        self.t_10 * 2f64.powi(n as i32 - 10)
    }
}

/// `t_n · gates · N_gradient(L) · N_iterate`, one exact evaluation per cost.
pub fn t_classical(
    n: usize,
    gate_count_total: u128,
    n_params: u128,
    n_iterate: f64,
    conv: GradientConvention,
    params: &ClassicalSimParams,
) -> f64 {
    params.gate_time(n) * gate_count_total as f64 * conv.n_gradient(n_params) as f64 * n_iterate
}

/// Gate tallies of the built UCCSD circuit, from per-template arithmetic:
/// a single-excitation string costs 5 single-qubit gates, a double-excitation
/// string 9, and a `k`-local string `2(k−1)` CNOTs; plus `n_e` preparation gates.
pub fn uccsd_gate_counts(spec: UccsdSpec) -> (u128, u128) {
    let mut single = spec.n_e as u128;
    let mut double = 0u128;
    for (i, a) in spec.single_pairs() {
        single += 2 * 5;
        double += 2 * 2 * (i - a) as u128;
    }
    for (i, j, a, b) in spec.double_tuples() {
        let k = crate::pauli::double_excitation_locality(i, j, a, b) as u128;
        single += 8 * 9;
        double += 8 * 2 * (k - 1);
    }
    (single, double)
}

pub fn hea_gate_counts(spec: HeaSpec) -> (u128, u128) {
    let (n, p) = (spec.n as u128, spec.p as u128);
    (3 * n * p, n * p)
}

/// How the HEA block count follows the qubit count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockRule {
    N,
    NSquared,
    Fixed(usize),
}

impl BlockRule {
    pub fn blocks(self, n: usize) -> usize {
        match self {
            BlockRule::N => n,
            BlockRule::NSquared => n * n,
            BlockRule::Fixed(k) => k,
        }
    }

    pub fn name(self) -> String {
        match self {
            BlockRule::N => "n".into(),
            BlockRule::NSquared => "n_squared".into(),
            BlockRule::Fixed(k) => format!("fixed({k})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ansatz {
    /// Half filling, `n_e = n/2`; `n` must be even.
    Uccsd,
    Hea(BlockRule),
}

impl Ansatz {
    pub fn name(self) -> &'static str {
        match self {
            Ansatz::Uccsd => "uccsd",
            Ansatz::Hea(_) => "hea",
        }
    }

    pub fn accepts(self, n: usize) -> bool {
        match self {
            Ansatz::Uccsd => n >= 2 && n.is_multiple_of(2),
            Ansatz::Hea(_) => n >= 2,
        }
    }
}

/// Structural numbers of one ansatz instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzPoint {
    pub n: usize,
    pub n_e: Option<usize>,
    pub p: Option<usize>,
    pub n_params: u128,
    pub depths: (u128, u128),
    pub gates: (u128, u128),
}

impl AnsatzPoint {
    pub fn new(ansatz: Ansatz, n: usize, variant: DepthFormulaVariant) -> Result<Self> {
        match ansatz {
            Ansatz::Uccsd => {
                if !n.is_multiple_of(2) {
                    return Err(Error::InvalidArgument(format!(
                        "UCCSD sweeps use n_e = n/2 and need even n, got {n}"
                    )));
                }
                let spec = UccsdSpec::half_filled(n)?;
                Ok(Self {
                    n,
                    n_e: Some(spec.n_e),
                    p: None,
                    n_params: spec.n_params(),
                    depths: uccsd_depth_formula(spec, variant),
                    gates: uccsd_gate_counts(spec),
                })
            }
            Ansatz::Hea(rule) => {
                let spec = HeaSpec::new(n, rule.blocks(n))?;
                Ok(Self {
                    n,
                    n_e: None,
                    p: Some(spec.p),
                    n_params: spec.n_params(),
                    depths: hea_depth_formula(spec),
                    gates: hea_gate_counts(spec),
                })
            }
        }
    }

    pub fn total_gates(&self) -> u128 {
        self.gates.0 + self.gates.1
    }
}

/// Everything the two time models need besides the ansatz point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModelOptions {
    pub hw: HardwareParams,
    pub classical: ClassicalSimParams,
    pub convention: GradientConvention,
    pub depth_variant: DepthFormulaVariant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePoint {
    pub point: AnsatzPoint,
    pub quantum: CostBreakdown,
    pub t_classical: f64,
}

pub fn time_point(
    ansatz: Ansatz,
    n: usize,
    n_sample: f64,
    n_iterate: f64,
    opts: &ModelOptions,
) -> Result<TimePoint> {
    let point = AnsatzPoint::new(ansatz, n, opts.depth_variant)?;
    let quantum = CostBreakdown::quantum(
        point.depths,
        point.n_params,
        n_sample,
        n_iterate,
        &opts.hw,
        opts.convention,
    );
    let t_classical = t_classical(
        n,
        point.total_gates(),
        point.n_params,
        n_iterate,
        opts.convention,
        &opts.classical,
    );
    Ok(TimePoint {
        point,
        quantum,
        t_classical,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossoverStatus {
    Found,
    NoneInRange,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverReport {
    pub status: CrossoverStatus,
    pub n_cross: Option<usize>,
    /// Quantum total at `n_cross`, seconds.
    pub t_cross: Option<f64>,
    /// Every scanned point, for plotting.
    pub curve: Vec<TimePoint>,
}

impl CrossoverReport {
    pub fn t_cross_years(&self) -> Option<f64> {
        self.t_cross.map(|t| t / YEAR_S)
    }
}

/// Scans `n` upward and reports the first point where the quantum total
/// drops below the classical total.
pub fn find_crossover(
    ansatz: Ansatz,
    n_sample: f64,
    n_iterate: f64,
    range: RangeInclusive<usize>,
    opts: &ModelOptions,
) -> Result<CrossoverReport> {
    let ns: Vec<usize> = range.filter(|&n| ansatz.accepts(n)).collect();
    if ns.is_empty() {
        return Err(Error::InvalidArgument("empty qubit range".into()));
    }
    let mut curve = Vec::with_capacity(ns.len());
    let mut hit = None;
    for n in ns {
        let tp = time_point(ansatz, n, n_sample, n_iterate, opts)?;
        if hit.is_none() && tp.quantum.t_total < tp.t_classical {
            hit = Some((n, tp.quantum.t_total));
        }
        curve.push(tp);
    }
    Ok(match hit {
        Some((n, t)) => CrossoverReport {
            status: CrossoverStatus::Found,
            n_cross: Some(n),
            t_cross: Some(t),
            curve,
        },
        None => CrossoverReport {
            status: CrossoverStatus::NoneInRange,
            n_cross: None,
            t_cross: None,
            curve,
        },
    })
}

/// Seconds plus the largest fitting unit among s/h/days/years.
pub fn human_duration(seconds: f64) -> String {
    let (v, unit) = if seconds >= YEAR_S {
        (seconds / YEAR_S, "years")
    } else if seconds >= 86_400.0 {
        (seconds / 86_400.0, "days")
    } else if seconds >= 3_600.0 {
        (seconds / 3_600.0, "h")
    } else {
        (seconds, "s")
    };
    format!("{seconds:.6e} s ({v:.3} {unit})")
}
