//! Empirical checks on the structure of gradients and cost landscapes.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gradient::{grad_parameter_shift, Objective};
use crate::circuit::{BlockKind, CircuitBuilder, Gate, ParamCircuit};
use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString, PauliSum};

const RANK_TOLERANCE: f64 = 1e-8;
/// Gradients below this are rounding noise from a constant cost.
const ZERO_GRADIENT: f64 = 1e-10;
const GRID: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct RankProbe {
    pub rank: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub n_params: usize,
    pub samples: usize,
}

impl RankProbe {
    pub fn full_rank(&self) -> bool {
        self.rank == self.n_params
    }
}

/// Stacks exact gradients at `samples` uniform draws from `[0, 2π)^L` into a
/// `samples × L` matrix and reports its numerical rank (singular values above
/// `1e-8` times the largest).
pub fn gradient_rank_probe(
    c: &ParamCircuit,
    h: &PauliSum,
    samples: usize,
    seed: u64,
) -> Result<RankProbe> {
    let l = c.n_params();
    if samples < l {
        return Err(Error::InvalidArgument(format!(
            "need at least L = {l} samples, got {samples}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut obj = Objective::exact(c, h)?;
    let mut m = DMatrix::<f64>::zeros(samples, l);
    for k in 0..samples {
        let theta: Vec<f64> = (0..l).map(|_| rng.random_range(0.0..TAU)).collect();
        for j in 0..l {
            m[(k, j)] = grad_parameter_shift(&mut obj, &theta, j)?;
        }
    }
    let mut singular_values: Vec<f64> = m
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let top = singular_values.first().copied().unwrap_or(0.0);
    let rank = if top > ZERO_GRADIENT {
        singular_values
            .iter()
            .filter(|&&s| s > RANK_TOLERANCE * top)
            .count()
    } else {
        0
    };
    Ok(RankProbe {
        rank,
        singular_values,
        n_params: l,
        samples,
    })
}

/// `C` along one parameter, the others frozen: `A cos(mθ) + B sin(mθ) + D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamFit {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialReport {
    pub per_param: Vec<ParamFit>,
    /// Largest absolute residual of the full product-basis fit on the grid.
    pub full_residual: f64,
}

impl MonomialReport {
    pub fn passes(&self) -> bool {
        self.per_param.iter().all(|f| f.max_residual < 1e-9) && self.full_residual < 1e-8
    }
}

fn grid_point(k: usize) -> f64 {
    PI * k as f64 / (GRID / 2) as f64
}

/// Minimum-norm least squares through the eigendecomposition of `AᵀA`.
///
/// The monomial basis has exactly repeated columns, and the SVD solver in
/// nalgebra returns wrong solutions for some tall rank-deficient inputs. On a
/// uniform grid the nonzero spectrum of `AᵀA` is well separated, so squaring
/// the condition number costs nothing here.
fn lstsq(a: &DMatrix<f64>, y: &DVector<f64>) -> (DVector<f64>, f64) {
    let eig = SymmetricEigen::new(a.transpose() * a);
    let top = eig.eigenvalues.amax();
    let rhs = eig.eigenvectors.transpose() * (a.transpose() * y);
    let scaled = DVector::from_iterator(
        rhs.len(),
        rhs.iter()
            .zip(eig.eigenvalues.iter())
            .map(|(r, &e)| if e > 1e-12 * top { r / e } else { 0.0 }),
    );
    let x = &eig.eigenvectors * scaled;
    let residual = (a * &x - y).amax();
    (x, residual)
}

/// Checks that `C(θ)` is a sum of products of `cos(m θ_l / 2)` and
/// `sin(m θ_l / 2)` pairs, one pair per parameter.
///
/// Requires `L ≤ 3` and each parameter feeding exactly one rotation; a shared
/// parameter raises the trigonometric degree and is rejected.
pub fn trig_monomial_check(c: &ParamCircuit, h: &PauliSum) -> Result<MonomialReport> {
    let l = c.n_params();
    if l > 3 {
        return Err(Error::InvalidArgument(format!(
            "monomial check supports L <= 3, got {l}"
        )));
    }
    let mut mult = Vec::with_capacity(l);
    for j in 0..l {
        let gates = c.param_gates(j);
        if gates.len() != 1 {
            return Err(Error::NotPauliExponential {
                param: j,
                reason: format!("feeds {} rotations, expected exactly one", gates.len()),
            });
        }
        mult.push(c.gates()[gates[0]].param().expect("parameterized").1);
    }
    let mut obj = Objective::exact(c, h)?;

    // Frozen point off the grid so no other parameter sits at a special value.
    let base: Vec<f64> = (0..l).map(|j| 0.37 + 0.61 * j as f64).collect();
    let mut per_param = Vec::with_capacity(l);
    for j in 0..l {
        let mut a = DMatrix::<f64>::zeros(GRID, 3);
        let mut y = DVector::<f64>::zeros(GRID);
        let mut theta = base.clone();
        for k in 0..GRID {
            let t = grid_point(k);
            theta[j] = t;
            a[(k, 0)] = (mult[j] * t).cos();
            a[(k, 1)] = (mult[j] * t).sin();
            a[(k, 2)] = 1.0;
            y[k] = obj.evaluate(&theta)?;
        }
        let (x, max_residual) = lstsq(&a, &y);
        per_param.push(ParamFit {
            a: x[0],
            b: x[1],
            d: x[2],
            max_residual,
        });
    }

    let points = GRID.pow(l as u32);
    let cols = 4usize.pow(l as u32);
    let mut a = DMatrix::<f64>::zeros(points, cols);
    let mut y = DVector::<f64>::zeros(points);
    for p in 0..points {
        let theta: Vec<f64> = (0..l)
            .map(|j| grid_point(p / GRID.pow(j as u32) % GRID))
            .collect();
        y[p] = obj.evaluate(&theta)?;
        for col in 0..cols {
            let mut v = 1.0;
            for j in 0..l {
                let half = mult[j] * theta[j] / 2.0;
                let (cs, sn) = (half.cos(), half.sin());
                v *= match col / 4usize.pow(j as u32) % 4 {
                    0 => cs * cs,
                    1 | 2 => cs * sn,
                    _ => sn * sn,
                };
            }
            a[(p, col)] = v;
        }
    }
    let full_residual = if l == 0 { 0.0 } else { lstsq(&a, &y).1 };
    Ok(MonomialReport {
        per_param,
        full_residual,
    })
}

/// A circuit/observable pair for the rank probe.
#[derive(Debug, Clone)]
pub struct ProbeInstance {
    pub name: &'static str,
    pub circuit: ParamCircuit,
    pub hamiltonian: PauliSum,
    /// Exact gradient rank, known by construction.
    pub expected_rank: usize,
}

fn string(coeff: f64, f: &[(usize, Axis)]) -> PauliString {
    PauliString::new(num_complex::Complex64::new(coeff, 0.0), f.iter().copied())
}

fn exp_chain(n: usize, prep: &[Gate], strings: &[PauliString]) -> ParamCircuit {
    let mut b = CircuitBuilder::new(n);
    for &g in prep {
        b.prep(g);
    }
    for s in strings {
        let p = b.new_param();
        b.exp_pauli(BlockKind::PauliExponential, p, 1.0, s)
            .expect("unit string");
    }
    b.finish().expect("valid by construction")
}

/// Circuits whose parameters are linearly redundant, so the gradient
/// samples span fewer than `L` dimensions.
pub fn redundant_instances() -> Vec<ProbeInstance> {
    use Axis::*;
    vec![
        ProbeInstance {
            name: "z_rotations_on_zero_state",
            circuit: exp_chain(1, &[], &[string(1.0, &[(0, Z)]), string(1.0, &[(0, Z)])]),
            hamiltonian: string(1.0, &[(0, Z)]).into(),
            expected_rank: 0,
        },
        ProbeInstance {
            name: "merged_z_rotations",
            circuit: exp_chain(
                1,
                &[Gate::H(0)],
                &[string(1.0, &[(0, Z)]), string(1.0, &[(0, Z)])],
            ),
            hamiltonian: string(1.0, &[(0, X)]).into(),
            expected_rank: 1,
        },
        ProbeInstance {
            name: "repeated_two_qubit_string",
            circuit: exp_chain(
                2,
                &[],
                &[
                    string(1.0, &[(0, Y)]),
                    string(1.0, &[(0, X), (1, X)]),
                    string(1.0, &[(0, X), (1, X)]),
                ],
            ),
            hamiltonian: PauliSum::from_terms([
                string(1.0, &[(0, Z)]),
                string(0.5, &[(1, Z)]),
                string(0.3, &[(0, X), (1, Y)]),
            ]),
            expected_rank: 2,
        },
        ProbeInstance {
            name: "spectator_parameter",
            circuit: exp_chain(2, &[], &[string(1.0, &[(0, X)]), string(1.0, &[(1, X)])]),
            hamiltonian: string(1.0, &[(0, Z)]).into(),
            expected_rank: 1,
        },
        ProbeInstance {
            name: "last_rotation_commutes_with_observable",
            circuit: exp_chain(1, &[], &[string(1.0, &[(0, Y)]), string(1.0, &[(0, Z)])]),
            hamiltonian: string(1.0, &[(0, Z)]).into(),
            expected_rank: 1,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_hea, BlockKind, CircuitBuilder, Gate, HeaSpec};
    use crate::pauli::{Axis, PauliString};
    use num_complex::Complex64;

    fn unit(q: usize, a: Axis) -> PauliString {
        PauliString::single(q, a)
    }

    #[test]
    fn z_rotations_on_zero_state_have_rank_zero() {
        let mut b = CircuitBuilder::new(1);
        for _ in 0..2 {
            let p = b.new_param();
            b.exp_pauli(BlockKind::PauliExponential, p, 1.0, &unit(0, Axis::Z))
                .unwrap();
        }
        let c = b.finish().unwrap();
        let probe = gradient_rank_probe(&c, &unit(0, Axis::Z).into(), 4, 1).unwrap();
        assert_eq!(probe.rank, 0);
    }

    #[test]
    fn merged_rotations_have_rank_one() {
        let mut b = CircuitBuilder::new(1);
        b.prep(Gate::H(0));
        for _ in 0..2 {
            let p = b.new_param();
            b.exp_pauli(BlockKind::PauliExponential, p, 1.0, &unit(0, Axis::Z))
                .unwrap();
        }
        let c = b.finish().unwrap();
        let probe = gradient_rank_probe(&c, &unit(0, Axis::X).into(), 6, 2).unwrap();
        assert_eq!(probe.rank, 1);
    }

    #[test]
    fn too_few_samples() {
        let c = build_hea(HeaSpec::new(2, 1).unwrap()).unwrap();
        assert!(gradient_rank_probe(&c, &unit(0, Axis::Z).into(), 3, 0).is_err());
    }

    #[test]
    fn single_x_rotation_is_cos_two_theta() {
        let mut b = CircuitBuilder::new(1);
        let p = b.new_param();
        b.exp_pauli(BlockKind::PauliExponential, p, 1.0, &unit(0, Axis::X))
            .unwrap();
        let c = b.finish().unwrap();
        let r = trig_monomial_check(&c, &unit(0, Axis::Z).into()).unwrap();
        let f = r.per_param[0];
        assert!(
            (f.a - 1.0).abs() < 1e-10 && f.b.abs() < 1e-10 && f.d.abs() < 1e-10,
            "{f:?}"
        );
        assert!(r.passes());
    }

    #[test]
    fn parameter_off_measured_support() {
        let mut b = CircuitBuilder::new(2);
        let p = b.new_param();
        b.exp_pauli(BlockKind::PauliExponential, p, 1.0, &unit(1, Axis::X))
            .unwrap();
        let c = b.finish().unwrap();
        let r = trig_monomial_check(&c, &unit(0, Axis::Z).into()).unwrap();
        assert!(r.per_param[0].a.abs() < 1e-12 && r.per_param[0].b.abs() < 1e-12);
    }

    #[test]
    fn two_parameter_product_fit() {
        let mut b = CircuitBuilder::new(2);
        let p0 = b.new_param();
        let p1 = b.new_param();
        let xy = PauliString::new(Complex64::new(1.0, 0.0), [(0, Axis::X), (1, Axis::Y)]);
        b.exp_pauli(BlockKind::PauliExponential, p0, 1.0, &xy)
            .unwrap();
        b.exp_pauli(BlockKind::PauliExponential, p1, 1.0, &unit(0, Axis::Y))
            .unwrap();
        let c = b.finish().unwrap();
        let h = PauliSum::from_terms([
            PauliString::new(Complex64::new(0.7, 0.0), [(0, Axis::Z)]),
            PauliString::new(Complex64::new(-0.3, 0.0), [(0, Axis::X), (1, Axis::Z)]),
        ]);
        let r = trig_monomial_check(&c, &h).unwrap();
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn shared_parameter_rejected() {
        let mut b = CircuitBuilder::new(1);
        let p = b.new_param();
        b.exp_pauli(BlockKind::PauliExponential, p, 1.0, &unit(0, Axis::X))
            .unwrap();
        b.exp_pauli(BlockKind::PauliExponential, p, 1.0, &unit(0, Axis::Y))
            .unwrap();
        let c = b.finish().unwrap();
        let err = trig_monomial_check(&c, &unit(0, Axis::Z).into()).unwrap_err();
        assert!(matches!(err, Error::NotPauliExponential { .. }));
    }
}
