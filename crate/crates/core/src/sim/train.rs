//! Plain gradient descent, `θ ← θ − η ∇C`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gradient::{gradient, GradientMethod, Objective};
use crate::circuit::ParamCircuit;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub max_iterations: usize,
    pub method: GradientMethod,
    /// 0 for exact expectations, otherwise shots per Pauli term.
    pub shots: u64,
    pub seed: u64,
    /// Stop once `|ΔC|` or `‖∇C‖` drops below this.
    pub tolerance: f64,
    /// Starting point; drawn uniformly from `[0, 2π)^L` when absent.
    pub initial: Option<Vec<f64>>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            max_iterations: 200,
            method: GradientMethod::ParameterShift,
            shots: 0,
            seed: 0,
            tolerance: 1e-8,
            initial: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.tolerance < 0.0 || self.tolerance.is_nan() {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be >= 0, got {}",
                self.tolerance
            )));
        }
        if let GradientMethod::FiniteDifference { delta } = self.method {
            if delta <= 0.0 || delta.is_nan() {
                return Err(Error::InvalidArgument(format!(
                    "finite-difference step must be > 0, got {delta}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub cost: f64,
    pub grad_norm: f64,
    /// Cumulative cost evaluations, gradient estimation included.
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainTrace {
    pub rows: Vec<TraceRow>,
    pub final_theta: Vec<f64>,
}

impl TrainTrace {
    pub fn final_cost(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.cost)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,cost,grad_norm,evaluations\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:.12},{:.6e},{}\n",
                r.iteration, r.cost, r.grad_norm, r.evaluations
            ));
        }
        out
    }
}

/// Row `k` records the cost and gradient at the `k`-th iterate, before the
/// update. Deterministic for a fixed config.
pub fn train(c: &ParamCircuit, h: &PauliSum, config: &TrainConfig) -> Result<TrainTrace> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut theta = match &config.initial {
        Some(t) if t.len() != c.n_params() => {
            return Err(Error::DimensionMismatch {
                expected: c.n_params(),
                got: t.len(),
            })
        }
        Some(t) => t.clone(),
        None => (0..c.n_params())
            .map(|_| rng.random_range(0.0..TAU))
            .collect(),
    };
    let mut obj = Objective::sampled(c, h, config.shots, rng.random())?;
    let mut rows = Vec::new();
    let mut previous: Option<f64> = None;
    for iteration in 0..=config.max_iterations {
        let cost = obj.evaluate(&theta)?;
        let grad = gradient(&mut obj, &theta, config.method)?;
        let grad_norm = grad.norm();
        rows.push(TraceRow {
            iteration,
            cost,
            grad_norm,
            evaluations: obj.evaluations(),
        });
        let stalled = previous.is_some_and(|p| (cost - p).abs() < config.tolerance);
        if grad_norm < config.tolerance || stalled || iteration == config.max_iterations {
            break;
        }
        for (t, g) in theta.iter_mut().zip(&grad.values) {
            *t -= config.learning_rate * g;
        }
        previous = Some(cost);
    }
    Ok(TrainTrace {
        rows,
        final_theta: theta,
    })
}
