//! `verify` subcommands: numerical self-checks printing PASS/FAIL.

use std::io::Write;

use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vqa_scaling::circuit::random_circuit;
use vqa_scaling::depth::verify_depths;
use vqa_scaling::hamiltonian::random_hamiltonian;
use vqa_scaling::sim::{
    grad_finite_difference, grad_parameter_shift, gradient_rank_probe, redundant_instances,
    trig_monomial_check, Objective,
};

use crate::commands::emit;
use crate::config::RunManifest;
use crate::{Globals, VerifyCommand};

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn theta(l: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..l)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect()
}

pub fn run(cmd: &VerifyCommand, globals: &Globals, out: &mut dyn Write) -> Result<bool> {
    match *cmd {
        VerifyCommand::Depth {
            max_orbitals,
            max_qubits,
            max_blocks,
            csv,
        } => depth(max_orbitals, max_qubits, max_blocks, csv, globals, out),
        VerifyCommand::Rank {
            qubits,
            instances,
            max_params,
        } => rank(qubits, instances, max_params, globals.seed, out),
        VerifyCommand::Psr {
            max_qubits,
            circuits,
            delta,
        } => psr(max_qubits, circuits, delta, globals.seed, out),
        VerifyCommand::Monomial {
            max_qubits,
            instances,
        } => monomial(max_qubits, instances, globals.seed, out),
    }
}

fn depth(
    max_orbitals: usize,
    max_qubits: usize,
    max_blocks: usize,
    csv: bool,
    globals: &Globals,
    out: &mut dyn Write,
) -> Result<bool> {
    if max_orbitals < 2 || max_qubits < 2 || max_blocks < 1 {
        bail!("need max-orbitals >= 2, max-qubits >= 2 and max-blocks >= 1");
    }
    let report = verify_depths(max_orbitals, max_qubits, max_blocks)?;
    write!(out, "{}", report.table())?;
    let deviations = report.ratio_deviations();
    writeln!(
        out,
        "double-excitation depth: constructed/printed ratio differs from 2 in {} of {} specs",
        deviations.len(),
        report
            .uccsd
            .iter()
            .filter(|r| r.printed_double_exc_double > 0)
            .count()
    )?;
    if csv {
        #[derive(serde::Serialize)]
        struct Scope {
            max_orbitals: usize,
            max_qubits: usize,
            max_blocks: usize,
        }
        let manifest = RunManifest::new(
            &Scope {
                max_orbitals,
                max_qubits,
                max_blocks,
            },
            globals.seed,
        )?;
        let u = emit(
            &globals.out_dir.join("verify_depth_uccsd.csv"),
            &manifest,
            &report.uccsd_csv(),
            out,
        )?;
        let h = emit(
            &globals.out_dir.join("verify_depth_hea.csv"),
            &manifest,
            &report.hea_csv(),
            out,
        )?;
        writeln!(out, "tables written to {u} and {h}")?;
    }
    let ok = report.exact_checks_pass();
    writeln!(
        out,
        "{} depth formulas (single-qubit, single-excitation and HEA terms exact)",
        verdict(ok)
    )?;
    Ok(ok)
}

fn rank(
    qubits: usize,
    instances: usize,
    max_params: usize,
    seed: u64,
    out: &mut dyn Write,
) -> Result<bool> {
    if qubits == 0 || max_params == 0 || qubits > 6 {
        bail!("need 1 <= qubits <= 6 and max-params >= 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut generic_ok = 0;
    for case in 0..instances {
        let n = 1 + case % qubits;
        let l = rng.random_range(1..=max_params);
        let c = random_circuit(n, l, &mut rng)?;
        // dense observable so every reachable direction is seen
        let h = random_hamiltonian(n, 4 << (2 * n), &mut rng);
        let probe = gradient_rank_probe(&c, &h, 3 * l, rng.random())?;
        if probe.full_rank() {
            generic_ok += 1;
        } else {
            writeln!(out, "  generic n={n} L={l}: rank {} < L", probe.rank)?;
        }
    }
    writeln!(
        out,
        "generic circuits at full rank: {generic_ok}/{instances}"
    )?;
    let mut redundant_ok = true;
    for inst in redundant_instances() {
        let l = inst.circuit.n_params();
        let probe = gradient_rank_probe(&inst.circuit, &inst.hamiltonian, 3 * l, seed)?;
        let ok = probe.rank == inst.expected_rank && probe.rank < l;
        redundant_ok &= ok;
        writeln!(
            out,
            "  {:<40} L={} rank={} expected={} {}",
            inst.name,
            l,
            probe.rank,
            inst.expected_rank,
            verdict(ok)
        )?;
    }
    let ok = generic_ok == instances && redundant_ok;
    writeln!(out, "{} gradient rank", verdict(ok))?;
    Ok(ok)
}

fn psr(
    max_qubits: usize,
    circuits: usize,
    delta: f64,
    seed: u64,
    out: &mut dyn Write,
) -> Result<bool> {
    if max_qubits == 0 || max_qubits > 16 || delta <= 0.0 || delta.is_nan() {
        bail!("need 1 <= max-qubits <= 16 and a positive delta");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut failures = 0;
    let mut checked = 0;
    for case in 0..circuits {
        let n = 1 + case % max_qubits;
        let l = rng.random_range(1..=8);
        let c = random_circuit(n, l, &mut rng)?;
        let h = random_hamiltonian(n, 6, &mut rng);
        let t = theta(l, &mut rng);
        let mut obj = Objective::exact(&c, &h)?;
        for j in 0..l {
            let p = grad_parameter_shift(&mut obj, &t, j)?;
            let f = grad_finite_difference(&mut obj, &t, j, delta)?;
            let err = (p - f).abs();
            checked += 1;
            if err > 1e-6 * p.abs() && err >= 1e-9 {
                failures += 1;
            }
            if p.abs() > 1e-9 {
                worst = worst.max(err / p.abs());
            }
        }
    }
    writeln!(
        out,
        "{checked} partial derivatives, worst relative deviation {worst:.3e}, {failures} over 1e-6"
    )?;
    let ok = failures == 0;
    writeln!(out, "{} parameter shift vs finite difference", verdict(ok))?;
    Ok(ok)
}

fn monomial(max_qubits: usize, instances: usize, seed: u64, out: &mut dyn Write) -> Result<bool> {
    if max_qubits == 0 || max_qubits > 10 {
        bail!("need 1 <= max-qubits <= 10");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    for case in 0..instances {
        let n = 1 + case % max_qubits;
        let l = 1 + case % 3;
        let c = random_circuit(n, l, &mut rng)?;
        let h = random_hamiltonian(n, 4, &mut rng);
        let r = trig_monomial_check(&c, &h)?;
        let worst = r
            .per_param
            .iter()
            .map(|f| f.max_residual)
            .fold(0.0, f64::max);
        if r.passes() {
            passed += 1;
        } else {
            writeln!(
                out,
                "  n={n} L={l}: per-parameter {worst:.2e}, joint {:.2e}",
                r.full_residual
            )?;
        }
    }
    writeln!(
        out,
        "{passed}/{instances} circuits fit the monomial expansion"
    )?;
    let ok = passed == instances;
    writeln!(out, "{} trigonometric monomial structure", verdict(ok))?;
    Ok(ok)
}
