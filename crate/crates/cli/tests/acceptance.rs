//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vqa_scaling::circuit::{build_hea, random_circuit, HeaSpec, UccsdSpec};
use vqa_scaling::cost::{
    find_crossover, t_vqa, t_vqa_hea_closed, t_vqa_uccsd_closed, Ansatz, ClosedFormVariant,
    GradientConvention, HardwareParams, ModelOptions, YEAR_S,
};
use vqa_scaling::dense::ground_energy;
use vqa_scaling::depth::{
    hea_depth_formula, hea_depth_row, uccsd_depth_formula, uccsd_depth_row, DepthFormulaVariant,
};
use vqa_scaling::hamiltonian::{random_hamiltonian, transverse_field_ising};
use vqa_scaling::sim::{
    grad_finite_difference, grad_parameter_shift, gradient_rank_probe, prepare,
    redundant_instances, sample_expectation, train, trig_monomial_check, Objective, TrainConfig,
};

type Check = Result<Vec<String>, Vec<String>>;
type Criterion = (&'static str, fn() -> Check);

fn choose(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn half_filled_specs() -> Vec<UccsdSpec> {
    (4..=12)
        .step_by(2)
        .map(|n| UccsdSpec::half_filled(n).unwrap())
        .collect()
}

fn one_per_parameter() -> ModelOptions {
    ModelOptions {
        convention: GradientConvention::OnePerParameter,
        depth_variant: DepthFormulaVariant::Printed,
        ..ModelOptions::default()
    }
}

fn theta(l: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..l)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect()
}

fn verdict(lines: Vec<String>, ok: bool) -> Check {
    if ok {
        Ok(lines)
    } else {
        Err(lines)
    }
}

fn parameter_count() -> Check {
    let mut notes = Vec::new();
    let mut ok = true;
    for spec in half_filled_specs() {
        let enumerated = (spec.single_pairs().len() + spec.double_tuples().len()) as u128;
        let (o, e) = (spec.n_o as u128, spec.n_e as u128);
        let formula = choose(o - e, 1) * choose(e, 1) + choose(o - e, 2) * choose(e, 2);
        ok &= enumerated == formula;
        notes.push(format!(
            "n_o={:>2}: enumerated {enumerated}, formula {formula}",
            spec.n_o
        ));
    }
    verdict(notes, ok)
}

fn depth_formulas() -> Check {
    let mut notes = Vec::new();
    let (mut single, mut single_exc, mut ratio) = (true, true, true);
    for spec in half_filled_specs() {
        let row = uccsd_depth_row(spec).unwrap();
        let printed_single = uccsd_depth_formula(spec, DepthFormulaVariant::Printed).0;
        single &= row.constructed_single == printed_single;
        single_exc &= row.constructed_single_exc_double == 2 * spec.n_o as u128 * spec.singles();
        let exact_two = row.constructed_double_exc_double == 2 * row.printed_double_exc_double;
        ratio &= exact_two;
        notes.push(format!(
            "n_o={:>2}: double-excitation constructed {} vs printed {} (ratio {})",
            spec.n_o,
            row.constructed_double_exc_double,
            row.printed_double_exc_double,
            row.double_ratio()
        ));
    }
    let mut hea = true;
    for n in 2..=12 {
        for p in 1..=5 {
            let spec = HeaSpec::new(n, p).unwrap();
            let row = hea_depth_row(spec).unwrap();
            hea &= row.constructed == hea_depth_formula(spec)
                && row.constructed == (3 * p as u128, (n * p) as u128);
        }
    }
    notes.push(format!(
        "l_single exact: {single}, single-excitation 2q term exact: {single_exc}, HEA (3P, nP): {hea}, double ratio 2: {ratio}"
    ));
    verdict(notes, single && single_exc && hea && ratio)
}

fn one_year_wall() -> Check {
    let opts = one_per_parameter();
    let spec = UccsdSpec::new(20, 10).unwrap();
    let depths = uccsd_depth_formula(spec, DepthFormulaVariant::Printed);
    let t = t_vqa(depths, spec.n_params(), 1e6, &opts.hw, opts.convention) / YEAR_S;
    verdict(
        vec![format!("UCCSD(20,10), N_si = 1e6: {t:.4} years")],
        (0.9..=1.1).contains(&t),
    )
}

fn crossover_scale() -> Check {
    let opts = one_per_parameter();
    let mut notes = Vec::new();
    let mut ok = true;
    for n_iterate in [1e2, 1e3, 1e4] {
        let r = find_crossover(Ansatz::Uccsd, 1e6, n_iterate, 4..=60, &opts).unwrap();
        match r.t_cross_years() {
            Some(years) => {
                let inside = (1.0..=10f64.powf(2.5)).contains(&years);
                ok &= inside;
                notes.push(format!(
                    "N_iterate={n_iterate:e}: n_cross={}, T={years:.2} years{}",
                    r.n_cross.unwrap(),
                    if inside { "" } else { " (outside [1, 10^2.5])" }
                ));
            }
            None => {
                ok = false;
                notes.push(format!("N_iterate={n_iterate:e}: no crossover in 4..=60"));
            }
        }
    }
    verdict(notes, ok)
}

fn closed_forms() -> Check {
    let hw = HardwareParams::default();
    let mut worst = 0.0f64;
    let mut points = 0;
    let n_si_values = [1.0, 1e2, 1e4, 1e6, 1e8];
    // 100 UCCSD points: even n_o in 4..=42 times five N_si
    for n_o in (4..=42).step_by(2) {
        let spec = UccsdSpec::half_filled(n_o).unwrap();
        let depths = uccsd_depth_formula(spec, DepthFormulaVariant::Printed);
        for &n_si in &n_si_values {
            let composed = t_vqa(
                depths,
                spec.n_params(),
                n_si,
                &hw,
                GradientConvention::OnePerParameter,
            );
            let closed = t_vqa_uccsd_closed(spec, n_si, ClosedFormVariant::Reconstructed);
            worst = worst.max((closed - composed).abs() / composed);
            points += 1;
        }
    }
    // 100 HEA points: n in 2..=21, P in 1..=5, N_si varied with n
    for n in 2..=21 {
        for p in 1..=5 {
            let spec = HeaSpec::new(n, p).unwrap();
            let n_si = n_si_values[(n + p) % n_si_values.len()];
            let composed = t_vqa(
                hea_depth_formula(spec),
                spec.n_params(),
                n_si,
                &hw,
                GradientConvention::OnePerParameter,
            );
            let closed = t_vqa_hea_closed(spec, n_si);
            worst = worst.max((closed - composed).abs() / composed);
            points += 1;
        }
    }
    verdict(
        vec![format!(
            "{points} points, worst relative deviation {worst:.2e}"
        )],
        points == 200 && worst < 1e-12,
    )
}

fn gradients() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut checked, mut bad, mut worst) = (0, 0, 0.0f64);
    for case in 0..50 {
        let n = 1 + case % 8;
        let l = rng.random_range(1..=8);
        let c = random_circuit(n, l, &mut rng).unwrap();
        let h = random_hamiltonian(n, 6, &mut rng);
        let t = theta(l, &mut rng);
        let mut obj = Objective::exact(&c, &h).unwrap();
        for j in 0..l {
            let p = grad_parameter_shift(&mut obj, &t, j).unwrap();
            let f = grad_finite_difference(&mut obj, &t, j, 1e-5).unwrap();
            let err = (p - f).abs();
            checked += 1;
            if err > 1e-6 * p.abs() && err >= 1e-9 {
                bad += 1;
            }
            if p.abs() > 1e-9 {
                worst = worst.max(err / p.abs());
            }
        }
    }
    verdict(
        vec![format!(
            "{checked} derivatives on 50 circuits, worst relative {worst:.2e}, {bad} failures"
        )],
        bad == 0,
    )
}

fn rank_probe() -> Check {
    let mut notes = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut generic = 0;
    let mut small = Vec::new();
    for case in 0..20 {
        let n = 1 + case % 4;
        let l = rng.random_range(1..=12);
        let c = random_circuit(n, l, &mut rng).unwrap();
        let h = random_hamiltonian(n, 4 << (2 * n), &mut rng);
        let probe = gradient_rank_probe(&c, &h, 3 * l, case as u64).unwrap();
        generic += usize::from(probe.rank == l);
        if l <= 2 {
            small.push((c, h));
        }
    }
    notes.push(format!("generic instances at rank L: {generic}/20"));
    let mut redundant = 0;
    for inst in redundant_instances() {
        let l = inst.circuit.n_params();
        let probe = gradient_rank_probe(&inst.circuit, &inst.hamiltonian, 3 * l, 5).unwrap();
        redundant += usize::from(probe.rank < l);
        if l <= 2 {
            small.push((inst.circuit, inst.hamiltonian));
        }
    }
    notes.push(format!("redundant instances below rank L: {redundant}/5"));
    // extra small generic circuits so the monomial check never runs empty
    for case in 0..20 {
        let n = 1 + case % 3;
        let c = random_circuit(n, 1 + case % 2, &mut rng).unwrap();
        let h = random_hamiltonian(n, 4, &mut rng);
        small.push((c, h));
    }
    let mut worst = 0.0f64;
    for (c, h) in &small {
        let r = trig_monomial_check(c, h).unwrap();
        let per = r
            .per_param
            .iter()
            .map(|f| f.max_residual)
            .fold(0.0, f64::max);
        worst = worst.max(per).max(r.full_residual);
    }
    notes.push(format!(
        "monomial fit on {} instances with L <= 2, worst residual {worst:.2e}",
        small.len()
    ));
    verdict(notes, generic == 20 && redundant == 5 && worst < 1e-8)
}

fn shot_noise() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let c = random_circuit(3, 6, &mut rng).unwrap();
    let h = random_hamiltonian(3, 8, &mut rng);
    let s = prepare(&c, &theta(6, &mut rng)).unwrap();
    let std = |shots: u64, seed: u64| {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let xs: Vec<f64> = (0..200)
            .map(|_| sample_expectation(&s, &h, shots, &mut r).unwrap())
            .collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
    };
    let (lo, hi) = (std(100, 1), std(10_000, 2));
    let factor = lo / hi;
    verdict(
        vec![format!(
            "std at 1e2 shots {lo:.4e}, at 1e4 shots {hi:.4e}, factor {factor:.2}"
        )],
        (8.0..=12.0).contains(&factor),
    )
}

fn desk_vqe() -> Check {
    let h = transverse_field_ising(4, 1.0, 1.0);
    let c = build_hea(HeaSpec::new(4, 2).unwrap()).unwrap();
    let e0 = ground_energy(&h, 4).unwrap();
    let best = (0..10)
        .map(|seed| {
            let cfg = TrainConfig {
                learning_rate: 0.1,
                max_iterations: 1000,
                seed,
                tolerance: 1e-12,
                ..TrainConfig::default()
            };
            train(&c, &h, &cfg).unwrap().final_cost()
        })
        .fold(f64::INFINITY, f64::min);
    verdict(
        vec![format!(
            "HEA(4,2) best of 10 seeds {best:.6}, ground {e0:.6}, gap {:.4}",
            best - e0
        )],
        best - e0 <= 1e-2,
    )
}

fn csv_body(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap_or_default()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}

fn run_twice(dir: &Path, tag: &str, args: &[&str], file: &str) -> Result<bool, String> {
    let mut bodies = Vec::new();
    for round in 0..2 {
        let out = dir.join(format!("{tag}_{round}"));
        let status = Command::new(env!("CARGO_BIN_EXE_vqa-scaling"))
            .args(["--seed", "7", "--out-dir"])
            .arg(&out)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!(
                "{tag}: {}",
                String::from_utf8_lossy(&status.stderr).trim()
            ));
        }
        bodies.push(csv_body(&out.join(file)));
    }
    Ok(!bodies[0].is_empty() && bodies[0] == bodies[1])
}

fn determinism() -> Check {
    let dir: PathBuf =
        std::env::temp_dir().join(format!("vqa-scaling-acceptance-{}", std::process::id()));
    let runs: [(&str, &[&str], &str); 4] = [
        (
            "sweep",
            &["sweep", "--n-max", "24", "--workers", "4"],
            "sweep.csv",
        ),
        (
            "crossover",
            &["crossover", "--n-max", "30"],
            "crossover_uccsd.csv",
        ),
        (
            "vqe",
            &[
                "vqe",
                "--ising",
                "3",
                "--blocks",
                "2",
                "--iterations",
                "50",
                "--shots",
                "200",
            ],
            "vqe_trace.csv",
        ),
        (
            "vqe_fd",
            &[
                "vqe",
                "--ising",
                "2",
                "--blocks",
                "1",
                "--iterations",
                "30",
                "--fd-step",
                "1e-4",
            ],
            "vqe_trace.csv",
        ),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (tag, args, file) in runs {
        match run_twice(&dir, tag, args, file) {
            Ok(same) => {
                ok &= same;
                notes.push(format!(
                    "{tag}: bodies {}",
                    if same { "identical" } else { "differ" }
                ));
            }
            Err(e) => {
                ok = false;
                notes.push(e);
            }
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    verdict(notes, ok)
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("parameter count identity", parameter_count),
        ("depth formulas", depth_formulas),
        ("one-year wall at 20 orbitals", one_year_wall),
        ("crossover time scale", crossover_scale),
        ("closed forms vs composition", closed_forms),
        ("parameter shift vs finite difference", gradients),
        ("gradient rank probe", rank_probe),
        ("shot-noise scaling", shot_noise),
        ("desk-scale VQE", desk_vqe),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        let (tag, notes) = match result {
            Ok(n) => ("PASS", n),
            Err(n) => {
                failed += 1;
                ("FAIL", n)
            }
        };
        println!("{tag} {:>2} {name} ({secs:.2} s)", i + 1);
        for n in notes {
            println!("       {n}");
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
