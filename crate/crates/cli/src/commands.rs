//! Report subcommands.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use vqa_scaling::circuit::{build_hea, build_uccsd, HeaSpec, ParamCircuit, UccsdSpec};
use vqa_scaling::cost::{
    find_crossover, hea_gate_counts, human_duration, t_classical, t_vqa_hea_closed,
    t_vqa_uccsd_closed, time_point, uccsd_gate_counts, ClosedFormVariant, CostBreakdown, YEAR_S,
};
use vqa_scaling::dense::{ground_energy, MAX_DENSE_QUBITS};
use vqa_scaling::depth::{
    hea_depth_formula, layer_depths, uccsd_depth_formula, DepthFormulaVariant, DepthMethod,
};
use vqa_scaling::hamiltonian::{parse_hamiltonian, transverse_field_ising};
use vqa_scaling::pauli::PauliSum;
use vqa_scaling::sim::{train, GradientMethod, TrainConfig, TrainTrace};

use crate::config::{self, ResolvedModel, RunManifest};
use crate::{CrossoverArgs, Globals, SpecArgs, SweepArgs, TimeArgs, VqeArgs};

/// Largest UCCSD register the `depth` command builds gate by gate.
const MAX_CONSTRUCTED_ORBITALS: usize = 24;

#[derive(Debug, Clone, Copy)]
pub enum Instance {
    Uccsd(UccsdSpec),
    Hea(HeaSpec),
}

impl Instance {
    pub fn from_args(a: &SpecArgs) -> Result<Self> {
        match a.ansatz.as_str() {
            "uccsd" => {
                let n_o = a.orbitals.context("--orbitals is required for uccsd")?;
                let n_e = a.electrons.unwrap_or(n_o / 2);
                Ok(Instance::Uccsd(UccsdSpec::new(n_o, n_e)?))
            }
            "hea" => {
                let n = a.qubits.context("--qubits is required for hea")?;
                let p = a.blocks.context("--blocks is required for hea")?;
                Ok(Instance::Hea(HeaSpec::new(n, p)?))
            }
            other => bail!("unknown ansatz {other:?} (expected uccsd or hea)"),
        }
    }

    fn n_qubits(self) -> usize {
        match self {
            Instance::Uccsd(s) => s.n_o,
            Instance::Hea(s) => s.n,
        }
    }

    fn n_params(self) -> u128 {
        match self {
            Instance::Uccsd(s) => s.n_params(),
            Instance::Hea(s) => s.n_params(),
        }
    }

    fn label(self) -> String {
        match self {
            Instance::Uccsd(s) => format!("UCCSD n_o={} n_e={}", s.n_o, s.n_e),
            Instance::Hea(s) => format!("HEA n={} P={}", s.n, s.p),
        }
    }

    fn csv_prefix(self) -> String {
        match self {
            Instance::Uccsd(s) => format!("uccsd,{},{},", s.n_o, s.n_e),
            Instance::Hea(s) => format!("hea,{},,{}", s.n, s.p),
        }
    }

    fn depths(self, variant: DepthFormulaVariant) -> (u128, u128) {
        match self {
            Instance::Uccsd(s) => uccsd_depth_formula(s, variant),
            Instance::Hea(s) => hea_depth_formula(s),
        }
    }

    fn gates(self) -> (u128, u128) {
        match self {
            Instance::Uccsd(s) => uccsd_gate_counts(s),
            Instance::Hea(s) => hea_gate_counts(s),
        }
    }

    fn build(self) -> Result<ParamCircuit> {
        Ok(match self {
            Instance::Uccsd(s) => build_uccsd(s)?,
            Instance::Hea(s) => build_hea(s)?,
        })
    }
}

/// Writes `header + body` to `path`, `-` meaning stdout. Returns where it went.
pub fn emit(
    path: &Path,
    manifest: &RunManifest,
    body: &str,
    out: &mut dyn Write,
) -> Result<String> {
    if path == Path::new("-") {
        out.write_all(manifest.header().as_bytes())?;
        out.write_all(body.as_bytes())?;
        return Ok("stdout".into());
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, format!("{}{}", manifest.header(), body))
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path.display().to_string())
}

/// Summary lines go to stderr when the CSV itself went to stdout.
fn notes(dest: &str, lines: &[String], out: &mut dyn Write) -> Result<()> {
    for line in lines {
        if dest == "stdout" {
            eprintln!("{line}");
        } else {
            writeln!(out, "{line}")?;
        }
    }
    Ok(())
}

fn output_path(flag: Option<&PathBuf>, globals: &Globals, default_name: &str) -> PathBuf {
    flag.cloned()
        .unwrap_or_else(|| globals.out_dir.join(default_name))
}

pub fn depth(a: &SpecArgs, out: &mut dyn Write) -> Result<()> {
    let inst = Instance::from_args(a)?;
    let printed = inst.depths(DepthFormulaVariant::Printed);
    let recon = inst.depths(DepthFormulaVariant::Reconstructed);
    let constructed = match inst {
        Instance::Uccsd(s) if s.n_o > MAX_CONSTRUCTED_ORBITALS => None,
        _ => {
            let c = inst.build()?;
            let seq = layer_depths(&c, DepthMethod::SequentialBlock);
            let asap = layer_depths(&c, DepthMethod::AsapGlobal);
            Some(((seq.l_single, seq.l_double), (asap.l_single, asap.l_double)))
        }
    };
    if a.csv {
        writeln!(
            out,
            "ansatz,n,n_e,P,L,formula_single,formula_double,reconstructed_single,reconstructed_double,\
constructed_single,constructed_double,asap_single,asap_double"
        )?;
        let (c, s) = match constructed {
            Some((c, s)) => (format!("{},{}", c.0, c.1), format!("{},{}", s.0, s.1)),
            None => (",".into(), ",".into()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            inst.csv_prefix(),
            inst.n_params(),
            printed.0,
            printed.1,
            recon.0,
            recon.1,
            c,
            s
        )?;
        return Ok(());
    }
    writeln!(out, "{}  L={}", inst.label(), inst.n_params())?;
    writeln!(out, "{:<22} {:>12} {:>12}", "", "l_single", "l_double")?;
    let mut rows = match inst {
        Instance::Uccsd(_) => vec![
            ("printed formula", printed),
            ("reconstructed formula", recon),
        ],
        Instance::Hea(_) => vec![("formula (3P, nP)", printed)],
    };
    if let Some((seq, asap)) = constructed {
        rows.push(("constructed (blocks)", seq));
        rows.push(("constructed (asap)", asap));
    }
    for (name, d) in rows {
        writeln!(out, "{name:<22} {:>12} {:>12}", d.0, d.1)?;
    }
    match constructed {
        Some(_) => {}
        None => writeln!(
            out,
            "(circuit not constructed above {MAX_CONSTRUCTED_ORBITALS} orbitals)"
        )?,
    }
    Ok(())
}

pub fn params(a: &SpecArgs, out: &mut dyn Write) -> Result<()> {
    let inst = Instance::from_args(a)?;
    match inst {
        Instance::Uccsd(s) => {
            let enumerated = s.single_pairs().len() as u128 + s.double_tuples().len() as u128;
            if a.csv {
                writeln!(out, "ansatz,n,n_e,P,singles,doubles,L")?;
                writeln!(
                    out,
                    "{},{},{},{}",
                    inst.csv_prefix(),
                    s.singles(),
                    s.doubles(),
                    enumerated
                )?;
            } else {
                writeln!(out, "{}", inst.label())?;
                writeln!(out, "singles  {}", s.singles())?;
                writeln!(out, "doubles  {}", s.doubles())?;
                writeln!(out, "L        {enumerated}")?;
            }
        }
        Instance::Hea(s) => {
            if a.csv {
                writeln!(out, "ansatz,n,n_e,P,singles,doubles,L")?;
                writeln!(out, "{},,,{}", inst.csv_prefix(), s.n_params())?;
            } else {
                writeln!(out, "{}", inst.label())?;
                writeln!(out, "L        {}", s.n_params())?;
            }
        }
    }
    Ok(())
}

pub fn time(a: &TimeArgs, globals: &Globals, out: &mut dyn Write) -> Result<()> {
    let inst = Instance::from_args(&a.spec)?;
    if !(a.n_sample > 0.0 && a.n_iterate > 0.0) {
        bail!("--n-sample and --n-iterate must be positive");
    }
    let model = ResolvedModel::resolve(&a.model, &globals.file)?;
    let opts = model.options()?;
    let depths = inst.depths(opts.depth_variant);
    let l = inst.n_params();
    let q = CostBreakdown::quantum(
        depths,
        l,
        a.n_sample,
        a.n_iterate,
        &opts.hw,
        opts.convention,
    );
    let gates = inst.gates();
    let tc = t_classical(
        inst.n_qubits(),
        gates.0 + gates.1,
        l,
        a.n_iterate,
        opts.convention,
        &opts.classical,
    );
    if a.spec.csv {
        writeln!(out, "ansatz,n,n_e,P,N_sample,N_iterate,N_gradient_convention,depth_variant,t_quantum_s,t_classical_s")?;
        writeln!(
            out,
            "{},{:e},{:e},{},{},{:.6e},{:.6e}",
            inst.csv_prefix(),
            a.n_sample,
            a.n_iterate,
            model.convention,
            model.depth_variant,
            q.t_total,
            tc
        )?;
        return Ok(());
    }
    writeln!(out, "{}  L={}", inst.label(), l)?;
    writeln!(
        out,
        "depths ({})       l_single={} l_double={}",
        model.depth_variant, depths.0, depths.1
    )?;
    writeln!(out, "t_sample               {:.6e} s", q.t_sample)?;
    writeln!(
        out,
        "N_sample x N_iterate   {:e} x {:e} = {:e}",
        a.n_sample, a.n_iterate, q.n_si
    )?;
    writeln!(
        out,
        "N_gradient ({:>2})        {}",
        model.convention, q.n_gradient
    )?;
    writeln!(out, "quantum total          {}", human_duration(q.t_total))?;
    writeln!(out, "classical total        {}", human_duration(tc))?;
    writeln!(out, "gates (1q, 2q)         {} {}", gates.0, gates.1)?;
    let closed = match inst {
        Instance::Uccsd(s) => vec![
            (
                "closed form, printed",
                t_vqa_uccsd_closed(s, q.n_si, ClosedFormVariant::Printed),
            ),
            (
                "closed form, reconstructed",
                t_vqa_uccsd_closed(s, q.n_si, ClosedFormVariant::Reconstructed),
            ),
        ],
        Instance::Hea(s) => vec![("closed form", t_vqa_hea_closed(s, q.n_si))],
    };
    for (name, t) in closed {
        writeln!(out, "{name:<26} {} (N_gradient = L)", human_duration(t))?;
    }
    if q.t_total >= YEAR_S {
        writeln!(out, "quantum total exceeds 1 year")?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct ResolvedSweep {
    ansatz: Vec<String>,
    n_min: usize,
    n_max: usize,
    block_rule: String,
    n_sample: Vec<f64>,
    n_iterate: Vec<f64>,
    model: ResolvedModel,
}

pub fn sweep(a: &SweepArgs, globals: &Globals, out: &mut dyn Write) -> Result<()> {
    let f = &globals.file.sweep;
    let resolved = ResolvedSweep {
        ansatz: a
            .ansatz
            .clone()
            .or_else(|| f.ansatz.clone())
            .unwrap_or_else(|| vec!["uccsd".into(), "hea".into()]),
        n_min: a.n_min.or(f.n_min).unwrap_or(4),
        n_max: a.n_max.or(f.n_max).unwrap_or(50),
        block_rule: a
            .block_rule
            .clone()
            .or_else(|| f.block_rule.clone())
            .unwrap_or_else(|| "n".into()),
        n_sample: a
            .n_sample
            .clone()
            .or_else(|| f.n_sample.clone())
            .unwrap_or_else(|| vec![1e4, 1e5, 1e6, 1e7, 1e8]),
        n_iterate: a
            .n_iterate
            .clone()
            .or_else(|| f.n_iterate.clone())
            .unwrap_or_else(|| vec![1e2, 1e3, 1e4]),
        model: ResolvedModel::resolve(&a.model, &globals.file)?,
    };
    let rule = config::parse_block_rule(&resolved.block_rule)?;
    let ansatze = resolved
        .ansatz
        .iter()
        .map(|s| config::parse_ansatz(s, rule))
        .collect::<Result<Vec<_>>>()?;
    if ansatze.is_empty() || resolved.n_sample.is_empty() || resolved.n_iterate.is_empty() {
        bail!("sweep sets must be non-empty");
    }
    if resolved.n_min > resolved.n_max {
        bail!("n_min {} exceeds n_max {}", resolved.n_min, resolved.n_max);
    }
    if resolved
        .n_sample
        .iter()
        .chain(&resolved.n_iterate)
        .any(|&v| v <= 0.0 || v.is_nan())
    {
        bail!("sample and iteration counts must be positive");
    }
    let opts = resolved.model.options()?;
    let mut grid = Vec::new();
    for &ansatz in &ansatze {
        for n in (resolved.n_min..=resolved.n_max).filter(|&n| ansatz.accepts(n)) {
            for &ns in &resolved.n_sample {
                for &ni in &resolved.n_iterate {
                    grid.push((ansatz, n, ns, ni));
                }
            }
        }
    }
    if grid.is_empty() {
        bail!("no valid grid points (UCCSD needs even n >= 2)");
    }
    let eval = || -> Result<Vec<String>> {
        grid.par_iter()
            .map(|&(ansatz, n, ns, ni)| {
                let tp = time_point(ansatz, n, ns, ni, &opts)?;
                let n_e = tp.point.n_e.map(|v| v.to_string()).unwrap_or_default();
                let p = tp.point.p.map(|v| v.to_string()).unwrap_or_default();
                Ok(format!(
                    "{},{},{},{},{:e},{:e},{},{},{:.6e},{:.6e}\n",
                    ansatz.name(),
                    n,
                    n_e,
                    p,
                    ns,
                    ni,
                    resolved.model.convention,
                    resolved.model.depth_variant,
                    tp.quantum.t_total,
                    tp.t_classical
                ))
            })
            .collect()
    };
    let workers = a.workers.or(f.workers).unwrap_or(0);
    let rows = if workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .context("building worker pool")?
            .install(eval)?
    } else {
        eval()?
    };
    let mut body = String::from(
        "ansatz,n,n_e,P,N_sample,N_iterate,N_gradient_convention,depth_variant,t_quantum_s,t_classical_s\n",
    );
    body.extend(rows);
    let manifest = RunManifest::new(&resolved, globals.seed)?;
    let path = output_path(
        a.output.as_ref().or(f.output.as_ref()),
        globals,
        "sweep.csv",
    );
    let dest = emit(&path, &manifest, &body, out)?;
    if dest != "stdout" {
        writeln!(out, "wrote {} rows to {dest}", grid.len())?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct ResolvedCrossover {
    ansatz: String,
    block_rule: String,
    n_sample: f64,
    n_iterate: f64,
    n_min: usize,
    n_max: usize,
    model: ResolvedModel,
}

pub fn crossover(a: &CrossoverArgs, globals: &Globals, out: &mut dyn Write) -> Result<()> {
    let rule = config::parse_block_rule(&a.block_rule)?;
    let ansatz = config::parse_ansatz(&a.ansatz, rule)?;
    if !(a.n_sample > 0.0 && a.n_iterate > 0.0) {
        bail!("--n-sample and --n-iterate must be positive");
    }
    let resolved = ResolvedCrossover {
        ansatz: a.ansatz.clone(),
        block_rule: rule.name(),
        n_sample: a.n_sample,
        n_iterate: a.n_iterate,
        n_min: a.n_min,
        n_max: a.n_max,
        model: ResolvedModel::resolve(&a.model, &globals.file)?,
    };
    let opts = resolved.model.options()?;
    let report = find_crossover(ansatz, a.n_sample, a.n_iterate, a.n_min..=a.n_max, &opts)?;

    let mut body = String::from("n,L,t_quantum_s,t_classical_s,quantum_faster\n");
    for tp in &report.curve {
        let _ = writeln!(
            body,
            "{},{},{:.6e},{:.6e},{}",
            tp.point.n,
            tp.point.n_params,
            tp.quantum.t_total,
            tp.t_classical,
            tp.quantum.t_total < tp.t_classical
        );
    }
    let manifest = RunManifest::new(&resolved, globals.seed)?;
    let path = output_path(
        a.output.as_ref(),
        globals,
        &format!("crossover_{}.csv", ansatz.name()),
    );
    let dest = emit(&path, &manifest, &body, out)?;

    let mut lines = vec![format!(
        "{} N_sample={:e} N_iterate={:e} N_gradient={} depths={}",
        ansatz.name(),
        a.n_sample,
        a.n_iterate,
        resolved.model.convention,
        resolved.model.depth_variant
    )];
    match (report.n_cross, report.t_cross) {
        (Some(n), Some(t)) => {
            let band = if (1.0..=100.0).contains(&(t / YEAR_S)) {
                "inside"
            } else {
                "outside"
            };
            lines.push(format!("crossover at n = {n}"));
            lines.push(format!("T = {}", human_duration(t)));
            lines.push(format!("T is {band} the 1-100 year band"));
        }
        _ => lines.push(format!("no crossover for n in {}..={}", a.n_min, a.n_max)),
    }
    if dest != "stdout" {
        lines.push(format!("curve written to {dest}"));
    }
    notes(&dest, &lines, out)
}

#[derive(Debug, Serialize)]
struct ResolvedVqe {
    hamiltonian: String,
    ansatz: String,
    blocks: usize,
    electrons: Option<usize>,
    shots: u64,
    learning_rate: f64,
    iterations: usize,
    tolerance: f64,
    fd_step: Option<f64>,
    restarts: u64,
}

fn load_hamiltonian(a: &VqeArgs) -> Result<(PauliSum, String, usize)> {
    match (&a.hamiltonian, a.ising) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let h = parse_hamiltonian(&text).with_context(|| format!("in {}", path.display()))?;
            if h.is_empty() {
                bail!("{} contains no terms", path.display());
            }
            let n = h.n_qubits().max(1);
            Ok((h, text, n))
        }
        (None, Some(n)) => {
            if n == 0 {
                bail!("--ising needs at least one site");
            }
            let h = transverse_field_ising(n, 1.0, a.field);
            Ok((h, format!("ising {n} field {}", a.field), n))
        }
        _ => bail!("give either --hamiltonian FILE or --ising N"),
    }
}

pub fn vqe(a: &VqeArgs, globals: &Globals, out: &mut dyn Write) -> Result<()> {
    let (h, source, n) = load_hamiltonian(a)?;
    let fv = &globals.file.vqe;
    let resolved = ResolvedVqe {
        hamiltonian: source,
        ansatz: a.ansatz.clone(),
        blocks: a.blocks,
        electrons: a.electrons,
        shots: a.shots.or(fv.shots).unwrap_or(0),
        learning_rate: a.learning_rate.or(fv.learning_rate).unwrap_or(0.1),
        iterations: a.iterations.or(fv.iterations).unwrap_or(600),
        tolerance: a.tolerance.or(fv.tolerance).unwrap_or(1e-10),
        fd_step: a.fd_step,
        restarts: a.restarts.max(1),
    };
    let circuit = match a.ansatz.as_str() {
        "hea" => build_hea(HeaSpec::new(n, a.blocks)?)?,
        "uccsd" => build_uccsd(UccsdSpec::new(n, a.electrons.unwrap_or(n / 2))?)?,
        other => bail!("unknown ansatz {other:?} (expected hea or uccsd)"),
    };
    let method = match a.fd_step {
        Some(delta) => GradientMethod::FiniteDifference { delta },
        None => GradientMethod::ParameterShift,
    };
    let mut best: Option<(u64, TrainTrace)> = None;
    for seed in globals.seed..globals.seed + resolved.restarts {
        let cfg = TrainConfig {
            learning_rate: resolved.learning_rate,
            max_iterations: resolved.iterations,
            method,
            shots: resolved.shots,
            seed,
            tolerance: resolved.tolerance,
            initial: None,
        };
        let trace = train(&circuit, &h, &cfg)?;
        if best
            .as_ref()
            .is_none_or(|(_, b)| trace.final_cost() < b.final_cost())
        {
            best = Some((seed, trace));
        }
    }
    let (seed, trace) = best.expect("at least one restart");
    let manifest = RunManifest::new(&resolved, globals.seed)?;
    let path = output_path(a.output.as_ref(), globals, "vqe_trace.csv");
    let dest = emit(&path, &manifest, &trace.to_csv(), out)?;

    let lines = {
        let mut v = vec![
            format!(
                "{} qubits, L = {}, {} restarts",
                n,
                circuit.n_params(),
                resolved.restarts
            ),
            format!(
                "best seed {seed}: {} iterations, final energy {:.10}",
                trace.rows.len() - 1,
                trace.final_cost()
            ),
        ];
        if n <= MAX_DENSE_QUBITS {
            let e0 = ground_energy(&h, n)?;
            v.push(format!(
                "exact ground energy {e0:.10}, gap {:.3e}",
                trace.final_cost() - e0
            ));
        }
        if dest != "stdout" {
            v.push(format!("trace written to {dest}"));
        }
        v
    };
    notes(&dest, &lines, out)
}
