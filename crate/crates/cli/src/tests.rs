//! End-to-end runs through `execute`: exit codes, config precedence, outputs.

use std::path::Path;

use super::execute;

fn exec(args: &[&str]) -> (u8, String) {
    let mut out = Vec::new();
    let code = execute(
        std::iter::once("vqa-scaling").chain(args.iter().copied()),
        &mut out,
    );
    (code, String::from_utf8(out).unwrap())
}

fn body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

fn header_value(text: &str, key: &str) -> String {
    let prefix = format!("# {key}: ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("missing {key} in header"))
        .to_string()
}

fn columns(line: &str) -> Vec<&str> {
    line.split_whitespace()
        .rev()
        .take(2)
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect()
}

#[test]
fn depth_reports_printed_and_constructed() {
    let (code, s) = exec(&[
        "depth",
        "--ansatz",
        "uccsd",
        "--orbitals",
        "4",
        "--electrons",
        "2",
    ]);
    assert_eq!(code, 0);
    let line = |prefix: &str| s.lines().find(|l| l.starts_with(prefix)).unwrap();
    assert_eq!(columns(line("printed formula")), ["48", "56"]);
    assert_eq!(columns(line("reconstructed formula")), ["48", "80"]);
    assert_eq!(columns(line("constructed (blocks)")), ["48", "80"]);
}

#[test]
fn hea_depth_csv() {
    let (code, s) = exec(&[
        "depth", "--ansatz", "hea", "--qubits", "5", "--blocks", "3", "--csv",
    ]);
    assert_eq!(code, 0);
    let row: Vec<&str> = s.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(
        row,
        ["hea", "5", "", "3", "45", "9", "15", "9", "15", "9", "15", "9", "15"]
    );
}

#[test]
fn params_match_enumeration() {
    let (_, s) = exec(&["params", "--ansatz", "uccsd", "--orbitals", "8", "--csv"]);
    assert_eq!(s.lines().nth(1), Some("uccsd,8,4,,16,36,52"));
    let (_, s) = exec(&[
        "params", "--ansatz", "hea", "--qubits", "4", "--blocks", "2", "--csv",
    ]);
    assert_eq!(s.lines().nth(1), Some("hea,4,,2,,,24"));
}

#[test]
fn time_one_evaluation_per_parameter() {
    let (code, s) = exec(&[
        "time",
        "--ansatz",
        "hea",
        "--qubits",
        "4",
        "--blocks",
        "1",
        "--n-sample",
        "1e6",
        "--n-iterate",
        "1",
        "--paper-convention",
        "--csv",
    ]);
    assert_eq!(code, 0);
    let row: Vec<&str> = s.lines().nth(1).unwrap().split(',').collect();
    // 12 parameters, 3 single layers at 30 ns and 4 double layers at 60 ns
    let t: f64 = row[8].parse().unwrap();
    assert!(
        (t - 12.0 * 1e6 * (3.0 * 30e-9 + 4.0 * 60e-9)).abs() < 1e-9,
        "{t}"
    );
    assert_eq!(row[6], "L");
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["depth", "--ansatz", "uccsd"][..],
        &[
            "depth",
            "--ansatz",
            "uccsd",
            "--orbitals",
            "4",
            "--electrons",
            "5",
        ],
        &["depth", "--ansatz", "qaoa", "--qubits", "3"],
        &[
            "time",
            "--ansatz",
            "hea",
            "--qubits",
            "4",
            "--blocks",
            "1",
            "--n-sample",
            "-1",
        ],
        &["sweep", "--n-min", "9", "--n-max", "3", "--output", "-"],
        &["sweep", "--block-rule", "cubic", "--output", "-"],
        &["vqe"],
        &["frobnicate"],
    ] {
        assert_eq!(exec(args).0, 2, "{args:?}");
    }
}

#[test]
fn hamiltonian_parse_error_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.txt");
    std::fs::write(&path, "1.0 Z0\n0.5 Q1\n").unwrap();
    let (code, _) = exec(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "vqe",
        "--hamiltonian",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn vqe_from_file_reaches_ground_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.txt");
    std::fs::write(&path, "# two coupled spins\n1.0 Z0 Z1\n0.5 X0\n0.5 X1\n").unwrap();
    let (code, s) = exec(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "vqe",
        "--hamiltonian",
        path.to_str().unwrap(),
        "--blocks",
        "2",
    ]);
    assert_eq!(code, 0, "{s}");
    let gap: f64 = s
        .lines()
        .find_map(|l| l.split("gap ").nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!(gap.abs() < 1e-5, "{s}");
    let trace = std::fs::read_to_string(dir.path().join("vqe_trace.csv")).unwrap();
    assert!(body(&trace).starts_with("iteration,cost,grad_norm,evaluations"));
}

#[test]
fn verify_commands_pass() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for args in [
        &["verify", "psr", "--max-qubits", "4", "--circuits", "10"][..],
        &[
            "verify",
            "rank",
            "--qubits",
            "3",
            "--instances",
            "6",
            "--max-params",
            "6",
        ],
        &["verify", "monomial", "--instances", "6"],
        &[
            "--out-dir",
            d,
            "verify",
            "depth",
            "--max-orbitals",
            "6",
            "--max-qubits",
            "5",
            "--max-blocks",
            "3",
            "--csv",
        ],
    ] {
        let (code, s) = exec(args);
        assert_eq!(code, 0, "{args:?}: {s}");
        assert!(s.lines().last().unwrap().starts_with("PASS"));
    }
    assert!(dir.path().join("verify_depth_uccsd.csv").exists());
    assert!(dir.path().join("verify_depth_hea.csv").exists());
}

fn sweep_with(config: Option<&Path>, extra: &[&str]) -> String {
    let cfg = config.map(|p| p.to_str().unwrap().to_string());
    let mut args = Vec::new();
    if let Some(c) = &cfg {
        args.extend(["--config", c.as_str()]);
    }
    args.extend(["sweep", "--output", "-", "--n-min", "4", "--n-max", "8"]);
    args.extend(extra);
    let (code, s) = exec(&args);
    assert_eq!(code, 0, "{args:?}");
    s
}

#[test]
fn sweep_header_and_schema() {
    let s = sweep_with(None, &["--seed", "5"]);
    assert!(header_value(&s, "tool").starts_with("vqa-scaling "));
    assert_eq!(header_value(&s, "seed"), "5");
    assert_eq!(header_value(&s, "config_sha256").len(), 64);
    let b = body(&s);
    let mut lines = b.lines();
    assert_eq!(
        lines.next(),
        Some("ansatz,n,n_e,P,N_sample,N_iterate,N_gradient_convention,depth_variant,t_quantum_s,t_classical_s")
    );
    // uccsd at 4, 6, 8 and hea at 4..=8, each over 5 sample and 3 iteration counts
    assert_eq!(lines.count(), (3 + 5) * 5 * 3);
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "seed = 9\n[model]\nconvention = \"L\"\n[sweep]\nansatz = [\"hea\"]\nn_sample = [1e6]\nn_iterate = [1e2]\n",
    )
    .unwrap();
    let from_file = sweep_with(Some(&cfg), &[]);
    assert_eq!(header_value(&from_file, "seed"), "9");
    let b = body(&from_file);
    assert_eq!(b.lines().count(), 1 + 5);
    assert!(b
        .lines()
        .skip(1)
        .all(|l| l.starts_with("hea,") && l.contains(",L,")));

    let overridden = sweep_with(Some(&cfg), &["--convention", "2L", "--seed", "1"]);
    assert_eq!(header_value(&overridden, "seed"), "1");
    assert!(body(&overridden)
        .lines()
        .skip(1)
        .all(|l| l.contains(",2L,")));
    assert_ne!(
        header_value(&from_file, "config_sha256"),
        header_value(&overridden, "config_sha256")
    );
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[sweep]\nn_maximum = 3\n").unwrap();
    let (code, _) = exec(&["--config", cfg.to_str().unwrap(), "sweep", "--output", "-"]);
    assert_eq!(code, 2);
}

#[test]
fn crossover_writes_curve_into_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let (code, s) = exec(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "crossover",
        "--n-max",
        "30",
    ]);
    assert_eq!(code, 0);
    assert!(s.contains("crossover at n = 16"), "{s}");
    let curve = std::fs::read_to_string(dir.path().join("crossover_uccsd.csv")).unwrap();
    assert_eq!(body(&curve).lines().count(), 1 + 14);
}

#[test]
fn worker_count_does_not_change_rows() {
    let one = sweep_with(None, &["--workers", "1"]);
    let many = sweep_with(None, &["--workers", "8"]);
    assert_eq!(body(&one), body(&many));
}

#[test]
fn seeded_vqe_traces_repeat() {
    let trace = |seed: &str| {
        let (code, s) = exec(&[
            "--seed",
            seed,
            "vqe",
            "--ising",
            "3",
            "--blocks",
            "1",
            "--iterations",
            "20",
            "--shots",
            "100",
            "--output",
            "-",
        ]);
        assert_eq!(code, 0);
        body(&s)
    };
    let (a, b, c) = (trace("3"), trace("3"), trace("4"));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with("iteration,cost,grad_norm,evaluations"));
}
