//! `vqa-scaling`: circuit depth, parameter and wall-clock reports for
//! variational quantum algorithms, plus desk-scale verification runs.

mod commands;
mod config;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::ModelArgs;

#[derive(Parser)]
#[command(name = "vqa-scaling", version, about, long_about = None)]
struct Cli {
    /// TOML config file; command-line flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for CSV outputs (also VQA_SCALING_OUT_DIR)
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Seed for every random draw
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gate-layer depths: formulas against constructed circuits
    Depth(SpecArgs),
    /// Parameter count L
    Params(SpecArgs),
    /// Quantum and classical wall-clock time for one instance
    Time(TimeArgs),
    /// Time model over a grid of sizes and sample counts, as CSV
    Sweep(SweepArgs),
    /// First qubit count where quantum execution beats classical simulation
    Crossover(CrossoverArgs),
    /// Gradient-descent VQE on a Hamiltonian file
    Vqe(VqeArgs),
    /// Run a verification suite; exits 1 on failure
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Args, Clone)]
pub struct SpecArgs {
    /// uccsd or hea
    #[arg(long)]
    pub ansatz: String,
    /// Spin orbitals n_o (UCCSD)
    #[arg(long)]
    pub orbitals: Option<usize>,
    /// Electrons n_e (UCCSD; default n_o/2)
    #[arg(long)]
    pub electrons: Option<usize>,
    /// Qubits n (HEA)
    #[arg(long)]
    pub qubits: Option<usize>,
    /// Blocks P (HEA)
    #[arg(long)]
    pub blocks: Option<usize>,
    /// Print one CSV row instead of text
    #[arg(long)]
    pub csv: bool,
}

#[derive(Args)]
pub struct TimeArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Shots per cost evaluation
    #[arg(long, default_value_t = 1e6)]
    pub n_sample: f64,
    /// Optimizer iterations
    #[arg(long, default_value_t = 1e2)]
    pub n_iterate: f64,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Ansatz families, comma separated (uccsd,hea)
    #[arg(long, value_delimiter = ',')]
    pub ansatz: Option<Vec<String>>,
    #[arg(long)]
    pub n_min: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// HEA blocks: n, n_squared or fixed:K
    #[arg(long)]
    pub block_rule: Option<String>,
    /// Shot counts, comma separated
    #[arg(long, value_delimiter = ',')]
    pub n_sample: Option<Vec<f64>>,
    /// Iteration counts, comma separated
    #[arg(long, value_delimiter = ',')]
    pub n_iterate: Option<Vec<f64>>,
    /// Output file, or - for stdout (default <out-dir>/sweep.csv)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Args)]
pub struct CrossoverArgs {
    /// uccsd or hea
    #[arg(long, default_value = "uccsd")]
    pub ansatz: String,
    /// HEA blocks: n, n_squared or fixed:K
    #[arg(long, default_value = "n")]
    pub block_rule: String,
    #[arg(long, default_value_t = 1e6)]
    pub n_sample: f64,
    #[arg(long, default_value_t = 1e2)]
    pub n_iterate: f64,
    #[arg(long, default_value_t = 4)]
    pub n_min: usize,
    #[arg(long, default_value_t = 60)]
    pub n_max: usize,
    /// Curve CSV path, or - for stdout (default <out-dir>/crossover_<ansatz>.csv)
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Args)]
pub struct VqeArgs {
    /// Hamiltonian file (one `<coeff> <factors>` term per line)
    #[arg(long, conflicts_with = "ising")]
    pub hamiltonian: Option<PathBuf>,
    /// Use the open transverse-field Ising chain on this many sites instead
    #[arg(long)]
    pub ising: Option<usize>,
    /// Transverse field h of the built-in Ising chain (coupling J = 1)
    #[arg(long, default_value_t = 1.0)]
    pub field: f64,
    /// hea or uccsd
    #[arg(long, default_value = "hea")]
    pub ansatz: String,
    /// HEA blocks
    #[arg(long, default_value_t = 2)]
    pub blocks: usize,
    /// UCCSD electrons (orbitals = qubits of the Hamiltonian)
    #[arg(long)]
    pub electrons: Option<usize>,
    /// Shots per Pauli term; 0 for exact expectations
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Stop when |ΔC| or the gradient norm drops below this
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Use central finite differences with this step instead of parameter shift
    #[arg(long)]
    pub fd_step: Option<f64>,
    /// Restart from this many seeds (seed, seed+1, …) and keep the best
    #[arg(long, default_value_t = 1)]
    pub restarts: u64,
    /// Trace CSV path, or - for stdout (default <out-dir>/vqe_trace.csv)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum VerifyCommand {
    /// Depth formulas against constructed circuits
    Depth {
        #[arg(long, default_value_t = 10)]
        max_orbitals: usize,
        #[arg(long, default_value_t = 12)]
        max_qubits: usize,
        #[arg(long, default_value_t = 5)]
        max_blocks: usize,
        /// Also write the tables as CSV into the output directory
        #[arg(long)]
        csv: bool,
    },
    /// Gradient-sample rank on generic and redundant circuits
    Rank {
        /// Largest register for the generic instances
        #[arg(long, default_value_t = 4)]
        qubits: usize,
        #[arg(long, default_value_t = 20)]
        instances: usize,
        /// Largest parameter count for the generic instances
        #[arg(long, default_value_t = 12)]
        max_params: usize,
    },
    /// Parameter shift against central finite differences
    Psr {
        #[arg(long, default_value_t = 8)]
        max_qubits: usize,
        #[arg(long, default_value_t = 50)]
        circuits: usize,
        #[arg(long, default_value_t = 1e-5)]
        delta: f64,
    },
    /// Trigonometric monomial structure of small circuits
    Monomial {
        #[arg(long, default_value_t = 3)]
        max_qubits: usize,
        #[arg(long, default_value_t = 20)]
        instances: usize,
    },
}

pub struct Globals {
    pub file: config::FileConfig,
    pub out_dir: PathBuf,
    pub seed: u64,
}

fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<bool> {
    let file = config::load(cli.config.as_deref())?;
    let env_dir = std::env::var_os(config::OUT_DIR_ENV).map(PathBuf::from);
    let globals = Globals {
        out_dir: config::out_dir(cli.out_dir.as_deref(), env_dir, &file),
        seed: cli.seed.or(file.seed).unwrap_or(0),
        file,
    };
    match cli.command {
        Command::Depth(a) => commands::depth(&a, out).map(|_| true),
        Command::Params(a) => commands::params(&a, out).map(|_| true),
        Command::Time(a) => commands::time(&a, &globals, out).map(|_| true),
        Command::Sweep(a) => commands::sweep(&a, &globals, out).map(|_| true),
        Command::Crossover(a) => commands::crossover(&a, &globals, out).map(|_| true),
        Command::Vqe(a) => commands::vqe(&a, &globals, out).map(|_| true),
        Command::Verify(v) => verify::run(&v, &globals, out),
    }
}

/// 0 on success, 1 when a verification fails, 2 on bad input or I/O errors.
fn execute<I, T>(args: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn main() -> ExitCode {
    let mut out = std::io::stdout().lock();
    let code = execute(std::env::args_os(), &mut out);
    let _ = out.flush();
    ExitCode::from(code)
}

#[cfg(test)]
mod tests;
