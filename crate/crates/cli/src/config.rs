//! TOML configuration, merged as command line > file > defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vqa_scaling::cost::{
    Ansatz, BlockRule, ClassicalSimParams, GradientConvention, HardwareParams, ModelOptions,
};
use vqa_scaling::depth::DepthFormulaVariant;

pub const OUT_DIR_ENV: &str = "VQA_SCALING_OUT_DIR";

/// Everything a file may set. Every field is optional so that a partial file
/// only overrides what it names.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub hardware: HardwareFile,
    #[serde(default)]
    pub classical: ClassicalFile,
    #[serde(default)]
    pub model: ModelFile,
    #[serde(default)]
    pub sweep: SweepFile,
    #[serde(default)]
    pub vqe: VqeFile,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareFile {
    pub t_single: Option<f64>,
    pub t_double: Option<f64>,
    pub t_init_read: Option<f64>,
    pub include_init_read: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalFile {
    pub t_10: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub convention: Option<String>,
    pub depth_variant: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub ansatz: Option<Vec<String>>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub block_rule: Option<String>,
    pub n_sample: Option<Vec<f64>>,
    pub n_iterate: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VqeFile {
    pub learning_rate: Option<f64>,
    pub iterations: Option<usize>,
    pub shots: Option<u64>,
    pub tolerance: Option<f64>,
}

pub fn load(path: Option<&Path>) -> Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

pub fn parse_convention(s: &str) -> Result<GradientConvention> {
    match s {
        "2L" | "2l" | "two-per-parameter" => Ok(GradientConvention::TwoPerParameter),
        "L" | "l" | "paper" => Ok(GradientConvention::OnePerParameter),
        _ => bail!("unknown gradient convention {s:?} (expected 2L or L)"),
    }
}

pub fn parse_depth_variant(s: &str) -> Result<DepthFormulaVariant> {
    match s {
        "printed" => Ok(DepthFormulaVariant::Printed),
        "reconstructed" => Ok(DepthFormulaVariant::Reconstructed),
        _ => bail!("unknown depth variant {s:?} (expected printed or reconstructed)"),
    }
}

/// `n`, `n_squared` or `fixed:K`.
pub fn parse_block_rule(s: &str) -> Result<BlockRule> {
    match s {
        "n" => Ok(BlockRule::N),
        "n_squared" | "n2" => Ok(BlockRule::NSquared),
        _ => match s.strip_prefix("fixed:") {
            Some(k) => {
                let k: usize = k
                    .parse()
                    .with_context(|| format!("bad block count in {s:?}"))?;
                if k == 0 {
                    bail!("fixed block count must be at least 1");
                }
                Ok(BlockRule::Fixed(k))
            }
            None => bail!("unknown block rule {s:?} (expected n, n_squared or fixed:K)"),
        },
    }
}

pub fn parse_ansatz(name: &str, rule: BlockRule) -> Result<Ansatz> {
    match name {
        "uccsd" => Ok(Ansatz::Uccsd),
        "hea" => Ok(Ansatz::Hea(rule)),
        _ => bail!("unknown ansatz {name:?} (expected uccsd or hea)"),
    }
}

/// Model flags shared by `time`, `sweep` and `crossover`.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct ModelArgs {
    /// Gradient evaluations per iteration: 2L (default) or L
    #[arg(long)]
    pub convention: Option<String>,
    /// Shorthand for --convention L
    #[arg(long)]
    pub paper_convention: bool,
    /// UCCSD depth formula: printed or reconstructed
    #[arg(long)]
    pub depth_variant: Option<String>,
    /// Single-qubit gate time in seconds
    #[arg(long)]
    pub t_single: Option<f64>,
    /// Two-qubit gate time in seconds
    #[arg(long)]
    pub t_double: Option<f64>,
    /// Charge initialization and readout per sample
    #[arg(long)]
    pub include_init_read: bool,
    /// Classical time per gate at 10 qubits, in seconds
    #[arg(long)]
    pub t_10: Option<f64>,
}

/// Resolved model settings, serialized for the config hash.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedModel {
    pub t_single: f64,
    pub t_double: f64,
    pub t_init_read: f64,
    pub include_init_read: bool,
    pub t_10: f64,
    pub convention: String,
    pub depth_variant: String,
}

impl ResolvedModel {
    pub fn resolve(args: &ModelArgs, file: &FileConfig) -> Result<Self> {
        let hw = HardwareParams::default();
        let convention = if args.paper_convention {
            "L".to_string()
        } else {
            args.convention
                .clone()
                .or_else(|| file.model.convention.clone())
                .unwrap_or_else(|| "2L".into())
        };
        let depth_variant = args
            .depth_variant
            .clone()
            .or_else(|| file.model.depth_variant.clone())
            .unwrap_or_else(|| "printed".into());
        let resolved = Self {
            t_single: args
                .t_single
                .or(file.hardware.t_single)
                .unwrap_or(hw.t_single),
            t_double: args
                .t_double
                .or(file.hardware.t_double)
                .unwrap_or(hw.t_double),
            t_init_read: file.hardware.t_init_read.unwrap_or(hw.t_init_read),
            include_init_read: args.include_init_read
                || file.hardware.include_init_read.unwrap_or(false),
            t_10: args
                .t_10
                .or(file.classical.t_10)
                .unwrap_or(ClassicalSimParams::default().t_10),
            convention: parse_convention(&convention)?.name().to_string(),
            depth_variant: parse_depth_variant(&depth_variant)?.name().to_string(),
        };
        resolved.options()?.hw.validate()?;
        if resolved.t_10 <= 0.0 || resolved.t_10.is_nan() {
            bail!("t_10 must be positive, got {}", resolved.t_10);
        }
        Ok(resolved)
    }

    pub fn options(&self) -> Result<ModelOptions> {
        Ok(ModelOptions {
            hw: HardwareParams {
                t_single: self.t_single,
                t_double: self.t_double,
                t_init_read: self.t_init_read,
                include_init_read: self.include_init_read,
            },
            classical: ClassicalSimParams { t_10: self.t_10 },
            convention: parse_convention(&self.convention)?,
            depth_variant: parse_depth_variant(&self.depth_variant)?,
        })
    }
}

/// Output directory: flag, then environment, then file, then `results`.
/// Flag, then the environment value, then the config file, then `results`.
pub fn out_dir(flag: Option<&Path>, env: Option<PathBuf>, file: &FileConfig) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or(env)
        .or_else(|| file.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("results"))
}

/// Header lines written at the top of every CSV.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub version: &'static str,
    pub config_hash: String,
    pub seed: u64,
    pub timestamp: String,
}

impl RunManifest {
    /// Hashes the resolved settings, so equal effective configs share a hash
    /// whichever way they were spelled.
    pub fn new<T: Serialize>(resolved: &T, seed: u64) -> Result<Self> {
        let canonical = toml::to_string(resolved).context("serializing resolved config")?;
        let digest = Sha256::digest(canonical.as_bytes());
        Ok(Self {
            version: env!("CARGO_PKG_VERSION"),
            config_hash: digest.iter().map(|b| format!("{b:02x}")).collect(),
            seed,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        })
    }

    pub fn header(&self) -> String {
        format!(
            "# tool: vqa-scaling {}\n# config_sha256: {}\n# seed: {}\n# timestamp: {}\n",
            self.version, self.config_hash, self.seed, self.timestamp
        )
    }
}
