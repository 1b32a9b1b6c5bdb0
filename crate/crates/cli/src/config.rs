//! Run configuration: JSON file defaults overridden by flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Master seed for every random stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Kernel floor δ, in (0, 1/9).
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// uniform | delta-floor | periodic | file:<path>
    #[arg(long, global = true)]
    pub kernel: Option<String>,
    /// Sets both policies at once; --alice / --bob take precedence.
    #[arg(long, global = true)]
    pub policies: Option<String>,
    #[arg(long, global = true)]
    pub alice: Option<String>,
    #[arg(long, global = true)]
    pub bob: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON file supplying defaults for any of the flags above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Same keys as the flags, all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    steps: Option<usize>,
    trials: Option<usize>,
    delta: Option<f64>,
    kernel: Option<String>,
    policies: Option<String>,
    alice: Option<String>,
    bob: Option<String>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KernelSel {
    Uniform,
    DeltaFloor,
    Periodic,
    File { path: PathBuf },
}

impl FromStr for KernelSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(KernelSel::Uniform),
            "delta-floor" => Ok(KernelSel::DeltaFloor),
            "periodic" => Ok(KernelSel::Periodic),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(KernelSel::File { path: p.into() }),
                _ => Err(format!(
                    "unknown kernel '{s}' (expected uniform, delta-floor, periodic or file:<path>)"
                )),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "table", rename_all = "kebab-case")]
pub enum PolicySel {
    QuantumMp,
    PeriodicSync,
    BestMemoryless,
    /// Seeded history-dependent randomized policy.
    Hashed,
    /// Explicit table for observations 1, 2, 3.
    Memoryless([String; 3]),
}

impl FromStr for PolicySel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quantum-mp" => Ok(PolicySel::QuantumMp),
            "periodic-sync" => Ok(PolicySel::PeriodicSync),
            "best-memoryless" => Ok(PolicySel::BestMemoryless),
            "hashed" => Ok(PolicySel::Hashed),
            _ => {
                let table = s.strip_prefix("memoryless:").ok_or_else(|| {
                    format!(
                        "unknown policy '{s}' (expected quantum-mp, periodic-sync, \
                         best-memoryless, hashed or memoryless:<a>,<b>,<c>)"
                    )
                })?;
                let parts: Vec<String> = table.split(',').map(str::to_string).collect();
                <[String; 3]>::try_from(parts)
                    .map(PolicySel::Memoryless)
                    .map_err(|_| format!("memoryless table needs three actions: '{table}'"))
            }
        }
    }
}

/// Fully resolved settings; echoed verbatim in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub seed: Option<u64>,
    pub steps: usize,
    pub trials: usize,
    pub delta: f64,
    pub kernel: KernelSel,
    pub alice: PolicySel,
    pub bob: PolicySel,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub const DEFAULT_STEPS: usize = 10_000;
pub const DEFAULT_TRIALS: usize = 9_000;
pub const DEFAULT_DELTA: f64 = 0.05;

fn load_file(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

impl RunConfig {
    pub fn resolve(command: &str, args: &CommonArgs) -> Result<Self, String> {
        let file = match &args.config {
            Some(p) => load_file(p)?,
            None => FileConfig::default(),
        };
        let pick = |flag: &Option<String>, fallback: &Option<String>| {
            flag.clone().or_else(|| fallback.clone())
        };
        let both = pick(&args.policies, &file.policies);
        let alice = pick(&args.alice, &file.alice).or_else(|| both.clone());
        let bob = pick(&args.bob, &file.bob).or(both);

        let delta = args.delta.or(file.delta).unwrap_or(DEFAULT_DELTA);
        if !(delta > 0.0 && delta < 1.0 / 9.0) {
            return Err(format!("delta must lie in (0, 1/9), got {delta}"));
        }
        let steps = args.steps.or(file.steps).unwrap_or(DEFAULT_STEPS);
        let trials = args.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS);
        if steps == 0 || trials == 0 {
            return Err("steps and trials must be positive".into());
        }
        Ok(RunConfig {
            command: command.to_string(),
            seed: args.seed.or(file.seed),
            steps,
            trials,
            delta,
            kernel: pick(&args.kernel, &file.kernel)
                .as_deref()
                .unwrap_or("uniform")
                .parse()?,
            alice: alice.as_deref().unwrap_or("quantum-mp").parse()?,
            bob: bob.as_deref().unwrap_or("quantum-mp").parse()?,
            out: args.out.clone().or(file.out),
            format: args.format.or(file.format).unwrap_or(Format::Json),
        })
    }

    /// The seed, for commands that draw random numbers.
    pub fn require_seed(&self) -> Result<u64, String> {
        self.seed
            .ok_or_else(|| format!("'{}' is stochastic and needs --seed", self.command))
    }
}
