//! Command-line surface: `calibrate`, `experiment` and `gen-data`.
//!
//! Settings resolve as flags, then an optional JSON config file, then the
//! built-in defaults. Exit codes: 0 success, 1 usage or data error,
//! 2 calibration budget exhausted.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bootstrap::make_plan;
use crate::calib::{run_method, with_workers, CalibConfig, CalibrationResult, KestenRule, Method};
use crate::error::{GpcError, Result};
use crate::experiments::{
    gen_linreg_data, load_saheart, run_paired_experiment, ExperimentConfig, ExperimentData, SynthConfig,
    SAHEART_DEFAULT_COLUMNS,
};
use crate::model::{Dataset, LinearRegression, Model, ModelKind, SvmClassifier};
use crate::numkit::mix_seed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

pub const DEFAULT_SEED: u64 = 20_240_501;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Sa,
    Wp,
    Both,
}

impl MethodChoice {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::Sa => vec![Method::Sa],
            MethodChoice::Wp => vec![Method::Wp],
            MethodChoice::Both => vec![Method::Sa, Method::Wp],
        }
    }
}

impl std::str::FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "sa" => Ok(MethodChoice::Sa),
            "wp" => Ok(MethodChoice::Wp),
            "both" => Ok(MethodChoice::Both),
            other => Err(format!("unknown method `{other}` (expected sa, wp or both)")),
        }
    }
}

/// Fully resolved settings for a command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    pub method: MethodChoice,
    pub alpha: f64,
    pub eps: f64,
    pub b: usize,
    /// Kept draws per replicate; `None` picks the model default.
    pub draws: Option<usize>,
    pub warmup: Option<usize>,
    pub eta0: f64,
    pub ess_frac: f64,
    pub seed: u64,
    pub max_outer: usize,
    pub max_inner: usize,
    pub kesten_variant: KestenRule,
    pub reset_kesten_inner: bool,
    pub out_dir: PathBuf,
    pub n: usize,
    pub datasets: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::Linreg,
            method: MethodChoice::Both,
            alpha: 0.05,
            eps: 0.005,
            b: 100,
            draws: None,
            warmup: None,
            eta0: 1.0,
            ess_frac: 0.25,
            seed: DEFAULT_SEED,
            max_outer: 50,
            max_inner: 100,
            kesten_variant: KestenRule::Turn,
            reset_kesten_inner: false,
            out_dir: PathBuf::from("gpc-out"),
            n: 100,
            datasets: 50,
        }
    }
}

impl RunConfig {
    pub fn draws(&self) -> usize {
        self.draws.unwrap_or(match self.model {
            ModelKind::Linreg => 1000,
            ModelKind::Svm => 2000,
        })
    }

    pub fn warmup(&self) -> usize {
        self.warmup.unwrap_or(500)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(GpcError::config("alpha", format!("must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.ess_frac > 0.0 && self.ess_frac < 1.0) {
            return Err(GpcError::config("ess_frac", format!("must lie in (0, 1), got {}", self.ess_frac)));
        }
        for (field, v) in [("eps", self.eps), ("eta0", self.eta0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GpcError::config(field, format!("must be positive, got {v}")));
            }
        }
        for (field, v) in [
            ("b", self.b),
            ("draws", self.draws()),
            ("max_outer", self.max_outer),
            ("max_inner", self.max_inner),
            ("n", self.n),
            ("datasets", self.datasets),
        ] {
            if v == 0 {
                return Err(GpcError::config(field, "must be positive"));
            }
        }
        self.calib_config().validate()
    }

    pub fn calib_config(&self) -> CalibConfig {
        CalibConfig {
            alpha: self.alpha,
            eps: self.eps,
            draws: self.draws(),
            warmup: self.warmup(),
            eta0: self.eta0,
            max_outer: self.max_outer,
            max_inner: self.max_inner,
            ess_frac: self.ess_frac,
            kesten: self.kesten_variant,
            reset_kesten_inner: self.reset_kesten_inner,
            seed: mix_seed(self.seed, 0x4D43),
        }
    }

    pub fn plan_seed(&self) -> u64 {
        mix_seed(self.seed, 0x504C)
    }

    pub fn build_model(&self) -> Box<dyn Model> {
        match self.model {
            ModelKind::Linreg => Box::new(LinearRegression::default()),
            ModelKind::Svm => Box::new(SvmClassifier::default()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gpc", version, about = "Calibrate the learning rate of generalized posteriors")]
pub struct Cli {
    /// Worker threads for per-replicate work; results do not depend on it.
    #[arg(long, global = true, env = "GPC_WORKERS")]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Calibrate one dataset.
    Calibrate {
        #[command(flatten)]
        opts: RunArgs,
        /// CSV with a `y` column, or the raw heart-disease file (`chd` column).
        dataset: PathBuf,
    },
    /// Seed-matched comparison of the methods over many runs.
    Experiment {
        #[command(flatten)]
        opts: RunArgs,
        /// Rows per synthetic dataset (linreg).
        #[arg(long)]
        n: Option<usize>,
        /// Number of datasets (linreg) or seeds (svm).
        #[arg(long)]
        datasets: Option<usize>,
        /// Heart-disease CSV for `--model svm`.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Write a synthetic misspecified-regression dataset as CSV.
    GenData {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// JSON file with `RunConfig` fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<ModelKind>,
    #[arg(long)]
    pub method: Option<MethodChoice>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Bootstrap replicates.
    #[arg(long = "b")]
    pub b: Option<usize>,
    /// Kept draws per replicate.
    #[arg(long = "draws", alias = "m")]
    pub draws: Option<usize>,
    #[arg(long)]
    pub warmup: Option<usize>,
    #[arg(long)]
    pub eta0: Option<f64>,
    #[arg(long)]
    pub ess_frac: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_outer: Option<usize>,
    #[arg(long)]
    pub max_inner: Option<usize>,
    #[arg(long)]
    pub kesten: Option<KestenRule>,
    #[arg(long)]
    pub reset_kesten_inner: bool,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

impl RunArgs {
    /// Flags over the config file over defaults.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                serde_json::from_str(&text).map_err(|e| GpcError::config("config", e.to_string()))?
            }
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($field:ident => $target:ident),* $(,)?) => {
                $(if let Some(v) = self.$field.clone() { cfg.$target = v; })*
            };
        }
        take!(
            model => model, method => method, alpha => alpha, eps => eps, b => b,
            eta0 => eta0, ess_frac => ess_frac, seed => seed, max_outer => max_outer,
            max_inner => max_inner, kesten => kesten_variant, out_dir => out_dir,
        );
        if self.draws.is_some() {
            cfg.draws = self.draws;
        }
        if self.warmup.is_some() {
            cfg.warmup = self.warmup;
        }
        if self.reset_kesten_inner {
            cfg.reset_kesten_inner = true;
        }
        Ok(cfg)
    }
}

/// Reads a calibration dataset; files with a `chd` column go through the
/// heart-disease loader with its default covariates.
pub fn load_dataset(path: &Path, model: ModelKind) -> Result<Dataset> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| GpcError::Ingestion(format!("cannot open {}: {e}", path.display())))?;
    let has_chd = rdr.headers()?.iter().any(|h| h.trim().trim_matches('"') == "chd");
    if has_chd {
        load_saheart(path, &SAHEART_DEFAULT_COLUMNS)
    } else {
        Dataset::from_csv(path, model.response_kind())
    }
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value)?)?;
    Ok(path)
}

/// Runs the configured method(s) on a dataset file and writes one JSON file
/// per method. Returns the exit code and the results.
pub fn cmd_calibrate(cfg: &RunConfig, dataset: &Path) -> Result<(i32, Vec<CalibrationResult>)> {
    cfg.validate()?;
    let data = load_dataset(dataset, cfg.model)?;
    let model = cfg.build_model();
    let plan = make_plan(data.len(), cfg.b, cfg.plan_seed())?;
    let calib = cfg.calib_config();
    let mut results = Vec::new();
    for method in cfg.method.methods() {
        let result = run_method(method, model.as_ref(), &data, &plan, &calib)?;
        write_json(&cfg.out_dir, &format!("calibration_{method}.json"), &result)?;
        println!("method={method} {}", result.summary_line());
        results.push(result);
    }
    let code = if results.iter().all(|r| r.converged) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    };
    Ok((code, results))
}

pub fn cmd_experiment(cfg: &RunConfig, data_path: Option<&Path>, workers: usize) -> Result<i32> {
    cfg.validate()?;
    let model = cfg.build_model();
    let data = match cfg.model {
        ModelKind::Linreg => ExperimentData::Synthetic {
            template: SynthConfig {
                n: cfg.n,
                ..Default::default()
            },
            count: cfg.datasets,
        },
        ModelKind::Svm => {
            let path = data_path.ok_or_else(|| GpcError::config("data", "svm experiments need --data <csv>"))?;
            ExperimentData::Fixed {
                data: load_dataset(path, ModelKind::Svm)?,
                runs: cfg.datasets,
            }
        }
    };
    let exp = ExperimentConfig {
        b: cfg.b,
        calib: cfg.calib_config(),
        methods: cfg.method.methods(),
        seed: cfg.seed,
        workers,
    };
    let report = run_paired_experiment(model.as_ref(), &data, &exp)?;
    std::fs::create_dir_all(&cfg.out_dir)?;
    let file = std::fs::File::create(cfg.out_dir.join("report.csv"))?;
    report.write_csv(file)?;
    let summary = report.summary();
    write_json(&cfg.out_dir, "summary.json", &summary)?;
    print!("{}", summary.table());
    for (id, method, msg) in &report.failures {
        eprintln!("dataset {id} method {method}: {msg}");
    }
    Ok(if report.failures.is_empty() { EXIT_OK } else { EXIT_ERROR })
}

pub fn cmd_gen_data(n: usize, seed: u64, out: Option<&Path>) -> Result<i32> {
    let data = gen_linreg_data(&SynthConfig {
        n,
        seed,
        ..Default::default()
    })?;
    match out {
        Some(path) => data.write_csv(std::fs::File::create(path)?)?,
        None => data.write_csv(std::io::stdout().lock())?,
    }
    Ok(EXIT_OK)
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Entry point used by the binary.
pub fn run(cli: Cli) -> i32 {
    let workers = cli.workers.unwrap_or_else(default_workers);
    let outcome = with_workers(workers, || match &cli.command {
        Command::Calibrate { opts, dataset } => opts
            .resolve()
            .and_then(|cfg| cmd_calibrate(&cfg, dataset))
            .map(|(code, _)| code),
        Command::Experiment {
            opts,
            n,
            datasets,
            data,
        } => opts.resolve().and_then(|mut cfg| {
            if let Some(n) = n {
                cfg.n = *n;
            }
            if let Some(d) = datasets {
                cfg.datasets = *d;
            }
            cmd_experiment(&cfg, data.as_deref(), workers)
        }),
        Command::GenData { n, seed, out } => cmd_gen_data(*n, *seed, out.as_deref()),
    });
    match outcome.and_then(|r| r) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_flags_over_file_over_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"alpha": 0.1, "b": 40, "model": "svm"}"#).unwrap();
        let args = RunArgs {
            config: Some(path),
            b: Some(7),
            ..Default::default()
        };
        let cfg = args.resolve().unwrap();
        assert_eq!(cfg.alpha, 0.1);
        assert_eq!(cfg.b, 7);
        assert_eq!(cfg.model, ModelKind::Svm);
        assert_eq!(cfg.draws(), 2000);
        assert_eq!(cfg.eps, 0.005);
    }

    #[test]
    fn validation_names_field() {
        let cfg = RunConfig {
            alpha: 1.5,
            ..Default::default()
        };
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("`alpha`"), "{err}");
        let cfg = RunConfig {
            ess_frac: 0.0,
            ..Default::default()
        };
        assert!(cfg.validate().unwrap_err().to_string().contains("ess_frac"));
    }

    #[test]
    fn unknown_config_keys_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"alpah": 0.1}"#).unwrap();
        let args = RunArgs {
            config: Some(path),
            ..Default::default()
        };
        assert!(args.resolve().is_err());
    }
}
