use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::synth::{gen_linreg_data, SynthConfig};
use crate::bootstrap::make_plan;
use crate::calib::{run_method, CalibConfig, CalibrationResult, Method};
use crate::error::{GpcError, Result};
use crate::model::{format_float, Dataset, Model};
use crate::numkit::mix_seed;

const RUN_TAG: u64 = 0x0052_554E;
const PLAN_TAG: u64 = 0x504C_414E;
const MCMC_TAG: u64 = 0x4D43_4D43;

/// Where each run's data comes from.
#[derive(Clone, Debug)]
pub enum ExperimentData {
    /// A fresh synthetic dataset per run, seeded from the run's seed.
    Synthetic { template: SynthConfig, count: usize },
    /// The same dataset for every run; only the random seeds change.
    Fixed { data: Dataset, runs: usize },
}

impl ExperimentData {
    fn runs(&self) -> usize {
        match self {
            ExperimentData::Synthetic { count, .. } => *count,
            ExperimentData::Fixed { runs, .. } => *runs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub b: usize,
    pub calib: CalibConfig,
    pub methods: Vec<Method>,
    pub seed: u64,
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            b: 100,
            calib: CalibConfig::default(),
            methods: vec![Method::Sa, Method::Wp],
            seed: 20_240_501,
            workers: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub dataset_id: usize,
    pub method: Method,
    pub eta_hat: f64,
    pub converged: bool,
    pub outer_iterations: usize,
    pub wall_ms: f64,
    /// Whether the calibrated box from the original data holds the true
    /// coefficients; only known for synthetic data.
    pub truth_covered: Option<bool>,
    pub seed: u64,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    pub workers: usize,
    /// Runs that failed outright, as `(dataset_id, method, message)`.
    pub failures: Vec<(usize, Method, String)>,
}

pub const REPORT_HEADER: [&str; 8] = [
    "dataset_id",
    "method",
    "eta_hat",
    "converged",
    "outer_iterations",
    "wall_ms",
    "truth_covered",
    "seed",
];

/// Seeds of run `id`: the run seed (recorded in the report), the plan seed
/// and the MCMC seed. Both methods of a pair use the same three.
pub fn run_seeds(base: u64, id: usize) -> (u64, u64, u64) {
    let run = mix_seed(base, RUN_TAG ^ id as u64);
    (run, mix_seed(run, PLAN_TAG), mix_seed(run, MCMC_TAG))
}

fn truth_covered(result: &CalibrationResult, beta_true: &[f64]) -> Option<bool> {
    let coords = &result.original_box.coords;
    if coords.iter().any(|&k| k >= beta_true.len()) {
        return None;
    }
    let truth: Vec<f64> = coords.iter().map(|&k| beta_true[k]).collect();
    Some(result.original_box.contains(&truth))
}

/// Runs every requested method on every dataset with seed-matched plans and
/// MCMC streams. Individual failures are recorded, not propagated.
pub fn run_paired_experiment(
    model: &dyn Model,
    data: &ExperimentData,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    cfg.calib.validate()?;
    if cfg.methods.is_empty() {
        return Err(GpcError::config("methods", "at least one method is required"));
    }
    if cfg.b == 0 {
        return Err(GpcError::config("b", "need at least one bootstrap replicate"));
    }
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for id in 0..data.runs() {
        let (run_seed, plan_seed, mcmc_seed) = run_seeds(cfg.seed, id);
        let (dataset, beta_true) = match data {
            ExperimentData::Synthetic { template, .. } => {
                let synth = SynthConfig {
                    seed: run_seed,
                    ..template.clone()
                };
                (gen_linreg_data(&synth)?, Some(template.beta_true.clone()))
            }
            ExperimentData::Fixed { data, .. } => (data.clone(), None),
        };
        let plan = make_plan(dataset.len(), cfg.b, plan_seed)?;
        let calib = CalibConfig {
            seed: mcmc_seed,
            ..cfg.calib.clone()
        };
        for &method in &cfg.methods {
            match run_method(method, model, &dataset, &plan, &calib) {
                Ok(result) => rows.push(ExperimentRow {
                    dataset_id: id,
                    method,
                    eta_hat: result.eta_hat,
                    converged: result.converged,
                    outer_iterations: result.outer_iterations,
                    wall_ms: result.wall_ms,
                    truth_covered: beta_true.as_deref().and_then(|b| truth_covered(&result, b)),
                    seed: run_seed,
                    n: dataset.len(),
                }),
                Err(e) => failures.push((id, method, e.to_string())),
            }
        }
    }
    Ok(ExperimentReport {
        rows,
        workers: cfg.workers,
        failures,
    })
}

/// Linear-interpolation quantile of an unsorted sample.
fn quantile_linear(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let h = (v.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

impl Spread {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        Some(Self {
            median: quantile_linear(values, 0.5),
            q1: quantile_linear(values, 0.25),
            q3: quantile_linear(values, 0.75),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub n: usize,
    pub runs: usize,
    pub converged: usize,
    pub wall_ms: Spread,
    pub outer_iterations: Spread,
    pub eta_hat: Spread,
    pub truth_coverage: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub workers: usize,
    pub groups: Vec<MethodSummary>,
}

impl ExperimentReport {
    pub fn rows_for(&self, method: Method) -> impl Iterator<Item = &ExperimentRow> {
        self.rows.iter().filter(move |r| r.method == method)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(REPORT_HEADER)?;
        for r in &self.rows {
            w.write_record([
                r.dataset_id.to_string(),
                r.method.to_string(),
                format_float(r.eta_hat),
                u8::from(r.converged).to_string(),
                r.outer_iterations.to_string(),
                format!("{:.3}", r.wall_ms),
                r.truth_covered.map(|c| u8::from(c).to_string()).unwrap_or_default(),
                r.seed.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Median and interquartile range per `(method, N)`.
    pub fn summary(&self) -> ExperimentSummary {
        let mut groups: BTreeMap<(usize, String), Vec<&ExperimentRow>> = BTreeMap::new();
        for r in &self.rows {
            groups.entry((r.n, r.method.to_string())).or_default().push(r);
        }
        let groups = groups
            .into_values()
            .map(|rows| {
                let col = |f: fn(&ExperimentRow) -> f64| rows.iter().map(|r| f(r)).collect::<Vec<_>>();
                let covered: Vec<bool> = rows.iter().filter_map(|r| r.truth_covered).collect();
                MethodSummary {
                    method: rows[0].method,
                    n: rows[0].n,
                    runs: rows.len(),
                    converged: rows.iter().filter(|r| r.converged).count(),
                    wall_ms: Spread::of(&col(|r| r.wall_ms)).expect("non-empty group"),
                    outer_iterations: Spread::of(&col(|r| r.outer_iterations as f64)).expect("non-empty group"),
                    eta_hat: Spread::of(&col(|r| r.eta_hat)).expect("non-empty group"),
                    truth_coverage: (!covered.is_empty())
                        .then(|| covered.iter().filter(|c| **c).count() as f64 / covered.len() as f64),
                }
            })
            .collect();
        ExperimentSummary {
            workers: self.workers,
            groups,
        }
    }
}

impl ExperimentSummary {
    /// Plain-text table: median (q1, q3) of time and iterations per method.
    pub fn table(&self) -> String {
        let mut out = String::from("   N  method  time_ms (q1, q3)              iterations (q1, q3)   coverage\n");
        for g in &self.groups {
            out.push_str(&format!(
                "{:>4}  {:<6}  {:>9.1} ({:>9.1}, {:>9.1})  {:>5.1} ({:>4.1}, {:>4.1})       {}\n",
                g.n,
                g.method,
                g.wall_ms.median,
                g.wall_ms.q1,
                g.wall_ms.q3,
                g.outer_iterations.median,
                g.outer_iterations.q1,
                g.outer_iterations.q3,
                g.truth_coverage.map(|c| format!("{:.3}", c)).unwrap_or_else(|| "-".into()),
            ));
        }
        out
    }
}
