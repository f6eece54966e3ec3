//! The outer calibration loop and its two update rules: a plain stochastic
//! approximation step per MCMC round (`sa`), or the weighted-particle inner
//! optimizer that explores new learning rates by reweighting (`wp`).

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::credible::{credible_box_with_weights, estimate_coverage, point_estimate_with_weights, CredibleSet};
use super::kesten::{sa_next_eta, KestenRule, ETA_MAX, ETA_MIN};
use super::reweight::{reweight, summarize};
use super::WeightedParticleSet;
use crate::bootstrap::BootstrapPlan;
use crate::error::{GpcError, Result};
use crate::model::{Dataset, Model};
use crate::numkit::{ess, replicate_stream_id, RandomStream};

const MCMC_TAG: u64 = 0x4D43_4D43;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sa,
    Wp,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Sa => "sa",
            Method::Wp => "wp",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CalibConfig {
    pub alpha: f64,
    pub eps: f64,
    pub draws: usize,
    pub warmup: usize,
    pub eta0: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    /// ESS threshold as a fraction of `draws`.
    pub ess_frac: f64,
    pub kesten: KestenRule,
    /// Restart the Kesten counter at 1 on entry to every inner loop.
    pub reset_kesten_inner: bool,
    /// Seed for every MCMC stream of the run.
    pub seed: u64,
}

impl Default for CalibConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            eps: 0.005,
            draws: 1000,
            warmup: 500,
            eta0: 1.0,
            max_outer: 50,
            max_inner: 100,
            ess_frac: 0.25,
            kesten: KestenRule::Turn,
            reset_kesten_inner: false,
            seed: 20_240_501,
        }
    }
}

impl CalibConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(GpcError::config("alpha", format!("must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.eps > 0.0) {
            return Err(GpcError::config("eps", format!("must be positive, got {}", self.eps)));
        }
        if self.draws < 2 {
            return Err(GpcError::config("draws", "need at least 2 draws per replicate"));
        }
        if !(ETA_MIN..=ETA_MAX).contains(&self.eta0) {
            return Err(GpcError::config(
                "eta0",
                format!("must lie in [{ETA_MIN}, {ETA_MAX}], got {}", self.eta0),
            ));
        }
        if self.max_outer == 0 {
            return Err(GpcError::config("max_outer", "must be at least 1"));
        }
        if self.max_inner == 0 {
            return Err(GpcError::config("max_inner", "must be at least 1"));
        }
        if !(self.ess_frac > 0.0 && self.ess_frac < 1.0) {
            return Err(GpcError::config("ess_frac", format!("must lie in (0, 1), got {}", self.ess_frac)));
        }
        Ok(())
    }

    pub fn ess_threshold(&self) -> f64 {
        self.ess_frac * self.draws as f64
    }
}

/// One trial of the inner loop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerTrial {
    pub outer: usize,
    pub u: usize,
    pub eta: f64,
    pub c_hat: f64,
    pub min_ess: f64,
    pub ess_original: f64,
    pub kesten_l: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub mcmc: u64,
    pub plan: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub method: Method,
    pub eta_hat: f64,
    pub converged: bool,
    pub outer_iterations: usize,
    pub total_sweeps: u64,
    pub wall_ms: f64,
    pub c_hat: f64,
    /// Learning rates at which MCMC was run, in order.
    pub eta_history: Vec<f64>,
    /// Coverage at each entry of `eta_history`.
    pub c_hat_history: Vec<f64>,
    pub inner_trace: Vec<InnerTrial>,
    pub kesten_l: u32,
    /// Point estimate from the original data at `eta_hat`.
    pub theta_hat: Vec<f64>,
    /// Credible box from the original data at `eta_hat`.
    pub original_box: CredibleSet,
    pub seeds: Seeds,
    pub b: usize,
    pub draws: usize,
}

impl CalibrationResult {
    pub fn summary_line(&self) -> String {
        format!(
            "eta_hat={} converged={} iters={}",
            self.eta_hat,
            u8::from(self.converged),
            self.outer_iterations
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Mutable state of the calibration state machine.
#[derive(Clone, Debug, Default)]
pub struct CalibrationState {
    pub s: usize,
    pub eta_history: Vec<f64>,
    pub l: u32,
    pub c_hat_history: Vec<f64>,
    pub inner_trace: Vec<InnerTrial>,
}

impl CalibrationState {
    pub fn new(eta0: f64) -> Self {
        Self {
            s: 0,
            eta_history: vec![eta0],
            l: 1,
            c_hat_history: Vec::new(),
            inner_trace: Vec::new(),
        }
    }

    pub fn current_eta(&self) -> f64 {
        *self.eta_history.last().expect("history starts with eta0")
    }
}

/// Coverage evaluation of a set of replicates under given weights.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub theta_hat: Vec<f64>,
    pub c_hat: f64,
    pub original_box: CredibleSet,
}

/// Draw `M` particles at `eta` for the original data and every bootstrap
/// replicate. Replicate `r` in round `round` always uses the same stream.
pub fn simulate_replicates(
    model: &dyn Model,
    data: &Dataset,
    plan: &BootstrapPlan,
    eta: f64,
    round: usize,
    cfg: &CalibConfig,
) -> Result<Vec<WeightedParticleSet>> {
    (0..=plan.b())
        .into_par_iter()
        .map(|r| {
            let run = || {
                let view = plan.view(data, r)?;
                let mut rng = RandomStream::derive(cfg.seed, MCMC_TAG, replicate_stream_id(round, r));
                model.simulate(eta, &view, cfg.draws, cfg.warmup, &mut rng)
            };
            run().map_err(|e| GpcError::Simulation {
                replicate: r,
                source: Box::new(e),
            })
        })
        .collect()
}

/// θ̂ from replicate 0 and the coverage of the bootstrap boxes.
pub fn evaluate(
    psets: &[WeightedParticleSet],
    weights: &[Vec<f64>],
    alpha: f64,
    coords: &[usize],
) -> Result<Evaluation> {
    if psets.len() < 2 || weights.len() != psets.len() {
        return Err(GpcError::domain("need the original set plus at least one bootstrap set"));
    }
    let estimate = point_estimate_with_weights(&psets[0], &weights[0])?;
    let projected = estimate.project(coords);
    let original_box = credible_box_with_weights(&psets[0], &weights[0], alpha, coords)?;
    let boxes: Vec<CredibleSet> = psets[1..]
        .par_iter()
        .zip(weights[1..].par_iter())
        .map(|(p, w)| credible_box_with_weights(p, w, alpha, coords))
        .collect::<Result<_>>()?;
    Ok(Evaluation {
        theta_hat: estimate.theta,
        c_hat: estimate_coverage(&projected, &boxes),
        original_box,
    })
}

fn uniform_weights(psets: &[WeightedParticleSet]) -> Result<Vec<Vec<f64>>> {
    psets.iter().map(|p| p.weights()).collect()
}

fn within_tolerance(c_hat: f64, cfg: &CalibConfig) -> bool {
    (c_hat - (1.0 - cfg.alpha)).abs() < cfg.eps
}

/// Result of one inner weighted-particle loop.
#[derive(Clone, Debug)]
pub enum InnerOutcome {
    /// `ι = 1`: a trial met the tolerance with enough ESS.
    Calibrated { eta_hat: f64, evaluation: Evaluation },
    /// `ι = 0`: the particles degenerated (or the budget ran out); run MCMC at `next_eta`.
    Continue { next_eta: f64, exhausted: bool },
}

/// Explore new learning rates by reweighting `psets` (all simulated at the
/// state's current η with the coverage of that round last in
/// `state.c_hat_history`).
pub fn gpc_wp_inner(
    state: &mut CalibrationState,
    psets: &[WeightedParticleSet],
    coords: &[usize],
    cfg: &CalibConfig,
) -> Result<InnerOutcome> {
    let threshold = cfg.ess_threshold();
    let eta_s = state.current_eta();
    if let Some(p) = psets.iter().find(|p| p.eta() != eta_s) {
        return Err(GpcError::Contract(format!(
            "particle set simulated at {} but state is at {eta_s}",
            p.eta()
        )));
    }
    let mut c_hat = *state
        .c_hat_history
        .last()
        .ok_or_else(|| GpcError::Contract("inner loop needs the coverage at the current eta".into()))?;
    let mut trajectory = state.eta_history.clone();
    let mut l = if cfg.reset_kesten_inner { 1 } else { state.l };
    let mut last_eta = eta_s;

    for u in 1..=cfg.max_inner {
        let (eta_trial, l_next) = sa_next_eta(&trajectory, l, c_hat, cfg.alpha, cfg.kesten);
        l = l_next;
        trajectory.push(eta_trial);
        last_eta = eta_trial;

        let moved: Vec<Vec<f64>> = psets
            .par_iter()
            .map(|p| reweight(p, eta_trial).map(|r| r.weights))
            .collect::<Result<_>>()?;
        let per_ess: Vec<f64> = moved.iter().map(|w| ess(w)).collect::<Result<_>>()?;
        let ess_summary = summarize(&per_ess);
        let evaluation = evaluate(psets, &moved, cfg.alpha, coords)?;
        c_hat = evaluation.c_hat;

        state.inner_trace.push(InnerTrial {
            outer: state.s,
            u,
            eta: eta_trial,
            c_hat,
            min_ess: ess_summary.min,
            ess_original: ess_summary.original,
            kesten_l: l,
        });
        if !cfg.reset_kesten_inner {
            state.l = l;
        }

        if within_tolerance(c_hat, cfg) && ess_summary.min >= threshold {
            return Ok(InnerOutcome::Calibrated {
                eta_hat: eta_trial,
                evaluation,
            });
        }
        if ess_summary.min < threshold {
            return Ok(InnerOutcome::Continue {
                next_eta: eta_trial,
                exhausted: false,
            });
        }
    }
    Ok(InnerOutcome::Continue {
        next_eta: last_eta,
        exhausted: true,
    })
}

struct RunContext<'a> {
    model: &'a dyn Model,
    data: &'a Dataset,
    plan: &'a BootstrapPlan,
    cfg: &'a CalibConfig,
    coords: Vec<usize>,
    started: Instant,
}

impl RunContext<'_> {
    fn finish(
        &self,
        method: Method,
        state: CalibrationState,
        eta_hat: f64,
        converged: bool,
        evaluation: Evaluation,
    ) -> CalibrationResult {
        if converged {
            assert!(
                within_tolerance(evaluation.c_hat, self.cfg),
                "converged result must satisfy the tolerance"
            );
        }
        let rounds = state.c_hat_history.len();
        let sweeps_per_round = ((self.plan.b() + 1) * (self.cfg.draws + self.cfg.warmup)) as u64;
        CalibrationResult {
            method,
            eta_hat,
            converged,
            outer_iterations: rounds,
            total_sweeps: sweeps_per_round * rounds as u64,
            wall_ms: self.started.elapsed().as_secs_f64() * 1e3,
            c_hat: evaluation.c_hat,
            eta_history: state.eta_history[..rounds].to_vec(),
            c_hat_history: state.c_hat_history,
            inner_trace: state.inner_trace,
            kesten_l: state.l,
            theta_hat: evaluation.theta_hat,
            original_box: evaluation.original_box,
            seeds: Seeds {
                mcmc: self.cfg.seed,
                plan: self.plan.master_seed(),
            },
            b: self.plan.b(),
            draws: self.cfg.draws,
        }
    }

    fn round(&self, state: &mut CalibrationState) -> Result<(Vec<WeightedParticleSet>, Evaluation)> {
        state.s += 1;
        let eta = state.current_eta();
        let psets = simulate_replicates(self.model, self.data, self.plan, eta, state.s, self.cfg)?;
        let evaluation = evaluate(&psets, &uniform_weights(&psets)?, self.cfg.alpha, &self.coords)?;
        state.c_hat_history.push(evaluation.c_hat);
        Ok((psets, evaluation))
    }
}

fn start<'a>(
    model: &'a dyn Model,
    data: &'a Dataset,
    plan: &'a BootstrapPlan,
    cfg: &'a CalibConfig,
) -> Result<RunContext<'a>> {
    cfg.validate()?;
    if plan.n() != data.len() {
        return Err(GpcError::domain(format!(
            "bootstrap plan has N={} but dataset has {} rows",
            plan.n(),
            data.len()
        )));
    }
    let coords = model.coverage_coords(data.num_columns());
    let dim = model.param_dim(data.num_columns());
    if coords.is_empty() || coords.iter().any(|&k| k >= dim) {
        return Err(GpcError::config("coverage_coords", format!("must be non-empty indices below {dim}")));
    }
    Ok(RunContext {
        model,
        data,
        plan,
        cfg,
        coords,
        started: Instant::now(),
    })
}

/// Calibration with one stochastic-approximation step per MCMC round.
pub fn gpc_sa_run(
    model: &dyn Model,
    data: &Dataset,
    plan: &BootstrapPlan,
    cfg: &CalibConfig,
) -> Result<CalibrationResult> {
    let ctx = start(model, data, plan, cfg)?;
    let mut state = CalibrationState::new(cfg.eta0);
    loop {
        let (_, evaluation) = ctx.round(&mut state)?;
        let eta = state.current_eta();
        if within_tolerance(evaluation.c_hat, cfg) {
            return Ok(ctx.finish(Method::Sa, state, eta, true, evaluation));
        }
        if state.s >= cfg.max_outer {
            return Ok(ctx.finish(Method::Sa, state, eta, false, evaluation));
        }
        let (next, l) = sa_next_eta(&state.eta_history, state.l, evaluation.c_hat, cfg.alpha, cfg.kesten);
        state.l = l;
        state.eta_history.push(next);
    }
}

/// Calibration where each MCMC round is followed by a reweighting search.
pub fn gpc_wp_run(
    model: &dyn Model,
    data: &Dataset,
    plan: &BootstrapPlan,
    cfg: &CalibConfig,
) -> Result<CalibrationResult> {
    let ctx = start(model, data, plan, cfg)?;
    let mut state = CalibrationState::new(cfg.eta0);
    loop {
        let (psets, evaluation) = ctx.round(&mut state)?;
        let eta = state.current_eta();
        if within_tolerance(evaluation.c_hat, cfg) {
            return Ok(ctx.finish(Method::Wp, state, eta, true, evaluation));
        }
        match gpc_wp_inner(&mut state, &psets, &ctx.coords, cfg)? {
            InnerOutcome::Calibrated { eta_hat, evaluation } => {
                return Ok(ctx.finish(Method::Wp, state, eta_hat, true, evaluation));
            }
            InnerOutcome::Continue { next_eta, .. } => {
                if state.s >= cfg.max_outer {
                    return Ok(ctx.finish(Method::Wp, state, eta, false, evaluation));
                }
                state.eta_history.push(next_eta);
            }
        }
    }
}

pub fn run_method(
    method: Method,
    model: &dyn Model,
    data: &Dataset,
    plan: &BootstrapPlan,
    cfg: &CalibConfig,
) -> Result<CalibrationResult> {
    match method {
        Method::Sa => gpc_sa_run(model, data, plan, cfg),
        Method::Wp => gpc_wp_run(model, data, plan, cfg),
    }
}

/// Run `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| GpcError::config("workers", e.to_string()))?;
    Ok(pool.install(f))
}
