//! Homoskedastic Gaussian linear regression, `θ = (β, σ²)`, with
//! `β ~ N(0, ς² I)` and `σ² ~ IG(ϱ₁, ϱ₂)` (shape / rate).
//!
//! Tempered full conditionals used by the two-block Gibbs sampler:
//!
//! ```text
//! β | σ²  ~ N(V·ηX'y/σ², V),   V = (ηX'X/σ² + I/ς²)⁻¹
//! σ² | β  ~ IG(ϱ₁ + ηN/2, ϱ₂ + η·RSS(β)/2)
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{check_sim_args, Dataset, DatasetView, Model, ModelKind};
use crate::calib::WeightedParticleSet;
use crate::error::{GpcError, Result};
use crate::numkit::{inverse_gamma, mvn_canonical, LowerTriangular, RandomStream};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinRegHyper {
    /// Prior variance ς² of each coefficient.
    pub coef_prior_var: f64,
    /// Inverse-gamma shape ϱ₁.
    pub ig_shape: f64,
    /// Inverse-gamma rate ϱ₂.
    pub ig_rate: f64,
}

impl Default for LinRegHyper {
    fn default() -> Self {
        Self {
            coef_prior_var: 100.0,
            ig_shape: 1.0,
            ig_rate: 0.025,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LinearRegression {
    hyper: LinRegHyper,
    coverage: Option<Vec<usize>>,
}

/// `X'X`, `X'y` and `N` over a view.
#[derive(Clone, Debug)]
pub struct SufficientStats {
    pub k: usize,
    pub n: usize,
    pub xtx: Vec<f64>,
    pub xty: Vec<f64>,
}

impl SufficientStats {
    pub fn from_view(view: &DatasetView<'_>) -> Self {
        let k = view.base().num_columns();
        let mut xtx = vec![0.0; k * k];
        let mut xty = vec![0.0; k];
        for (y, x) in view.rows() {
            for i in 0..k {
                xty[i] += x[i] * y;
                for j in 0..=i {
                    xtx[i * k + j] += x[i] * x[j];
                }
            }
        }
        for i in 0..k {
            for j in 0..i {
                xtx[j * k + i] = xtx[i * k + j];
            }
        }
        Self {
            k,
            n: view.len(),
            xtx,
            xty,
        }
    }
}

fn residual_sum_of_squares(beta: &[f64], view: &DatasetView<'_>) -> f64 {
    view.rows()
        .map(|(y, x)| {
            let fit: f64 = x.iter().zip(beta).map(|(a, b)| a * b).sum();
            (y - fit).powi(2)
        })
        .sum()
}

fn gaussian_log_lik(rss: f64, n: usize, sigma2: f64) -> f64 {
    -0.5 * n as f64 * (2.0 * PI * sigma2).ln() - rss / (2.0 * sigma2)
}

impl LinearRegression {
    pub fn new(hyper: LinRegHyper) -> Result<Self> {
        for (name, v) in [
            ("coef_prior_var", hyper.coef_prior_var),
            ("ig_shape", hyper.ig_shape),
            ("ig_rate", hyper.ig_rate),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GpcError::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            hyper,
            coverage: None,
        })
    }

    /// Overrides the default coverage coordinates (the coefficients).
    pub fn with_coverage_coords(mut self, coords: Vec<usize>) -> Self {
        self.coverage = Some(coords);
        self
    }

    pub fn hyper(&self) -> &LinRegHyper {
        &self.hyper
    }

    /// One draw of `β | σ²`.
    pub fn draw_beta(
        &self,
        eta: f64,
        sigma2: f64,
        stats: &SufficientStats,
        rng: &mut RandomStream,
    ) -> Result<Vec<f64>> {
        let k = stats.k;
        let scale = eta / sigma2;
        let mut precision: Vec<f64> = stats.xtx.iter().map(|v| v * scale).collect();
        for i in 0..k {
            precision[i * k + i] += 1.0 / self.hyper.coef_prior_var;
        }
        let chol = LowerTriangular::factor(k, &precision)?;
        let linear: Vec<f64> = stats.xty.iter().map(|v| v * scale).collect();
        Ok(mvn_canonical(&chol, &linear, rng))
    }

    /// One draw of `σ² | β` given the residual sum of squares at `β`.
    pub fn draw_sigma2(&self, eta: f64, rss: f64, n: usize, rng: &mut RandomStream) -> Result<f64> {
        inverse_gamma(
            self.hyper.ig_shape + eta * n as f64 / 2.0,
            self.hyper.ig_rate + eta * rss / 2.0,
            rng,
        )
    }
}

impl Default for LinearRegression {
    fn default() -> Self {
        Self::new(LinRegHyper::default()).expect("default hyperparameters are valid")
    }
}

impl Model for LinearRegression {
    fn kind(&self) -> ModelKind {
        ModelKind::Linreg
    }

    fn param_dim(&self, columns: usize) -> usize {
        columns + 1
    }

    fn param_names(&self, data: &Dataset) -> Vec<String> {
        let mut names: Vec<String> = data.column_names().iter().map(|c| format!("beta[{c}]")).collect();
        names.push("sigma2".into());
        names
    }

    fn coverage_coords(&self, columns: usize) -> Vec<usize> {
        self.coverage.clone().unwrap_or_else(|| (0..columns).collect())
    }

    fn log_pseudolik(&self, theta: &[f64], view: &DatasetView<'_>) -> Result<f64> {
        let k = view.base().num_columns();
        if theta.len() != k + 1 {
            return Err(GpcError::domain(format!(
                "theta has length {}, expected {}",
                theta.len(),
                k + 1
            )));
        }
        let sigma2 = theta[k];
        if !(sigma2 > 0.0) {
            return Err(GpcError::domain(format!("sigma2 must be positive, got {sigma2}")));
        }
        let rss = residual_sum_of_squares(&theta[..k], view);
        Ok(gaussian_log_lik(rss, view.len(), sigma2))
    }

    fn simulate(
        &self,
        eta: f64,
        view: &DatasetView<'_>,
        draws: usize,
        warmup: usize,
        rng: &mut RandomStream,
    ) -> Result<WeightedParticleSet> {
        check_sim_args(eta, draws)?;
        let stats = SufficientStats::from_view(view);
        let k = stats.k;
        let dim = k + 1;
        let mut particles = Vec::with_capacity(draws * dim);
        let mut log_q = Vec::with_capacity(draws);
        let mut sigma2 = 1.0_f64.max(self.hyper.ig_rate);
        for sweep in 0..warmup + draws {
            let beta = self.draw_beta(eta, sigma2, &stats, rng)?;
            let rss = residual_sum_of_squares(&beta, view);
            sigma2 = self.draw_sigma2(eta, rss, stats.n, rng)?;
            if sweep >= warmup {
                particles.extend_from_slice(&beta);
                particles.push(sigma2);
                log_q.push(gaussian_log_lik(rss, stats.n, sigma2));
            }
        }
        WeightedParticleSet::new(dim, particles, log_q, eta)
    }
}
