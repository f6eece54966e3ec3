//! Misspecified regression data: a linear mean with heteroskedastic noise
//! whose variance steps up with the first covariate.

use serde::{Deserialize, Serialize};

use crate::error::{GpcError, Result};
use crate::model::{Dataset, ResponseKind};
use crate::numkit::weights::{quantile_in_order, weighted_quantile};
use crate::numkit::{std_normal, RandomStream};

const DATA_TAG: u64 = 0xDA7A;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n: usize,
    /// Intercept first.
    pub beta_true: Vec<f64>,
    /// Noise variance below the lower cut, between the cuts, above the upper cut.
    pub variance_levels: [f64; 3],
    /// Sample percentiles of `x₁` separating the variance regimes.
    pub cut_points: (f64, f64),
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n: 100,
            beta_true: vec![1.0, 1.0, 2.0, -1.0],
            variance_levels: [0.05, 0.25, 1.0],
            cut_points: (0.05, 0.95),
            seed: 1,
        }
    }
}

impl SynthConfig {
    fn validate(&self) -> Result<()> {
        if self.n < 20 {
            return Err(GpcError::config("n", format!("need at least 20 rows, got {}", self.n)));
        }
        if self.beta_true.len() < 2 {
            return Err(GpcError::config("beta_true", "need an intercept and at least one slope"));
        }
        let [a, b, c] = self.variance_levels;
        if !(a > 0.0 && a <= b && b <= c) {
            return Err(GpcError::config(
                "variance_levels",
                "must be positive and non-decreasing",
            ));
        }
        let (lo, hi) = self.cut_points;
        if !(0.0 < lo && lo < hi && hi < 1.0) {
            return Err(GpcError::config("cut_points", "need 0 < lower < upper < 1"));
        }
        Ok(())
    }
}

/// Left-continuous sample quantile, the same convention as the credible boxes.
pub fn sample_quantile(values: &[f64], p: f64) -> Result<f64> {
    let w = vec![1.0 / values.len() as f64; values.len()];
    weighted_quantile(values, &w, p)
}

/// Per-row noise variances for a first-covariate sample.
pub fn noise_variances(x1: &[f64], cfg: &SynthConfig) -> Result<Vec<f64>> {
    let w = vec![1.0 / x1.len() as f64; x1.len()];
    let mut order: Vec<usize> = (0..x1.len()).collect();
    order.sort_by(|&a, &b| x1[a].total_cmp(&x1[b]));
    let lo = quantile_in_order(x1, &w, &order, cfg.cut_points.0);
    let hi = quantile_in_order(x1, &w, &order, cfg.cut_points.1);
    let [v_lo, v_mid, v_hi] = cfg.variance_levels;
    Ok(x1
        .iter()
        .map(|&x| {
            if x < lo {
                v_lo
            } else if x <= hi {
                v_mid
            } else {
                v_hi
            }
        })
        .collect())
}

/// The dataset and the noise variance used for each row.
pub fn gen_linreg_data_with_variances(cfg: &SynthConfig) -> Result<(Dataset, Vec<f64>)> {
    cfg.validate()?;
    let p = cfg.beta_true.len() - 1;
    let mut rng = RandomStream::derive(cfg.seed, DATA_TAG, 0);
    let rows: Vec<Vec<f64>> = (0..cfg.n)
        .map(|_| (0..p).map(|_| std_normal(&mut rng)).collect())
        .collect();
    let x1: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let variances = noise_variances(&x1, cfg)?;
    let y: Vec<f64> = rows
        .iter()
        .zip(&variances)
        .map(|(r, v)| {
            let mean = cfg.beta_true[0]
                + r.iter().zip(&cfg.beta_true[1..]).map(|(x, b)| x * b).sum::<f64>();
            mean + v.sqrt() * std_normal(&mut rng)
        })
        .collect();
    let names = (1..=p).map(|j| format!("x{j}")).collect();
    Ok((Dataset::new(y, &rows, names, ResponseKind::Real)?, variances))
}

pub fn gen_linreg_data(cfg: &SynthConfig) -> Result<Dataset> {
    Ok(gen_linreg_data_with_variances(cfg)?.0)
}
