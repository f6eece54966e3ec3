use serde::{Deserialize, Serialize};

use super::WeightedParticleSet;
use crate::error::{GpcError, Result};
use crate::numkit::weights::interval_in_order;
use crate::numkit::ess;

/// Per-coordinate equal-tailed intervals at level `1 − α`. Intervals are
/// closed and their endpoints are realized particle values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CredibleSet {
    pub level: f64,
    pub coords: Vec<usize>,
    pub intervals: Vec<(f64, f64)>,
}

impl CredibleSet {
    /// `point` holds one value per entry of `coords`.
    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.intervals.len()
            && point
                .iter()
                .zip(&self.intervals)
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    /// Whether a full parameter vector lies inside the box.
    pub fn contains_full(&self, theta: &[f64]) -> bool {
        self.coords
            .iter()
            .zip(&self.intervals)
            .all(|(&k, (lo, hi))| k < theta.len() && *lo <= theta[k] && theta[k] <= *hi)
    }
}

pub fn credible_box(pset: &WeightedParticleSet, alpha: f64, coords: &[usize]) -> Result<CredibleSet> {
    let weights = pset.weights()?;
    credible_box_with_weights(pset, &weights, alpha, coords)
}

/// Same as [`credible_box`] with externally supplied normalized weights.
pub fn credible_box_with_weights(
    pset: &WeightedParticleSet,
    weights: &[f64],
    alpha: f64,
    coords: &[usize],
) -> Result<CredibleSet> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(GpcError::domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if pset.len() < 2 {
        return Err(GpcError::DegenerateSet(format!(
            "credible box needs at least 2 particles, got {}",
            pset.len()
        )));
    }
    if weights.len() != pset.len() {
        return Err(GpcError::domain("weight vector length does not match particle count"));
    }
    let dim = pset.dim();
    let raw = pset.raw();
    let mut intervals = Vec::with_capacity(coords.len());
    let mut column = vec![0.0; pset.len()];
    for &k in coords {
        if k >= dim {
            return Err(GpcError::domain(format!("coverage coordinate {k} >= dimension {dim}")));
        }
        for (m, c) in column.iter_mut().enumerate() {
            *c = raw[m * dim + k];
        }
        let order = pset.sorted_order(k);
        intervals.push(interval_in_order(&column, weights, order, alpha / 2.0, 1.0 - alpha / 2.0));
    }
    Ok(CredibleSet {
        level: 1.0 - alpha,
        coords: coords.to_vec(),
        intervals,
    })
}

/// Fraction of boxes containing `theta_hat` (projected onto the box coordinates).
pub fn estimate_coverage(theta_hat: &[f64], sets: &[CredibleSet]) -> f64 {
    if sets.is_empty() {
        return 0.0;
    }
    let hits = sets.iter().filter(|s| s.contains(theta_hat)).count();
    hits as f64 / sets.len() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointEstimate {
    pub theta: Vec<f64>,
    /// Set when the weights have collapsed onto a single particle.
    pub degenerate: bool,
}

impl PointEstimate {
    pub fn project(&self, coords: &[usize]) -> Vec<f64> {
        coords.iter().map(|&k| self.theta[k]).collect()
    }
}

/// Weighted particle mean.
pub fn point_estimate(pset: &WeightedParticleSet) -> Result<PointEstimate> {
    let weights = pset.weights()?;
    point_estimate_with_weights(pset, &weights)
}

pub fn point_estimate_with_weights(pset: &WeightedParticleSet, weights: &[f64]) -> Result<PointEstimate> {
    let dim = pset.dim();
    let mut theta = vec![0.0; dim];
    for (m, &w) in weights.iter().enumerate() {
        for (t, p) in theta.iter_mut().zip(pset.particle(m)) {
            *t += w * p;
        }
    }
    let e = ess(weights)?;
    Ok(PointEstimate {
        theta,
        degenerate: pset.len() > 1 && e < 1.0 + 1e-9,
    })
}
