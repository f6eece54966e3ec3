use std::sync::OnceLock;

use crate::error::{GpcError, Result};
use crate::numkit::{ess, LogWeights};

/// `M` posterior draws on one replicate, with their log-weights and cached
/// `log q(θ; replicate)` values.
#[derive(Clone, Debug)]
pub struct WeightedParticleSet {
    dim: usize,
    particles: Vec<f64>,
    log_weights: LogWeights,
    log_pseudolik: Vec<f64>,
    eta: f64,
    // Per-coordinate ascending order; reweighting never changes it.
    order: OnceLock<Vec<Vec<usize>>>,
}

impl WeightedParticleSet {
    /// Uniformly weighted set as produced by a fresh simulation.
    pub fn new(dim: usize, particles: Vec<f64>, log_pseudolik: Vec<f64>, eta: f64) -> Result<Self> {
        let m = log_pseudolik.len();
        if dim == 0 || particles.len() != m * dim {
            return Err(GpcError::domain(format!(
                "particle storage {} does not match {m} draws of dimension {dim}",
                particles.len()
            )));
        }
        if m == 0 {
            return Err(GpcError::DegenerateSet("no particles".into()));
        }
        Ok(Self {
            dim,
            particles,
            log_weights: LogWeights::uniform(m),
            log_pseudolik,
            eta,
            order: OnceLock::new(),
        })
    }

    pub fn with_log_weights(mut self, log_weights: LogWeights) -> Result<Self> {
        if log_weights.len() != self.len() {
            return Err(GpcError::domain("log-weight length does not match particle count"));
        }
        self.log_weights = log_weights;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.log_pseudolik.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_pseudolik.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn particle(&self, m: usize) -> &[f64] {
        &self.particles[m * self.dim..(m + 1) * self.dim]
    }

    pub fn coordinate(&self, k: usize) -> Vec<f64> {
        (0..self.len()).map(|m| self.particles[m * self.dim + k]).collect()
    }

    pub fn log_weights(&self) -> &LogWeights {
        &self.log_weights
    }

    pub fn log_pseudolik(&self) -> &[f64] {
        &self.log_pseudolik
    }

    /// The learning rate the sampler targeted.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn weights(&self) -> Result<Vec<f64>> {
        Ok(self.log_weights.normalize()?.0)
    }

    pub fn ess(&self) -> Result<f64> {
        ess(&self.weights()?)
    }

    pub(crate) fn sorted_order(&self, k: usize) -> &[usize] {
        let all = self.order.get_or_init(|| {
            (0..self.dim)
                .map(|j| {
                    let col = self.coordinate(j);
                    let mut idx: Vec<usize> = (0..col.len()).collect();
                    idx.sort_by(|&a, &b| col[a].total_cmp(&col[b]));
                    idx
                })
                .collect()
        });
        &all[k]
    }

    pub(crate) fn raw(&self) -> &[f64] {
        &self.particles
    }
}
