use serde::{Deserialize, Serialize};

use super::WeightedParticleSet;
use crate::error::{GpcError, Result};
use crate::numkit::{ess, LogWeights};

/// Weights of a particle set moved to a new learning rate.
#[derive(Clone, Debug)]
pub struct Reweighted {
    pub log_weights: LogWeights,
    pub weights: Vec<f64>,
}

/// `log w'_m = log w_m + (η' − η_s)·log q_m`, always taken from the set's own
/// weights at `η_s`; only the cached `log q` values are read.
pub fn reweighted_log_weights(pset: &WeightedParticleSet, eta_new: f64) -> Result<LogWeights> {
    if !(eta_new > 0.0) {
        return Err(GpcError::domain(format!("target learning rate must be positive, got {eta_new}")));
    }
    let delta = eta_new - pset.eta();
    let values = pset
        .log_weights()
        .values()
        .iter()
        .zip(pset.log_pseudolik())
        .map(|(lw, lq)| lw + delta * lq)
        .collect();
    LogWeights::new(values)
}

pub fn reweight(pset: &WeightedParticleSet, eta_new: f64) -> Result<Reweighted> {
    let log_weights = reweighted_log_weights(pset, eta_new)?;
    let (weights, _) = log_weights.normalize()?;
    Ok(Reweighted {
        log_weights,
        weights,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EssSummary {
    /// Minimum over the bootstrap replicates `1..=B`.
    pub min: f64,
    /// ESS of the original-data replicate; monitored, not gated on.
    pub original: f64,
}

/// ESS of every replicate after moving to `eta_new`; `psets[0]` is the
/// original data and is excluded from the minimum.
pub fn min_ess_star(psets: &[WeightedParticleSet], eta_new: f64) -> Result<EssSummary> {
    if psets.len() < 2 {
        return Err(GpcError::domain("need the original set and at least one bootstrap set"));
    }
    let per: Vec<f64> = psets
        .iter()
        .map(|p| reweight(p, eta_new).and_then(|r| ess(&r.weights)))
        .collect::<Result<_>>()?;
    Ok(summarize(&per))
}

pub(crate) fn summarize(per_replicate: &[f64]) -> EssSummary {
    EssSummary {
        min: per_replicate[1..].iter().copied().fold(f64::INFINITY, f64::min),
        original: per_replicate[0],
    }
}
