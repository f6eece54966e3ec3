//! Coverage estimation and the calibration engines.

pub mod credible;
pub mod engine;
pub mod kesten;
mod particles;
pub mod reweight;

pub use credible::{
    credible_box, credible_box_with_weights, estimate_coverage, point_estimate, point_estimate_with_weights,
    CredibleSet, PointEstimate,
};
pub use engine::{
    evaluate, gpc_sa_run, gpc_wp_inner, gpc_wp_run, run_method, simulate_replicates, with_workers, CalibConfig,
    CalibrationResult, CalibrationState, Evaluation, InnerOutcome, InnerTrial, Method, Seeds,
};
pub use kesten::{sa_next_eta, KestenRule, ETA_MAX, ETA_MIN};
pub use particles::WeightedParticleSet;
pub use reweight::{min_ess_star, reweight, reweighted_log_weights, EssSummary, Reweighted};
