//! Models expose `log q(θ; D)` (a likelihood or a loss-based
//! pseudolikelihood) and a sampler for the tempered target `q(θ; D)^η p(θ)`.

mod dataset;
pub mod linreg;
pub mod svm;

pub use dataset::{Dataset, DatasetView, ResponseKind};
pub(crate) use dataset::format_float;
pub use linreg::{LinRegHyper, LinearRegression, SufficientStats};
pub use svm::{SvmClassifier, SvmHyper};

use serde::{Deserialize, Serialize};

use crate::calib::WeightedParticleSet;
use crate::error::Result;
use crate::numkit::RandomStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Linreg,
    Svm,
}

impl ModelKind {
    pub fn response_kind(self) -> ResponseKind {
        match self {
            ModelKind::Linreg => ResponseKind::Real,
            ModelKind::Svm => ResponseKind::Binary,
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Linreg => "linreg",
            ModelKind::Svm => "svm",
        })
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "linreg" => Ok(ModelKind::Linreg),
            "svm" => Ok(ModelKind::Svm),
            other => Err(format!("unknown model `{other}` (expected linreg or svm)")),
        }
    }
}

pub trait Model: Send + Sync {
    fn kind(&self) -> ModelKind;

    /// Length of θ for a design with `columns` columns (intercept included).
    fn param_dim(&self, columns: usize) -> usize;

    fn param_names(&self, data: &Dataset) -> Vec<String>;

    /// Coordinates of θ that enter the credible box.
    fn coverage_coords(&self, columns: usize) -> Vec<usize>;

    fn log_pseudolik(&self, theta: &[f64], view: &DatasetView<'_>) -> Result<f64>;

    /// Runs `warmup + draws` sweeps targeting `q^η p` on `view` and keeps the
    /// last `draws`, uniformly weighted, with cached `log q` values.
    fn simulate(
        &self,
        eta: f64,
        view: &DatasetView<'_>,
        draws: usize,
        warmup: usize,
        rng: &mut RandomStream,
    ) -> Result<WeightedParticleSet>;
}

pub(crate) fn check_sim_args(eta: f64, draws: usize) -> Result<()> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(crate::error::GpcError::domain(format!(
            "learning rate must be positive, got {eta}"
        )));
    }
    if draws == 0 {
        return Err(crate::error::GpcError::domain("need at least one draw"));
    }
    Ok(())
}
