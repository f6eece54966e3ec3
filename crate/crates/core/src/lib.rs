//! Learning-rate calibration for generalized and Gibbs posteriors.
//!
//! A generalized posterior tempers the (pseudo)likelihood, `π_η(θ) ∝ q(θ;D)^η p(θ)`.
//! This crate picks `η` so that bootstrap-estimated coverage of the posterior
//! credible box matches the nominal level `1 − α`, using either a stochastic
//! approximation step per MCMC round ([`calib::gpc_sa_run`]) or a
//! weighted-particle search that re-targets the existing draws by importance
//! reweighting before paying for new MCMC ([`calib::gpc_wp_run`]).
//!
//! Two models ship with samplers: a homoskedastic linear regression
//! ([`model::LinearRegression`]) and a hinge-loss support vector classifier
//! ([`model::SvmClassifier`]).
//!
//! ```no_run
//! use gpc::bootstrap::make_plan;
//! use gpc::calib::{gpc_wp_run, CalibConfig};
//! use gpc::experiments::{gen_linreg_data, SynthConfig};
//! use gpc::model::LinearRegression;
//!
//! let data = gen_linreg_data(&SynthConfig { n: 100, seed: 7, ..Default::default() }).unwrap();
//! let plan = make_plan(data.len(), 100, 7).unwrap();
//! let result = gpc_wp_run(&LinearRegression::default(), &data, &plan, &CalibConfig::default()).unwrap();
//! println!("{}", result.summary_line());
//! ```

pub mod bootstrap;
pub mod calib;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod model;
pub mod numkit;

pub use error::{GpcError, Result};
