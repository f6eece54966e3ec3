//! Numerical building blocks: random streams, samplers, log-domain weights and
//! small SPD solves.

pub mod dist;
pub mod linalg;
pub mod rng;
pub mod weights;

pub use dist::{exponential, inverse_gamma, inverse_gaussian, mvn, mvn_canonical, std_normal, uniform_index};
pub use linalg::{cholesky_spd, spd_solve, LowerTriangular, SpdMatrix};
pub use rng::{mix_seed, replicate_stream_id, RandomStream};
pub use weights::{ess, logsumexp, normalize_log_weights, weighted_quantile, LogWeights};
