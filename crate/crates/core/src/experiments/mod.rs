//! Desk-scale reproductions: synthetic misspecified regression, the heart
//! disease classifier, and seed-matched comparisons of the two methods.

mod paired;
pub mod saheart;
pub mod synth;

pub use paired::{
    run_paired_experiment, run_seeds, ExperimentConfig, ExperimentData, ExperimentReport, ExperimentRow,
    ExperimentSummary, MethodSummary, Spread, REPORT_HEADER,
};
pub use saheart::{load_saheart, load_saheart_from_reader, SAHEART_DEFAULT_COLUMNS, SAHEART_ROWS};
pub use synth::{gen_linreg_data, gen_linreg_data_with_variances, noise_variances, sample_quantile, SynthConfig};
