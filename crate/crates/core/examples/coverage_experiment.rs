//! Seed-matched comparison of both methods over many synthetic datasets,
//! with the per-run report written to `coverage_report.csv`.
//!
//! cargo run --release --example coverage_experiment -- [datasets] [n]

use gpc::calib::CalibConfig;
use gpc::experiments::{run_paired_experiment, ExperimentConfig, ExperimentData, SynthConfig};
use gpc::model::LinearRegression;

fn main() -> gpc::Result<()> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().map_or(10, |s| s.parse().expect("datasets"));
    let n: usize = args.next().map_or(100, |s| s.parse().expect("n"));

    let data = ExperimentData::Synthetic {
        template: SynthConfig { n, ..Default::default() },
        count,
    };
    let cfg = ExperimentConfig {
        calib: CalibConfig::default(),
        workers: rayon::current_num_threads(),
        ..Default::default()
    };
    let report = run_paired_experiment(&LinearRegression::default(), &data, &cfg)?;
    report.write_csv(std::fs::File::create("coverage_report.csv")?)?;
    print!("{}", report.summary().table());
    Ok(())
}
