//! Calibrate a linear-regression Gibbs posterior on synthetic heteroskedastic
//! data with both methods and compare their cost.
//!
//! cargo run --release --example calibrate_linreg -- [n] [seed]

use gpc::bootstrap::make_plan;
use gpc::calib::{gpc_sa_run, gpc_wp_run, CalibConfig};
use gpc::experiments::{gen_linreg_data, SynthConfig};
use gpc::model::LinearRegression;

fn main() -> gpc::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(100, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed"));

    let data = gen_linreg_data(&SynthConfig { n, seed, ..Default::default() })?;
    let plan = make_plan(data.len(), 100, seed)?;
    let cfg = CalibConfig { seed, ..Default::default() };
    let model = LinearRegression::default();

    for result in [gpc_sa_run(&model, &data, &plan, &cfg)?, gpc_wp_run(&model, &data, &plan, &cfg)?] {
        println!("{:<3} {}  c_hat={:.3}  {:.0} ms", result.method, result.summary_line(), result.c_hat, result.wall_ms);
        println!("    eta path: {:?}", result.eta_history);
        let b = &result.original_box;
        for (k, (lo, hi)) in b.coords.iter().zip(&b.intervals) {
            println!("    beta[{k}] in [{lo:.3}, {hi:.3}]");
        }
    }
    Ok(())
}
