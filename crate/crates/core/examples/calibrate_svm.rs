//! Calibrate the hinge-loss classifier.
//!
//! cargo run --release --example calibrate_svm -- [heart.csv]
//!
//! With a path, loads the heart-disease file (462 rows, seven covariates).
//! Without one, uses simulated data of the same shape so the run can be
//! reproduced offline.

use gpc::bootstrap::make_plan;
use gpc::calib::{gpc_sa_run, gpc_wp_run, CalibConfig};
use gpc::experiments::{load_saheart, SAHEART_DEFAULT_COLUMNS};
use gpc::model::{Dataset, ResponseKind, SvmClassifier};
use gpc::numkit::{std_normal, RandomStream};
use rand::Rng;

fn simulated(n: usize, seed: u64) -> gpc::Result<Dataset> {
    let mut rng = RandomStream::new(seed, 0);
    let weights = [0.4, 0.5, 0.45, 0.5, 0.0, 0.0, 0.6];
    let mut y = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = (0..7).map(|_| std_normal(&mut rng)).collect();
        let score = -0.6 + x.iter().zip(&weights).map(|(a, b)| a * b).sum::<f64>();
        let p = 1.0 / (1.0 + (-score).exp());
        y.push(if rng.random::<f64>() < p { 1.0 } else { -1.0 });
        rows.push(x);
    }
    let names = SAHEART_DEFAULT_COLUMNS.iter().map(|s| s.to_string()).collect();
    Dataset::new(y, &rows, names, ResponseKind::Binary)
}

fn main() -> gpc::Result<()> {
    let data = match std::env::args().nth(1) {
        Some(path) => load_saheart(path, &SAHEART_DEFAULT_COLUMNS)?,
        None => simulated(462, 3)?,
    };
    let plan = make_plan(data.len(), 100, 11)?;
    let cfg = CalibConfig {
        draws: 2000,
        warmup: 500,
        ..Default::default()
    };
    let model = SvmClassifier::default();
    for result in [gpc_sa_run(&model, &data, &plan, &cfg)?, gpc_wp_run(&model, &data, &plan, &cfg)?] {
        println!(
            "{:<3} {}  c_hat={:.3}  {:.1} s",
            result.method,
            result.summary_line(),
            result.c_hat,
            result.wall_ms / 1e3
        );
        println!("    eta path: {:?}", result.eta_history);
    }
    Ok(())
}
