//! Move a particle set to nearby learning rates without re-simulating and
//! compare with fresh chains.

use gpc::calib::{point_estimate_with_weights, reweight};
use gpc::experiments::{gen_linreg_data, SynthConfig};
use gpc::model::{LinearRegression, Model};
use gpc::numkit::{ess, RandomStream};

fn main() -> gpc::Result<()> {
    let data = gen_linreg_data(&SynthConfig { n: 100, seed: 2, ..Default::default() })?;
    let model = LinearRegression::default();
    let base_eta = 1.0;
    let base = model.simulate(base_eta, &data.full_view(), 4000, 500, &mut RandomStream::new(1, 0))?;

    println!("  eta     ESS   reweighted sigma2   fresh sigma2");
    for eta in [0.5, 0.8, 0.9, 1.0, 1.1, 1.3, 2.0] {
        let moved = reweight(&base, eta)?;
        let est = point_estimate_with_weights(&base, &moved.weights)?;
        let fresh = model.simulate(eta, &data.full_view(), 4000, 500, &mut RandomStream::new(2, 0))?;
        let fresh_mean = fresh.coordinate(4).iter().sum::<f64>() / fresh.len() as f64;
        println!(
            "{eta:5.2} {:7.1}   {:17.4}   {:12.4}",
            ess(&moved.weights)?,
            est.theta[4],
            fresh_mean
        );
    }
    Ok(())
}
