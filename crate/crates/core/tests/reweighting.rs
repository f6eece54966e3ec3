mod support;

use gpc::calib::{reweight, reweighted_log_weights, WeightedParticleSet};
use gpc::model::{LinearRegression, Model};
use gpc::numkit::RandomStream;
use proptest::prelude::*;
use support::*;

/// Weighted mean and its standard error, inflating the importance-sampling
/// variance by the chain's own autocorrelation factor.
fn weighted_mean_se(pset: &WeightedParticleSet, w: &[f64], k: usize) -> (f64, f64) {
    let x = pset.coordinate(k);
    let m: f64 = x.iter().zip(w).map(|(a, b)| a * b).sum();
    let is_var: f64 = x.iter().zip(w).map(|(a, b)| b * b * (a - m).powi(2)).sum();
    let naive = (variance(&x) / x.len() as f64).sqrt();
    let inflation = (batch_means_mcse(&x) / naive).max(1.0);
    (m, is_var.sqrt() * inflation)
}

#[test]
fn reweighted_means_match_fresh_chains() {
    let data = gpc::experiments::gen_linreg_data(&gpc::experiments::SynthConfig {
        n: 100,
        seed: 31,
        ..Default::default()
    })
    .unwrap();
    let model = LinearRegression::default();
    let draws = 4000;
    let mut checked = 0;
    for (i, eta_s) in [0.5, 1.0, 2.0].into_iter().enumerate() {
        let mut rng = RandomStream::new(40 + i as u64, 0);
        let base = model.simulate(eta_s, &data.full_view(), draws, 500, &mut rng).unwrap();
        for (j, delta) in [-0.1, 0.1].into_iter().enumerate() {
            let target = eta_s + delta;
            let moved = reweight(&base, target).unwrap();
            let ess = gpc::numkit::ess(&moved.weights).unwrap();
            if ess < 0.5 * draws as f64 {
                continue;
            }
            checked += 1;
            let mut rng = RandomStream::new(60 + (2 * i + j) as u64, 0);
            let fresh = model.simulate(target, &data.full_view(), draws, 500, &mut rng).unwrap();
            for k in 0..base.dim() {
                let (rm, rse) = weighted_mean_se(&base, &moved.weights, k);
                let fx = fresh.coordinate(k);
                let se = (rse.powi(2) + batch_means_mcse(&fx).powi(2)).sqrt();
                let z = (rm - mean(&fx)) / se;
                assert!(z.abs() < 3.0, "eta_s={eta_s} -> {target}, coord {k}: {rm} vs {} (z={z:.2})", mean(&fx));
            }
        }
    }
    assert!(checked >= 3, "only {checked} reweighting cases had enough ESS");
}

#[test]
fn zero_shift_leaves_weights_unchanged() {
    let data = linreg_toy(100, 32);
    let mut rng = RandomStream::new(33, 0);
    let pset = LinearRegression::default().simulate(0.7, &data.full_view(), 500, 50, &mut rng).unwrap();
    let same = reweight(&pset, 0.7).unwrap();
    let before = pset.weights().unwrap();
    for (a, b) in same.weights.iter().zip(&before) {
        assert!((a - b).abs() <= 1e-12);
    }
}

fn arb_set() -> impl Strategy<Value = WeightedParticleSet> {
    (2usize..40, 0.05f64..5.0).prop_flat_map(|(m, eta)| {
        prop::collection::vec(-500.0f64..0.0, m).prop_map(move |lq| {
            let particles: Vec<f64> = (0..m).map(|i| i as f64).collect();
            WeightedParticleSet::new(1, particles, lq, eta).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn composition_is_exact_in_log_domain(pset in arb_set(), e1 in 0.01f64..5.0, e2 in 0.01f64..5.0) {
        let _first = reweighted_log_weights(&pset, e1).unwrap();
        let second = reweighted_log_weights(&pset, e2).unwrap();
        let delta = e2 - pset.eta();
        for ((got, lw), lq) in second.values().iter().zip(pset.log_weights().values()).zip(pset.log_pseudolik()) {
            prop_assert_eq!(got.to_bits(), (lw + delta * lq).to_bits());
        }
    }

    #[test]
    fn reweighted_ess_is_bounded(pset in arb_set(), e in 0.01f64..5.0) {
        let r = reweight(&pset, e).unwrap();
        let v = gpc::numkit::ess(&r.weights).unwrap();
        prop_assert!(v >= 1.0 && v <= pset.len() as f64);
    }
}
