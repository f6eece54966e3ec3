//! Independent reference code shared by the integration tests and the
//! acceptance runner: a random-walk Metropolis sampler, batch-means standard
//! errors and hand-written log targets that do not call into the crate.

#![allow(dead_code)]

use gpc::model::{Dataset, ResponseKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

pub fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64
}

/// Monte-Carlo standard error of the mean of a correlated series, from
/// non-overlapping batches of size ⌊√n⌋.
pub fn batch_means_mcse(x: &[f64]) -> f64 {
    let n = x.len();
    let size = (n as f64).sqrt().floor() as usize;
    let batches = n / size;
    let means: Vec<f64> = (0..batches).map(|j| mean(&x[j * size..(j + 1) * size])).collect();
    (variance(&means) / batches as f64).sqrt()
}

pub fn column(samples: &[Vec<f64>], k: usize) -> Vec<f64> {
    samples.iter().map(|s| s[k]).collect()
}

/// Dense Cholesky used only for proposal shaping.
fn cholesky(dim: usize, a: &[f64]) -> Vec<f64> {
    let mut l = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i * dim + k] * l[j * dim + k]).sum();
            if i == j {
                l[i * dim + i] = (a[i * dim + i] - s).max(1e-12).sqrt();
            } else {
                l[i * dim + j] = (a[i * dim + j] - s) / l[j * dim + j];
            }
        }
    }
    l
}

pub struct Chain {
    pub samples: Vec<Vec<f64>>,
    pub acceptance: f64,
}

/// Random-walk Metropolis with a Gaussian proposal. The proposal is shaped
/// during burn-in (a diagonal pilot, then the pilot covariance scaled by
/// 2.38²/d with its overall size tuned toward 25 % acceptance) and frozen
/// before any kept draw.
pub fn metropolis(
    log_target: impl Fn(&[f64]) -> f64,
    init: Vec<f64>,
    init_scale: f64,
    burn: usize,
    keep: usize,
    thin: usize,
    seed: u64,
) -> Chain {
    let d = init.len();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut x = init;
    let mut lp = log_target(&x);
    assert!(lp.is_finite(), "oracle started outside the support");

    let mut chol: Vec<f64> = (0..d * d).map(|i| if i % (d + 1) == 0 { init_scale } else { 0.0 }).collect();
    let mut log_size = 0.0f64;
    let step = |x: &mut Vec<f64>, lp: &mut f64, chol: &[f64], size: f64, rng: &mut ChaCha20Rng| -> bool {
        let z: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let prop: Vec<f64> = (0..d)
            .map(|i| x[i] + size * (0..=i).map(|j| chol[i * d + j] * z[j]).sum::<f64>())
            .collect();
        let lq = log_target(&prop);
        if lq.is_finite() && rng.random::<f64>().ln() < lq - *lp {
            *x = prop;
            *lp = lq;
            true
        } else {
            false
        }
    };

    let pilot = burn / 2;
    let mut history = Vec::with_capacity(pilot);
    for t in 0..pilot {
        let acc = step(&mut x, &mut lp, &chol, log_size.exp(), &mut rng);
        log_size += (if acc { 1.0 } else { 0.0 } - 0.25) / ((t + 1) as f64).powf(0.6);
        history.push(x.clone());
    }
    let tail = &history[pilot / 2..];
    let mu: Vec<f64> = (0..d).map(|k| mean(&column(tail, k))).collect();
    let mut cov = vec![0.0; d * d];
    for s in tail {
        for i in 0..d {
            for j in 0..d {
                cov[i * d + j] += (s[i] - mu[i]) * (s[j] - mu[j]) / (tail.len() - 1) as f64;
            }
        }
    }
    let factor = 2.38 * 2.38 / d as f64;
    cov.iter_mut().for_each(|c| *c *= factor);
    chol = cholesky(d, &cov);
    log_size = 0.0;
    for t in pilot..burn {
        let acc = step(&mut x, &mut lp, &chol, log_size.exp(), &mut rng);
        log_size += (if acc { 1.0 } else { 0.0 } - 0.25) / ((t - pilot + 1) as f64).powf(0.6);
    }

    let size = log_size.exp();
    let mut accepted = 0usize;
    let mut samples = Vec::with_capacity(keep);
    for _ in 0..keep {
        for _ in 0..thin {
            accepted += usize::from(step(&mut x, &mut lp, &chol, size, &mut rng));
        }
        samples.push(x.clone());
    }
    Chain {
        samples,
        acceptance: accepted as f64 / (keep * thin) as f64,
    }
}

/// Design rows with the leading 1, read back from a dataset.
pub fn design(data: &Dataset) -> (Vec<f64>, Vec<Vec<f64>>) {
    let y = (0..data.len()).map(|i| data.response(i)).collect();
    let x = (0..data.len()).map(|i| data.row(i).to_vec()).collect();
    (y, x)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Tempered linear-regression target on `(β, log σ²)` with the Jacobian,
/// priors `β ~ N(0, ς² I)` and `σ² ~ IG(shape, rate)`.
pub fn linreg_log_target<'a>(
    y: &'a [f64],
    x: &'a [Vec<f64>],
    eta: f64,
    coef_var: f64,
    shape: f64,
    rate: f64,
) -> impl Fn(&[f64]) -> f64 + 'a {
    move |p: &[f64]| {
        let k = p.len() - 1;
        let tau = p[k];
        let s2 = tau.exp();
        let rss: f64 = y.iter().zip(x).map(|(yi, xi)| (yi - dot(xi, &p[..k])).powi(2)).sum();
        let n = y.len() as f64;
        let loglik = -0.5 * n * (2.0 * std::f64::consts::PI * s2).ln() - rss / (2.0 * s2);
        let prior_b = -p[..k].iter().map(|b| b * b).sum::<f64>() / (2.0 * coef_var);
        let prior_s = -(shape + 1.0) * tau - rate / s2;
        eta * loglik + prior_b + prior_s + tau
    }
}

/// Tempered hinge-loss target with Laplace priors of the given scales.
pub fn svm_log_target<'a>(y: &'a [f64], x: &'a [Vec<f64>], eta: f64, scales: &'a [f64]) -> impl Fn(&[f64]) -> f64 + 'a {
    move |t: &[f64]| {
        let hinge: f64 = y.iter().zip(x).map(|(yi, xi)| (1.0 - yi * dot(xi, t)).max(0.0)).sum();
        -2.0 * eta * hinge - t.iter().zip(scales).map(|(v, b)| v.abs() / b).sum::<f64>()
    }
}

/// Sample standard deviations with the n−1 denominator; 1 for the intercept.
pub fn column_sds(x: &[Vec<f64>]) -> Vec<f64> {
    let k = x[0].len();
    (0..k)
        .map(|j| if j == 0 { 1.0 } else { variance(&column(x, j)).sqrt() })
        .collect()
}

/// Linearly separable one-covariate classification data.
pub fn separable_toy(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut y = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let label = if i % 2 == 0 { 1.0 } else { -1.0 };
        let z: f64 = rng.sample(StandardNormal);
        rows.push(vec![label * (0.3 + z.abs())]);
        y.push(label);
    }
    Dataset::new(y, &rows, vec!["x1".into()], ResponseKind::Binary).unwrap()
}

/// Overlapping classes: labels follow the sign of `x + noise`.
pub fn overlapping_toy(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut y = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let x: f64 = rng.sample(StandardNormal);
        let e: f64 = rng.sample(StandardNormal);
        y.push(if x + 0.8 * e + 0.3 > 0.0 { 1.0 } else { -1.0 });
        rows.push(vec![x]);
    }
    Dataset::new(y, &rows, vec!["x1".into()], ResponseKind::Binary).unwrap()
}

/// Homoskedastic regression data with three covariates.
pub fn linreg_toy(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let beta = [1.0, 1.0, 2.0, -1.0];
    let mut y = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let r: Vec<f64> = (0..3).map(|_| rng.sample(StandardNormal)).collect();
        let e: f64 = rng.sample(StandardNormal);
        y.push(beta[0] + dot(&r, &beta[1..]) + 0.7 * e);
        rows.push(r);
    }
    Dataset::new(y, &rows, vec!["x1".into(), "x2".into(), "x3".into()], ResponseKind::Real).unwrap()
}

/// Per-coordinate comparison of two sets of draws: returns
/// `(k, mean_a, mean_b, z)` with `z` the difference over the combined MCSE.
pub fn compare_means(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<(usize, f64, f64, f64)> {
    (0..a[0].len())
        .map(|k| {
            let ca = column(a, k);
            let cb = column(b, k);
            let se = (batch_means_mcse(&ca).powi(2) + batch_means_mcse(&cb).powi(2)).sqrt();
            (k, mean(&ca), mean(&cb), (mean(&ca) - mean(&cb)) / se)
        })
        .collect()
}

pub fn gibbs_draws(model: &dyn gpc::model::Model, data: &Dataset, eta: f64, draws: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = gpc::numkit::RandomStream::new(seed, 0);
    let pset = model.simulate(eta, &data.full_view(), draws, 1000, &mut rng).unwrap();
    (0..pset.len()).map(|m| pset.particle(m).to_vec()).collect()
}

/// Linear-regression Gibbs output against the Metropolis chain on `N = 50`
/// toy data; `σ²` is compared on its natural scale.
pub fn linreg_oracle(eta: f64, seed: u64) -> Vec<(usize, f64, f64, f64)> {
    let data = linreg_toy(50, 11);
    let (y, x) = design(&data);
    let h = gpc::model::LinRegHyper::default();
    let gibbs = gibbs_draws(&gpc::model::LinearRegression::default(), &data, eta, 40_000, seed);
    let target = linreg_log_target(&y, &x, eta, h.coef_prior_var, h.ig_shape, h.ig_rate);
    let chain = metropolis(target, vec![0.0; 5], 0.1, 40_000, 60_000, 5, seed + 100);
    assert!((0.1..0.5).contains(&chain.acceptance), "acceptance {}", chain.acceptance);
    let oracle: Vec<Vec<f64>> = chain
        .samples
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q[4] = q[4].exp();
            q
        })
        .collect();
    compare_means(&gibbs, &oracle)
}

/// SVM Gibbs output against the Metropolis chain on a 30-point toy problem.
pub fn svm_oracle(data: &Dataset, eta: f64, seed: u64, second_moments: bool) -> Vec<(usize, f64, f64, f64)> {
    let (y, x) = design(data);
    let scales: Vec<f64> = column_sds(&x).iter().map(|s| 10.0 * s).collect();
    let gibbs = gibbs_draws(&gpc::model::SvmClassifier::default(), data, eta, 60_000, seed);
    let chain = metropolis(svm_log_target(&y, &x, eta, &scales), vec![0.0, 1.0], 0.5, 40_000, 100_000, 5, seed + 1);
    if second_moments {
        let square = |d: &[Vec<f64>]| d.iter().map(|p| p.iter().map(|v| v * v).collect()).collect::<Vec<Vec<f64>>>();
        compare_means(&square(&gibbs), &square(&chain.samples))
    } else {
        compare_means(&gibbs, &chain.samples)
    }
}

/// Ratios of sampled to prior variance per coordinate at a vanishing `η`.
pub fn linreg_prior_ratios(seed: u64) -> Vec<f64> {
    let data = linreg_toy(50, 12);
    let draws = gibbs_draws(&gpc::model::LinearRegression::default(), &data, 1e-8, 20_000, seed);
    (0..4).map(|k| variance(&column(&draws, k)) / 100.0).collect()
}

pub fn svm_prior_ratios(seed: u64) -> Vec<f64> {
    let data = separable_toy(30, 7);
    let (_, x) = design(&data);
    let draws = gibbs_draws(&gpc::model::SvmClassifier::default(), &data, 1e-8, 60_000, seed);
    column_sds(&x)
        .iter()
        .enumerate()
        .map(|(k, sd)| variance(&column(&draws, k)) / (2.0 * (10.0 * sd).powi(2)))
        .collect()
}

/// Smallest sample value whose cumulative weight reaches `p`.
pub fn brute_force_quantile(values: &[f64], weights: &[f64], p: f64) -> f64 {
    if p == 0.0 {
        return values.iter().cloned().fold(f64::INFINITY, f64::min);
    }
    let mut best = f64::INFINITY;
    for &v in values {
        let mass: f64 = values.iter().zip(weights).filter(|(x, _)| **x <= v).map(|(_, w)| w).sum();
        if mass >= p - 1e-12 && v < best {
            best = v;
        }
    }
    best
}

/// `count` random quantile cases, half of them with heavy ties. Returns the
/// first mismatch, if any.
pub fn quantile_mismatch(count: usize, seed: u64) -> Option<String> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for case in 0..count {
        let m = rng.random_range(1..60);
        let values: Vec<f64> = if case % 2 == 0 {
            (0..m).map(|_| rng.random_range(0..6) as f64).collect()
        } else {
            (0..m).map(|_| rng.random_range(-10.0..10.0)).collect()
        };
        let raw: Vec<f64> = (0..m)
            .map(|_| rng.random::<f64>() + if rng.random_bool(0.2) { 0.0 } else { 0.05 })
            .collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let p = match case % 10 {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random(),
        };
        let got = gpc::numkit::weighted_quantile(&values, &weights, p).unwrap();
        let want = brute_force_quantile(&values, &weights, p);
        if got != want {
            return Some(format!("case {case}: p={p} got {got} want {want}"));
        }
    }
    None
}
