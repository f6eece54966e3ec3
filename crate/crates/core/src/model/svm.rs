//! Support vector classifier as a Gibbs posterior.
//!
//! `log q(θ; D) = −2 Σ max(0, 1 − yᵢ xᵢ'θ)` with independent Laplace priors
//! `θ_k ~ Laplace(0, ν σ_k)`. The sampler uses the hinge-loss augmentation
//! `exp(−2 max(0, v)) = ∫ (2πλ)^{-1/2} exp(−(v + λ)²/(2λ)) dλ` applied to
//! `vᵢ = η(1 − yᵢ xᵢ'θ)`, and the normal / exponential mixture
//! `Laplace(0, b) = ∫ N(0, ω) Exp(ω; rate 1/(2b²)) dω` for the prior.
//!
//! Full conditionals:
//!
//! ```text
//! 1/λᵢ | θ   ~ InvGaussian(1/|vᵢ|, 1)
//! θ | λ, ω   ~ N(P⁻¹h, P⁻¹),  P = Σ η² xᵢxᵢ'/λᵢ + diag(1/ω_k),
//!                            h = Σ η yᵢ xᵢ (η + λᵢ)/λᵢ
//! 1/ω_k | θ  ~ InvGaussian(1/(b_k |θ_k|), 1/b_k²),  b_k = ν σ_k
//! ```

use serde::{Deserialize, Serialize};

use super::{check_sim_args, Dataset, DatasetView, Model, ModelKind};
use crate::calib::WeightedParticleSet;
use crate::error::{GpcError, Result};
use crate::numkit::{inverse_gaussian, mvn_canonical, LowerTriangular, RandomStream};

/// Floor on `|vᵢ|` and `|θ_k|` before they become inverse-Gaussian means.
pub const MEAN_CLAMP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvmHyper {
    /// Laplace scale multiplier ν.
    pub nu: f64,
}

impl Default for SvmHyper {
    fn default() -> Self {
        Self { nu: 10.0 }
    }
}

#[derive(Clone, Debug)]
pub struct SvmClassifier {
    hyper: SvmHyper,
    coverage: Option<Vec<usize>>,
}

impl SvmClassifier {
    pub fn new(hyper: SvmHyper) -> Result<Self> {
        if !(hyper.nu > 0.0 && hyper.nu.is_finite()) {
            return Err(GpcError::domain(format!("nu must be positive, got {}", hyper.nu)));
        }
        Ok(Self {
            hyper,
            coverage: None,
        })
    }

    pub fn with_coverage_coords(mut self, coords: Vec<usize>) -> Self {
        self.coverage = Some(coords);
        self
    }

    pub fn hyper(&self) -> &SvmHyper {
        &self.hyper
    }

    /// Laplace scales `ν σ_k`.
    pub fn prior_scales(&self, data: &Dataset) -> Result<Vec<f64>> {
        data.scales()
            .iter()
            .enumerate()
            .map(|(k, s)| {
                if *s > 0.0 {
                    Ok(self.hyper.nu * s)
                } else {
                    Err(GpcError::domain(format!(
                        "column {k} has zero standard deviation; Laplace scale undefined"
                    )))
                }
            })
            .collect()
    }

    /// Log prior density up to a constant: `−Σ |θ_k| / (ν σ_k)`.
    pub fn log_prior(&self, theta: &[f64], data: &Dataset) -> Result<f64> {
        let scales = self.prior_scales(data)?;
        Ok(-theta.iter().zip(&scales).map(|(t, b)| t.abs() / b).sum::<f64>())
    }
}

impl Default for SvmClassifier {
    fn default() -> Self {
        Self::new(SvmHyper::default()).expect("default hyperparameters are valid")
    }
}

fn hinge_log_q(theta: &[f64], view: &DatasetView<'_>) -> f64 {
    -2.0 * view
        .rows()
        .map(|(y, x)| {
            let margin = y * x.iter().zip(theta).map(|(a, b)| a * b).sum::<f64>();
            (1.0 - margin).max(0.0)
        })
        .sum::<f64>()
}

impl Model for SvmClassifier {
    fn kind(&self) -> ModelKind {
        ModelKind::Svm
    }

    fn param_dim(&self, columns: usize) -> usize {
        columns
    }

    fn param_names(&self, data: &Dataset) -> Vec<String> {
        data.column_names().iter().map(|c| format!("theta[{c}]")).collect()
    }

    fn coverage_coords(&self, columns: usize) -> Vec<usize> {
        self.coverage.clone().unwrap_or_else(|| (0..columns).collect())
    }

    fn log_pseudolik(&self, theta: &[f64], view: &DatasetView<'_>) -> Result<f64> {
        let k = view.base().num_columns();
        if theta.len() != k {
            return Err(GpcError::domain(format!(
                "theta has length {}, expected {k}",
                theta.len()
            )));
        }
        if let Some((y, _)) = view.rows().find(|(y, _)| *y != 1.0 && *y != -1.0) {
            return Err(GpcError::domain(format!("response {y} is not -1 or +1")));
        }
        Ok(hinge_log_q(theta, view))
    }

    fn simulate(
        &self,
        eta: f64,
        view: &DatasetView<'_>,
        draws: usize,
        warmup: usize,
        rng: &mut RandomStream,
    ) -> Result<WeightedParticleSet> {
        check_sim_args(eta, draws)?;
        let data = view.base();
        if data.kind() != super::ResponseKind::Binary {
            return Err(GpcError::domain("svm requires a binary (-1/+1) dataset"));
        }
        let k = data.num_columns();
        let n = view.len();
        let scales = self.prior_scales(data)?;

        let mut theta = vec![0.0; k];
        let mut omega: Vec<f64> = scales.iter().map(|b| 2.0 * b * b).collect();
        let mut inv_lambda = vec![1.0; n];
        let mut precision = vec![0.0; k * k];
        let mut linear = vec![0.0; k];

        let mut particles = Vec::with_capacity(draws * k);
        let mut log_q = Vec::with_capacity(draws);
        let eta2 = eta * eta;

        for sweep in 0..warmup + draws {
            for (il, (y, x)) in inv_lambda.iter_mut().zip(view.rows()) {
                let margin = y * x.iter().zip(&theta).map(|(a, b)| a * b).sum::<f64>();
                let v = (eta * (1.0 - margin)).abs().max(MEAN_CLAMP);
                *il = inverse_gaussian(1.0 / v, 1.0, rng)?;
            }

            precision.iter_mut().for_each(|p| *p = 0.0);
            linear.iter_mut().for_each(|h| *h = 0.0);
            for (&il, (y, x)) in inv_lambda.iter().zip(view.rows()) {
                let w = eta2 * il;
                // (η + λ)/λ = η/λ + 1
                let c = eta * y * (eta * il + 1.0);
                for i in 0..k {
                    linear[i] += c * x[i];
                    let wx = w * x[i];
                    for j in 0..=i {
                        precision[i * k + j] += wx * x[j];
                    }
                }
            }
            for i in 0..k {
                precision[i * k + i] += 1.0 / omega[i];
                for j in 0..i {
                    precision[j * k + i] = precision[i * k + j];
                }
            }
            let chol = LowerTriangular::factor(k, &precision)?;
            theta = mvn_canonical(&chol, &linear, rng);

            for ((om, t), b) in omega.iter_mut().zip(&theta).zip(&scales) {
                let mean = 1.0 / (b * t.abs().max(MEAN_CLAMP));
                *om = 1.0 / inverse_gaussian(mean, 1.0 / (b * b), rng)?;
            }

            if sweep >= warmup {
                particles.extend_from_slice(&theta);
                log_q.push(hinge_log_q(&theta, view));
            }
        }
        WeightedParticleSet::new(k, particles, log_q, eta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ResponseKind;

    fn tiny() -> Dataset {
        Dataset::new(
            vec![1.0, -1.0, 1.0],
            &[vec![0.0], vec![1.0], vec![2.0]],
            vec!["x".into()],
            ResponseKind::Binary,
        )
        .unwrap()
    }

    #[test]
    fn hinge_examples() {
        let d = tiny();
        let m = SvmClassifier::default();
        // Row 0: y = 1, x'θ = θ0.
        let one = DatasetView::new(&d, vec![0]).unwrap();
        assert_eq!(m.log_pseudolik(&[0.0, 5.0], &one).unwrap(), -2.0);
        assert_eq!(m.log_pseudolik(&[1.5, 0.0], &one).unwrap(), 0.0);
        // Rows 0 (margin θ0 = 0.5) and 1 (margin -(θ0 + θ1) = -1).
        let two = DatasetView::new(&d, vec![0, 1]).unwrap();
        assert_eq!(m.log_pseudolik(&[0.5, 0.5], &two).unwrap(), -5.0);
    }

    #[test]
    fn rejects_real_responses() {
        let d = Dataset::new(
            vec![0.3, 1.0],
            &[vec![0.0], vec![1.0]],
            vec!["x".into()],
            ResponseKind::Real,
        )
        .unwrap();
        let m = SvmClassifier::default();
        assert!(m.log_pseudolik(&[0.0, 0.0], &d.full_view()).is_err());
        let mut rng = RandomStream::new(0, 0);
        assert!(m.simulate(1.0, &d.full_view(), 10, 0, &mut rng).is_err());
    }

    #[test]
    fn cache_is_consistent() {
        let d = tiny();
        let m = SvmClassifier::default();
        let view = d.full_view();
        let mut rng = RandomStream::new(3, 1);
        let set = m.simulate(0.5, &view, 300, 100, &mut rng).unwrap();
        for i in 0..set.len() {
            let direct = m.log_pseudolik(set.particle(i), &view).unwrap();
            assert!((direct - set.log_pseudolik()[i]).abs() < 1e-10);
            assert!(set.log_pseudolik()[i] <= 0.0);
        }
    }
}
