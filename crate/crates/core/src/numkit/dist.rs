//! Samplers for the laws the Gibbs kernels need.

use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma, StandardNormal};

use super::linalg::LowerTriangular;
use crate::error::{GpcError, Result};

fn positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(GpcError::domain(format!("{name} must be positive and finite, got {value}")))
    }
}

#[inline]
pub fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// `mean + L z` with `z` standard normal, so the draw has covariance `L Lᵀ`.
pub fn mvn<R: Rng + ?Sized>(mean: &[f64], chol: &LowerTriangular, rng: &mut R) -> Result<Vec<f64>> {
    let k = chol.dim();
    if mean.len() != k {
        return Err(GpcError::domain(format!(
            "mvn mean has length {} but factor is {k}x{k}",
            mean.len()
        )));
    }
    let z: Vec<f64> = (0..k).map(|_| std_normal(rng)).collect();
    let mut out = mean.to_vec();
    for (i, o) in out.iter_mut().enumerate() {
        *o += (0..=i).map(|j| chol.get(i, j) * z[j]).sum::<f64>();
    }
    Ok(out)
}

/// Draw from `N(P⁻¹h, P⁻¹)` given the Cholesky factor `L` of the precision `P`.
pub fn mvn_canonical<R: Rng + ?Sized>(
    precision_chol: &LowerTriangular,
    linear: &[f64],
    rng: &mut R,
) -> Vec<f64> {
    let mean = precision_chol.solve(linear);
    let z: Vec<f64> = (0..precision_chol.dim()).map(|_| std_normal(rng)).collect();
    // Lᵀ x = z gives x ~ N(0, P⁻¹).
    let noise = precision_chol.solve_upper(&z);
    mean.iter().zip(noise).map(|(m, e)| m + e).collect()
}

/// Inverse-gamma with shape `a` and rate `b`: density ∝ x^{-a-1} e^{-b/x}, mean `b/(a−1)`.
pub fn inverse_gamma<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> Result<f64> {
    positive("inverse-gamma shape", shape)?;
    positive("inverse-gamma rate", rate)?;
    let g = Gamma::new(shape, 1.0 / rate).map_err(|e| GpcError::domain(e.to_string()))?;
    Ok(1.0 / g.sample(rng))
}

/// Inverse-Gaussian with mean `mu` and shape `lambda` (Michael–Schucany–Haas).
///
/// The smaller root is formed as `mu / (1 + r + sqrt(r² + 2r))` with
/// `r = mu·y/(2λ)`, which stays accurate when `mu` is huge.
pub fn inverse_gaussian<R: Rng + ?Sized>(mu: f64, lambda: f64, rng: &mut R) -> Result<f64> {
    positive("inverse-gaussian mean", mu)?;
    positive("inverse-gaussian shape", lambda)?;
    let nu = std_normal(rng);
    let r = mu * nu * nu / (2.0 * lambda);
    let x = mu / (1.0 + r + (r * r + 2.0 * r).sqrt());
    let u: f64 = rng.random();
    if u * (mu + x) <= mu {
        Ok(x)
    } else {
        Ok(mu * mu / x)
    }
}

pub fn exponential<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> Result<f64> {
    positive("exponential rate", rate)?;
    let d = Exp::new(rate).map_err(|e| GpcError::domain(e.to_string()))?;
    Ok(d.sample(rng))
}

pub fn uniform_index<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<usize> {
    if n == 0 {
        return Err(GpcError::domain("uniform_index over an empty range"));
    }
    Ok(rng.random_range(0..n))
}
