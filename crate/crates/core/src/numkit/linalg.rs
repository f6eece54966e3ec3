//! Small dense symmetric-positive-definite algebra.

use crate::error::{GpcError, Result};

/// Lower-triangular Cholesky factor, row-major with zeros above the diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerTriangular {
    dim: usize,
    data: Vec<f64>,
}

impl LowerTriangular {
    /// Factor a symmetric matrix given in row-major order. Only the lower
    /// triangle is read.
    pub fn factor(dim: usize, a: &[f64]) -> Result<Self> {
        if a.len() != dim * dim {
            return Err(GpcError::domain(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                a.len()
            )));
        }
        let mut l = vec![0.0; dim * dim];
        for j in 0..dim {
            let mut d = a[j * dim + j];
            for k in 0..j {
                d -= l[j * dim + k] * l[j * dim + k];
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(GpcError::NotPositiveDefinite { pivot: j, value: d });
            }
            let d = d.sqrt();
            l[j * dim + j] = d;
            for i in (j + 1)..dim {
                let mut s = a[i * dim + j];
                for k in 0..j {
                    s -= l[i * dim + k] * l[j * dim + k];
                }
                l[i * dim + j] = s / d;
            }
        }
        Ok(Self { dim, data: l })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Solve `L x = b`.
    pub fn solve_lower(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.data[i * n + k] * x[k];
            }
            x[i] = s / self.data[i * n + i];
        }
        x
    }

    /// Solve `Lᵀ x = b`.
    pub fn solve_upper(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut x = b.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= self.data[k * n + i] * x[k];
            }
            x[i] = s / self.data[i * n + i];
        }
        x
    }

    /// Solve `L Lᵀ x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.solve_upper(&self.solve_lower(b))
    }

    /// `L Lᵀ`, row-major.
    pub fn reconstruct(&self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..=i.min(j)).map(|k| self.get(i, k) * self.get(j, k)).sum();
            }
        }
        out
    }
}

/// A symmetric matrix that is known to admit a Cholesky factorization.
#[derive(Clone, Debug)]
pub struct SpdMatrix {
    dim: usize,
    data: Vec<f64>,
    chol: LowerTriangular,
}

impl SpdMatrix {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(GpcError::domain("SPD matrix storage has the wrong length"));
        }
        for i in 0..dim {
            for j in 0..i {
                let (a, b) = (data[i * dim + j], data[j * dim + i]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(GpcError::domain(format!(
                        "matrix is not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        let chol = LowerTriangular::factor(dim, &data)?;
        Ok(Self { dim, data, chol })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self::new(dim, data).expect("identity is SPD")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn cholesky(&self) -> &LowerTriangular {
        &self.chol
    }
}

pub fn cholesky_spd(a: &SpdMatrix) -> LowerTriangular {
    a.cholesky().clone()
}

pub fn spd_solve(a: &SpdMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.dim() {
        return Err(GpcError::domain("right-hand side length does not match matrix"));
    }
    Ok(a.cholesky().solve(b))
}
