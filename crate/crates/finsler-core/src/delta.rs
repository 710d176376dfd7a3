//! Difference tensors of affine connections.

use crate::error::{FinslerError, Result};
use nalgebra::{DMatrix, DVector};

/// A dimension-n tensor T^i_{jk}, symmetric in the lower index pair — the
/// difference of two torsion-free connections.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionDelta {
    dim: usize,
    /// Row-major storage, index i*n*n + j*n + k.
    entries: Vec<f64>,
}

impl ConnectionDelta {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.entries[i * self.dim * self.dim + j * self.dim + k]
    }

    /// Sets T^i_{jk} and T^i_{kj} simultaneously.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        let n = self.dim;
        self.entries[i * n * n + j * n + k] = value;
        self.entries[i * n * n + k * n + j] = value;
    }

    /// Parse a nested array [i][j][k]; entries must be symmetric in (j, k) up
    /// to rounding. The stored tensor is the symmetrization.
    pub fn from_nested(nested: &[Vec<Vec<f64>>]) -> Result<Self> {
        let n = nested.len();
        if n == 0 {
            return Err(FinslerError::InvalidParameter("empty tensor".into()));
        }
        let mut delta = Self::zeros(n);
        let mut scale: f64 = 0.0;
        for layer in nested {
            if layer.len() != n {
                return Err(FinslerError::DimensionMismatch {
                    expected: n,
                    got: layer.len(),
                });
            }
            for row in layer {
                if row.len() != n {
                    return Err(FinslerError::DimensionMismatch {
                        expected: n,
                        got: row.len(),
                    });
                }
                for &v in row {
                    scale = scale.max(v.abs());
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    let a = nested[i][j][k];
                    let b = nested[i][k][j];
                    if (a - b).abs() > 1e-9 * (1.0 + scale) {
                        return Err(FinslerError::AsymmetricLowerIndices);
                    }
                    delta.set(i, j, k, 0.5 * (a + b));
                }
            }
        }
        Ok(delta)
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| (0..self.dim).map(|k| self.get(i, j, k)).collect())
                    .collect()
            })
            .collect()
    }

    /// T^i_{jk} = g_{jk} (g^{-1} sigma)^i: the difference between the flat
    /// connection of a constant Riemannian metric g and the connection its
    /// conformal rescaling along sigma is geodesically equivalent to.
    pub fn randers(g: &DMatrix<f64>, sigma: &DVector<f64>) -> Result<Self> {
        let n = g.nrows();
        if g.ncols() != n || sigma.len() != n {
            return Err(FinslerError::DimensionMismatch {
                expected: n,
                got: sigma.len(),
            });
        }
        let chol = g
            .clone()
            .cholesky()
            .ok_or(FinslerError::NotPositiveDefinite)?;
        let sigma_up = chol.solve(sigma);
        let mut delta = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    delta.set(i, j, k, g[(j, k)] * sigma_up[i]);
                }
            }
        }
        Ok(delta)
    }

    /// T^i_{jk} y^j y^k.
    pub fn contract_quadratic(&self, y: &[f64]) -> DVector<f64> {
        let n = self.dim;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                for k in 0..n {
                    acc += self.get(i, j, k) * y[j] * y[k];
                }
            }
            out[i] = acc;
        }
        out
    }

    /// Matrix M[i, j] = T^i_{jk} y^k.
    pub fn contract_last(&self, y: &[f64]) -> DMatrix<f64> {
        let n = self.dim;
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += self.get(i, j, k) * y[k];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn negated(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// The constant tensor T^i_{jk} = [i == 0][j == k]: the simplest tensor
    /// with a full prolongation solution space, matching the flat metric with
    /// the covector (1, 0, ..., 0).
    pub fn simple(dim: usize) -> Self {
        let mut delta = Self::zeros(dim);
        for j in 0..dim {
            delta.set(0, j, j, 1.0);
        }
        delta
    }
}
