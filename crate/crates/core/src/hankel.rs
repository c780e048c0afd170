//! The error-locator map as a `t x (t+1)` Hankel matrix of measurements.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::tolerance::Tolerances;
use crate::vector::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct HankelSystem {
    t: usize,
    alphas: Vec<Scalar>,
    matrix: Matrix,
}

impl HankelSystem {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn alphas(&self) -> &[Scalar] {
        &self.alphas
    }

    /// Row `r`, column `c` (0-based) holds `alpha[r + c]`.
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

/// Lays out `alpha_1 .. alpha_2t` as `H[r][c] = alpha_{r+c+1}` (0-based r, c).
pub fn build_hankel(alphas: &[Scalar]) -> Result<HankelSystem> {
    if alphas.len() < 2 || alphas.len() % 2 != 0 {
        return Err(Error::OddMeasurementCount(alphas.len()));
    }
    let t = alphas.len() / 2;
    let matrix = Matrix::from_fn(t, t + 1, |r, c| alphas[r + c]);
    Ok(HankelSystem {
        t,
        alphas: alphas.to_vec(),
        matrix,
    })
}

#[derive(Debug, Clone)]
pub struct HankelKernel {
    /// Unit-norm kernel vector `(v_1, ..., v_{t+1})`, first significant
    /// entry real positive.
    pub vector: Vec<Scalar>,
    pub dimension: usize,
    pub singular_values: Vec<f64>,
}

/// A nonzero kernel vector of `H`. With kernel dimension above one the
/// right singular vector of the smallest singular value is returned.
pub fn hankel_kernel(h: &HankelSystem, tol: &Tolerances) -> HankelKernel {
    let k = linalg::null_vector(&h.matrix, tol.kernel_factor);
    HankelKernel {
        vector: k.vector,
        dimension: k.dimension,
        singular_values: k.singular_values,
    }
}
