//! Small dense complex linear algebra used across the pipeline.

use nalgebra::{DMatrix, DVector};

use crate::vector::{Scalar, ZERO};

pub type Matrix = DMatrix<Scalar>;

pub fn from_rows<R: AsRef<[Scalar]>>(rows: &[R]) -> Matrix {
    let m = rows.len();
    let n = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
    Matrix::from_fn(m, n, |i, j| rows[i].as_ref()[j])
}

/// Numerical rank by Gaussian elimination with complete pivoting; pivots
/// at or below `rel_tol * max|a_ij|` are treated as zero.
pub fn rank(matrix: &Matrix, rel_tol: f64) -> usize {
    let mut a = matrix.clone();
    let (m, n) = a.shape();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let cutoff = rel_tol * scale;
    let mut r = 0;
    while r < m.min(n) {
        let (mut pi, mut pj, mut best) = (r, r, 0.0);
        for i in r..m {
            for j in r..n {
                let v = a[(i, j)].norm();
                if v > best {
                    (pi, pj, best) = (i, j, v);
                }
            }
        }
        if best <= cutoff {
            break;
        }
        a.swap_rows(r, pi);
        a.swap_columns(r, pj);
        let pivot = a[(r, r)];
        for i in r + 1..m {
            let f = a[(i, r)] / pivot;
            if f == ZERO {
                continue;
            }
            for j in r..n {
                let v = a[(r, j)];
                a[(i, j)] -= f * v;
            }
        }
        r += 1;
    }
    r
}

/// `|det|` is nonzero iff every partial-pivot LU pivot exceeds
/// `rel_tol * max|a_ij|`.
pub fn is_nonsingular(matrix: &Matrix, rel_tol: f64) -> bool {
    let n = matrix.nrows();
    n == matrix.ncols() && rank(matrix, rel_tol) == n
}

/// A unit vector spanning (part of) the numerical kernel of a matrix.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub vector: Vec<Scalar>,
    /// Number of singular values at or below the cutoff, counting the
    /// `cols - rows` structural zeros of a wide matrix.
    pub dimension: usize,
    pub singular_values: Vec<f64>,
}

/// Right singular vector of the smallest singular value.
///
/// Wide matrices are padded with zero rows so the decomposition is square
/// and the full right basis is available.
pub fn null_vector(matrix: &Matrix, cutoff_factor: f64) -> Kernel {
    let (m, n) = matrix.shape();
    let padded = if m < n {
        let mut p = Matrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(matrix);
        p
    } else {
        matrix.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = cutoff_factor * m.max(n) as f64 * f64::EPSILON * sigma_max;
    let dimension = sigma.iter().filter(|&&s| s <= cutoff).count();
    let (smallest, _) = sigma
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &s)| if s < bv { (i, s) } else { (bi, bv) });
    let mut vector: Vec<Scalar> = v_t.row(smallest).iter().map(|z| z.conj()).collect();
    normalize_phase(&mut vector);
    let mut singular_values = sigma;
    singular_values.sort_by(|a, b| b.total_cmp(a));
    Kernel {
        vector,
        dimension,
        singular_values,
    }
}

/// Unit Euclidean norm, first significant entry rotated to the positive real axis.
pub fn normalize_phase(v: &mut [Scalar]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let lead = v
        .iter()
        .find(|z| z.norm() > 1e-8 * peak)
        .copied()
        .unwrap_or(Scalar::new(1.0, 0.0));
    let rot = lead.conj() / (lead.norm() * norm);
    for z in v.iter_mut() {
        *z *= rot;
    }
}

/// Minimum-norm least-squares solution of `a x = b` via SVD.
pub fn least_squares(a: &Matrix, b: &[Scalar]) -> Vec<Scalar> {
    let rhs = DVector::from_column_slice(b);
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = a.nrows().max(a.ncols()) as f64 * f64::EPSILON * sigma_max;
    svd.solve(&rhs, eps)
        .map(|x| x.iter().copied().collect())
        .unwrap_or_else(|_| vec![ZERO; a.ncols()])
}

/// `max_i |(a x)_i - b_i|`.
pub fn residual_max(a: &Matrix, x: &[Scalar], b: &[Scalar]) -> f64 {
    let ax = a * DVector::from_column_slice(x);
    ax.iter().zip(b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    #[test]
    fn rank_of_simple_matrices() {
        let z = Matrix::zeros(3, 3);
        assert_eq!(rank(&z, 1e-9), 0);
        let i = Matrix::identity(3, 3);
        assert_eq!(rank(&i, 1e-9), 3);
        let r1 = from_rows(&[vec![c(1.0, 0.0), c(2.0, 1.0)], vec![c(2.0, 0.0), c(4.0, 2.0)]]);
        assert_eq!(rank(&r1, 1e-9), 1);
        assert!(!is_nonsingular(&r1, 1e-9));
    }

    #[test]
    fn null_vector_of_wide_matrix() {
        let h = from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)], vec![c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]]);
        let k = null_vector(&h, 1.0);
        assert_eq!(k.dimension, 1);
        // Kernel of [[1,2,3],[2,3,4]] is spanned by (1,-2,1).
        let s = 6f64.sqrt();
        let expected = [c(1.0 / s, 0.0), c(-2.0 / s, 0.0), c(1.0 / s, 0.0)];
        for (a, b) in k.vector.iter().zip(expected) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn null_vector_of_zero_matrix() {
        let k = null_vector(&Matrix::zeros(2, 3), 1.0);
        assert_eq!(k.dimension, 3);
        let norm: f64 = k.vector.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn least_squares_recovers_consistent_solution() {
        let a = from_rows(&[
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(1.0, 0.0), c(4.0, 0.0)],
        ]);
        let x = least_squares(&a, &[c(3.0, 0.0), c(4.0, 0.0), c(6.0, 0.0)]);
        assert!((x[0] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((x[1] - c(1.0, 0.0)).norm() < 1e-12);
    }
}
