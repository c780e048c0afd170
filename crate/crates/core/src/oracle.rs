//! Brute-force references: support enumeration for recovery and column
//! enumeration for code distance. Both are exponential and meant for
//! desk-scale cross-checks only.

use itertools::Itertools;
use nalgebra::DVector;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::MatrixFamily;
use crate::linalg::{self, Matrix};
use crate::plan::MeasurementPlan;
use crate::tolerance::Tolerances;
use crate::validity::binomial;
use crate::vector::{max_abs, Scalar, SparseVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub max_n: usize,
    pub max_t: usize,
    /// Relative residual below which a support is accepted.
    pub residual_tol: f64,
    /// Upper bound on `C(n, t)`.
    pub budget: u128,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_n: 16,
            max_t: 3,
            residual_tol: 1e-8,
            budget: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    Unique(SparseVector),
    /// At least two different sparse vectors explain the measurements.
    Ambiguous(Vec<SparseVector>),
    None,
}

/// Least squares through Householder QR; `None` when the columns are
/// numerically dependent.
fn qr_solve(a: Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let s = a.ncols();
    let qr = a.qr();
    let r = qr.r();
    let peak = r.diagonal().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if r.diagonal().iter().any(|z| z.norm() <= 1e-12 * peak) || peak == 0.0 {
        return None;
    }
    let qhb = qr.q().adjoint() * DVector::from_column_slice(b);
    let x = r.solve_upper_triangular(&qhb.rows(0, s).into_owned())?;
    Some(x.iter().copied().collect())
}

/// Tries every support of size `<= t` and returns the sparse vector(s)
/// consistent with the measurements.
pub fn brute_force_recover(
    family: &MatrixFamily,
    plan: &MeasurementPlan,
    alphas: &[Scalar],
    t: usize,
    cfg: &OracleConfig,
) -> Result<OracleOutcome> {
    let n = family.n();
    if n > cfg.max_n || t > cfg.max_t || binomial(n, t) > cfg.budget {
        return Err(Error::BudgetExceeded(format!(
            "n = {n}, t = {t} exceeds the oracle limits (n <= {}, t <= {}, C(n,t) <= {})",
            cfg.max_n, cfg.max_t, cfg.budget
        )));
    }
    if alphas.len() != plan.count() {
        return Err(Error::LengthMismatch {
            expected: plan.count(),
            actual: alphas.len(),
        });
    }
    let rows = family.measurement_matrix(plan)?;
    let a = linalg::from_rows(&rows);
    let scale = max_abs(alphas);
    if scale == 0.0 {
        return Ok(OracleOutcome::Unique(SparseVector::zeros(n)));
    }

    let mut found: Vec<SparseVector> = Vec::new();
    for size in 1..=t.min(n) {
        for support in (0..n).combinations(size) {
            let sub = Matrix::from_fn(a.nrows(), size, |i, q| a[(i, support[q])]);
            let Some(x) = qr_solve(sub.clone(), alphas) else {
                continue;
            };
            if linalg::residual_max(&sub, &x, alphas) > cfg.residual_tol * scale {
                continue;
            }
            let peak = max_abs(&x);
            let (s, v): (Vec<usize>, Vec<Scalar>) = support
                .iter()
                .zip(&x)
                .filter(|(_, z)| z.norm() > 1e-8 * peak)
                .map(|(&i, &z)| (i, z))
                .unzip();
            let candidate = SparseVector::new(n, s, v)?;
            let same = |w: &SparseVector| w.max_abs_diff(&candidate) <= 1e-6 * candidate.max_norm();
            if !found.iter().any(same) {
                found.push(candidate);
            }
        }
    }
    Ok(match found.len() {
        0 => OracleOutcome::None,
        1 => OracleOutcome::Unique(found.pop().expect("one candidate")),
        _ => OracleOutcome::Ambiguous(found),
    })
}

/// Limit on the number of column subsets [`exhaustive_distance`] inspects.
pub const DISTANCE_BUDGET: u128 = 2_000_000;

/// Minimum distance of the code with the given check matrix: the largest
/// `d` such that every `d - 1` columns are linearly independent.
pub fn exhaustive_distance<R: AsRef<[Scalar]> + Sync>(check_rows: &[R], tol: &Tolerances) -> Result<usize> {
    let a = linalg::from_rows(check_rows);
    let (m, n) = a.shape();
    let work: u128 = (1..=m.min(n)).map(|s| binomial(n, s)).sum();
    if work > DISTANCE_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{work} column subsets exceed the distance budget of {DISTANCE_BUDGET}"
        )));
    }
    for s in 1..=n {
        if s > m {
            return Ok(s);
        }
        let subsets: Vec<Vec<usize>> = (0..n).combinations(s).collect();
        let independent = subsets.par_iter().all(|cols| {
            let sub = Matrix::from_fn(m, s, |i, q| a[(i, cols[q])]);
            linalg::rank(&sub, tol.rank) == s
        });
        if !independent {
            return Ok(s);
        }
    }
    Ok(n + 1)
}
