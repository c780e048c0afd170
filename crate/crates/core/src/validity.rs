//! Conditions under which evenly spaced rows give an MDS check matrix, and
//! brute-force rank oracles for small matrices.

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::MatrixFamily;
use crate::linalg::{self, Matrix};
use crate::plan::MeasurementPlan;
use crate::tolerance::Tolerances;
use crate::vector::{Scalar, ZERO};

/// Largest matrix dimension accepted by [`all_minors_nonzero`].
pub const MAX_MINOR_DIM: usize = 12;
/// Above this many column subsets [`mds_rank_check`] samples instead.
pub const EXHAUSTIVE_LIMIT: u128 = 1_000_000;
pub const SAMPLED_SUBSETS: usize = 200;

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Evenly spaced Fourier rows with step `k` are MDS iff `gcd(n, k) = 1`.
pub fn check_fourier_step(n: usize, k: usize) -> bool {
    gcd(n, k) == 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub satisfied: bool,
    /// `min_{i != j} |(b_i / b_j)^k - 1|`; infinite for a single node.
    pub min_gap: f64,
    /// Pairs whose gap is below `Tolerances::ratio_warn`.
    pub near_violations: Vec<(usize, usize)>,
}

pub fn ratio_report(nodes: &[Scalar], k: usize, tol: &Tolerances) -> Result<RatioReport> {
    if let Some(i) = nodes.iter().position(|&b| b == ZERO) {
        return Err(Error::ZeroNode(i));
    }
    let mut min_gap = f64::INFINITY;
    let mut near_violations = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let gap = ((nodes[i] / nodes[j]).powu(k as u32) - 1.0).norm();
            min_gap = min_gap.min(gap);
            if gap <= tol.ratio_warn {
                near_violations.push((i, j));
            }
        }
    }
    Ok(RatioReport {
        satisfied: min_gap > tol.ratio_gap,
        min_gap,
        near_violations,
    })
}

/// True iff no ratio `b_i / b_j` (i != j) is a `k`-th root of unity.
pub fn check_ratio_condition(nodes: &[Scalar], k: usize, tol: &Tolerances) -> Result<bool> {
    ratio_report(nodes, k, tol).map(|r| r.satisfied)
}

/// Validity of an arithmetic plan for a power family, as an error naming
/// the violated condition.
pub fn require_valid_plan(family: &MatrixFamily, plan: &MeasurementPlan, tol: &Tolerances) -> Result<()> {
    let (_, k) = plan
        .progression()
        .ok_or_else(|| Error::InvalidPlan("decoding needs an arithmetic plan".into()))?;
    match family {
        MatrixFamily::Fourier { n } => {
            if !check_fourier_step(*n, k) {
                return Err(Error::StepNotCoprime { n: *n, k });
            }
        }
        MatrixFamily::Vandermonde { nodes } => {
            for i in 0..nodes.len() {
                for j in i + 1..nodes.len() {
                    if ((nodes[i] / nodes[j]).powu(k as u32) - 1.0).norm() <= tol.ratio_gap {
                        return Err(Error::RatioCondition { i, j, k });
                    }
                }
            }
        }
        _ => {}
    }
    Ok(())
}

fn submatrix(a: &Matrix, rows: &[usize], cols: &[usize]) -> Matrix {
    Matrix::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])])
}

/// Every square submatrix of order `<= max_order` is nonsingular.
pub fn all_minors_nonzero(matrix: &Matrix, max_order: usize, tol: &Tolerances) -> Result<bool> {
    let (m, n) = matrix.shape();
    if m > MAX_MINOR_DIM || n > MAX_MINOR_DIM {
        return Err(Error::BudgetExceeded(format!(
            "{m}x{n} matrix exceeds the {MAX_MINOR_DIM}x{MAX_MINOR_DIM} enumeration limit"
        )));
    }
    for order in 1..=max_order.min(m).min(n) {
        let row_sets: Vec<Vec<usize>> = (0..m).combinations(order).collect();
        let ok = row_sets.par_iter().all(|rows| {
            (0..n)
                .combinations(order)
                .all(|cols| linalg::is_nonsingular(&submatrix(matrix, rows, &cols), tol.rank))
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdsCheck {
    pub passed: bool,
    pub mode: CheckMode,
    pub subsets_checked: usize,
}

/// Every `u`-column submatrix of the `u x n` measurement matrix has full
/// rank, i.e. the rows check an MDS code of distance `u + 1`.
pub fn mds_rank_check(
    family: &MatrixFamily,
    plan: &MeasurementPlan,
    tol: &Tolerances,
    seed: u64,
) -> Result<MdsCheck> {
    let rows = family.measurement_matrix(plan)?;
    let a = linalg::from_rows(&rows);
    let (u, n) = a.shape();
    let all_rows: Vec<usize> = (0..u).collect();
    // Columns are scaled to unit peak first; rank does not depend on it.
    let full = |cols: &[usize]| {
        let mut sub = submatrix(&a, &all_rows, cols);
        for mut col in sub.column_iter_mut() {
            let peak = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if peak > 0.0 {
                col /= Scalar::new(peak, 0.0);
            }
        }
        linalg::rank(&sub, tol.rank) == u
    };
    if u > n {
        return Ok(MdsCheck {
            passed: false,
            mode: CheckMode::Exhaustive,
            subsets_checked: 0,
        });
    }
    let total = binomial(n, u);
    if total <= EXHAUSTIVE_LIMIT {
        let subsets: Vec<Vec<usize>> = (0..n).combinations(u).collect();
        let passed = subsets.par_iter().all(|cols| full(cols));
        Ok(MdsCheck {
            passed,
            mode: CheckMode::Exhaustive,
            subsets_checked: subsets.len(),
        })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let passed = (0..SAMPLED_SUBSETS).all(|_| {
            let mut cols = sample(&mut rng, n, u).into_vec();
            cols.sort_unstable();
            full(&cols)
        });
        Ok(MdsCheck {
            passed,
            mode: CheckMode::Sampled,
            subsets_checked: SAMPLED_SUBSETS,
        })
    }
}
