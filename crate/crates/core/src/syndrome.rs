//! Values on the located support, and the end-to-end decoder.
//!
//! With measurement rows `j_s = j_1 + (s-1) k` and support nodes
//! `gamma_q = beta_{i_q}^k`, the restricted syndrome equations become a
//! pure-power Vandermonde system in the scaled unknowns
//! `y_q = beta_{i_q}^{j_1} x_q`. The first `|support|` equations determine
//! `y`; the rest are a consistency check.

use crate::error::{Error, Result};
use crate::family::MatrixFamily;
use crate::hankel::{build_hankel, hankel_kernel};
use crate::linalg::{self, Matrix};
use crate::locator::{near_zeros, support_by_fft, support_by_horner, LocatorPolynomial};
use crate::plan::MeasurementPlan;
use crate::tolerance::Tolerances;
use crate::validity::require_valid_plan;
use crate::vector::{max_abs, Scalar, SparseVector, ZERO};

/// Solves `sum_q gamma_q^r y_q = rhs_r` for `r = 0..m-1` in `O(m^2)`
/// (Björck–Pereyra, primal form).
pub fn solve_vandermonde_primal(nodes: &[Scalar], rhs: &[Scalar]) -> Result<Vec<Scalar>> {
    let m = nodes.len();
    if rhs.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            actual: rhs.len(),
        });
    }
    for i in 0..m {
        if let Some(j) = (i + 1..m).find(|&j| nodes[i] == nodes[j]) {
            return Err(Error::DuplicateNodes(i, j));
        }
    }
    let mut b = rhs.to_vec();
    if m == 0 {
        return Ok(b);
    }
    let n = m - 1;
    for k in 0..n {
        for i in (k + 1..=n).rev() {
            let prev = b[i - 1];
            b[i] -= nodes[k] * prev;
        }
    }
    for k in (0..n).rev() {
        for i in k + 1..=n {
            b[i] /= nodes[i] - nodes[i - k - 1];
        }
        for i in k..n {
            let next = b[i + 1];
            b[i] -= next;
        }
    }
    Ok(b)
}

/// The restricted syndrome system on a located support.
#[derive(Debug, Clone, PartialEq)]
pub struct SyndromeSystem {
    /// `gamma_q = beta_{i_q}^k`.
    pub nodes: Vec<Scalar>,
    pub rhs: Vec<Scalar>,
    /// `beta_{i_q}^{j_1}`.
    pub scales: Vec<Scalar>,
}

impl SyndromeSystem {
    pub fn new(family: &MatrixFamily, plan: &MeasurementPlan, support: &[usize], alphas: &[Scalar]) -> Result<Self> {
        let (start, step) = plan
            .progression()
            .ok_or_else(|| Error::InvalidPlan("syndrome system needs an arithmetic plan".into()))?;
        let power = |i: usize, p: usize| {
            family
                .node_power(i, p)
                .ok_or_else(|| Error::UnsupportedFamily("syndrome system needs a power family".into()))
        };
        Ok(SyndromeSystem {
            nodes: support.iter().map(|&i| power(i, step)).collect::<Result<_>>()?,
            rhs: alphas.to_vec(),
            scales: support.iter().map(|&i| power(i, start)).collect::<Result<_>>()?,
        })
    }

    /// `rows x m` matrix `gamma_q^r`.
    fn power_matrix(&self, rows: usize) -> Matrix {
        Matrix::from_fn(rows, self.nodes.len(), |r, q| self.nodes[q].powu(r as u32))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyndromeSolution {
    pub solution: SparseVector,
    /// `max_s |<E_{j_s}, w_hat> - alpha_s| / max_s |alpha_s|`.
    pub residual: f64,
    pub least_squares: bool,
    /// Located indices whose value fell below the prune threshold.
    pub pruned: Vec<usize>,
}

fn relative_residual(family: &MatrixFamily, plan: &MeasurementPlan, w: &SparseVector, alphas: &[Scalar]) -> Result<f64> {
    let predicted = family.measure(w, plan)?;
    let err = predicted
        .iter()
        .zip(alphas)
        .map(|(p, a)| (p - a).norm())
        .fold(0.0, f64::max);
    let scale = max_abs(alphas);
    Ok(if scale > 0.0 { err / scale } else { err })
}

/// Values of `w` on `support` from the measurements of an arithmetic plan.
///
/// With `|support| = t` the primal Vandermonde solve on the first `t`
/// equations is used; with fewer, least squares over the first `2t`. Every
/// measurement of the plan enters the residual.
pub fn solve_syndrome(
    family: &MatrixFamily,
    plan: &MeasurementPlan,
    support: &[usize],
    alphas: &[Scalar],
    t: usize,
    tol: &Tolerances,
) -> Result<SyndromeSolution> {
    if alphas.len() != plan.count() {
        return Err(Error::LengthMismatch {
            expected: plan.count(),
            actual: alphas.len(),
        });
    }
    if 2 * t > alphas.len() {
        return Err(Error::InvalidPlan(format!("{} measurements cannot decode t = {t}", alphas.len())));
    }
    if support.len() > t {
        return Err(Error::Inconsistent { t, residual: f64::INFINITY });
    }
    let n = family.n();
    let m = support.len();

    let (values, least_squares) = if m == 0 {
        (Vec::new(), false)
    } else if family.node(0).is_some() {
        let sys = SyndromeSystem::new(family, plan, support, alphas)?;
        let (y, ls) = if m == t {
            (solve_vandermonde_primal(&sys.nodes, &alphas[..m])?, false)
        } else {
            (linalg::least_squares(&sys.power_matrix(2 * t), &alphas[..2 * t]), true)
        };
        (y.iter().zip(&sys.scales).map(|(y, s)| y / s).collect(), ls)
    } else {
        // Star-closed explicit rows: no nodes, solve the restricted system directly.
        let a = Matrix::from_fn(2 * t, m, |s, q| family.entry(plan.index(s), support[q]).unwrap_or(ZERO));
        (linalg::least_squares(&a, &alphas[..2 * t]), true)
    };

    let peak = max_abs(&values);
    let mut kept_support = Vec::with_capacity(m);
    let mut kept_values = Vec::with_capacity(m);
    let mut pruned = Vec::new();
    for (&i, &x) in support.iter().zip(&values) {
        if x.norm() > tol.value_prune * peak {
            kept_support.push(i);
            kept_values.push(x);
        } else {
            pruned.push(i);
        }
    }
    let solution = SparseVector::new(n, kept_support, kept_values)?;
    let residual = relative_residual(family, plan, &solution, alphas)?;
    if residual > tol.consistency {
        return Err(Error::Inconsistent { t, residual });
    }
    Ok(SyndromeSolution {
        solution,
        residual,
        least_squares,
        pruned,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub solution: SparseVector,
    pub residual: f64,
    pub kernel_dimension: usize,
    /// Number of indices the locator reported, before pruning.
    pub support_size: usize,
    pub diagnostics: Vec<String>,
}

/// Decodes a `t`-sparse `w` from the measurements of an arithmetic plan:
/// Hankel kernel, locator zeros, then the syndrome solve.
///
/// The first `2t` measurements drive decoding; all of them are checked.
pub fn recover(
    family: &MatrixFamily,
    plan: &MeasurementPlan,
    alphas: &[Scalar],
    t: usize,
    tol: &Tolerances,
) -> Result<RecoveryResult> {
    if t == 0 || plan.count() < 2 * t {
        return Err(Error::InvalidPlan(format!(
            "{} measurements cannot decode t = {t}",
            plan.count()
        )));
    }
    if alphas.len() != plan.count() {
        return Err(Error::LengthMismatch {
            expected: plan.count(),
            actual: alphas.len(),
        });
    }
    let (start, step) = plan
        .progression()
        .ok_or_else(|| Error::InvalidPlan("decoding needs an arithmetic plan".into()))?;
    match family {
        MatrixFamily::Cauchy { .. } => {
            return Err(Error::UnsupportedFamily(
                "Cauchy rows are not star-closed; decode with an error-correcting pair".into(),
            ))
        }
        MatrixFamily::Explicit { star_closed: false, .. } => {
            return Err(Error::UnsupportedFamily("explicit rows are not marked star-closed".into()))
        }
        _ => {}
    }
    require_valid_plan(family, plan, tol)?;

    let n = family.n();
    let mut diagnostics = Vec::new();
    if plan.count() > 2 * t {
        diagnostics.push(format!(
            "decoded from the first {} of {} measurements; all enter the residual",
            2 * t,
            plan.count()
        ));
    }
    if alphas.iter().all(|&a| a == ZERO) {
        diagnostics.push("all measurements are zero".into());
        return Ok(RecoveryResult {
            solution: SparseVector::zeros(n),
            residual: 0.0,
            kernel_dimension: t + 1,
            support_size: 0,
            diagnostics,
        });
    }

    let hankel = build_hankel(&alphas[..2 * t])?;
    let kernel = hankel_kernel(&hankel, tol);
    if kernel.dimension > 1 {
        diagnostics.push(format!(
            "kernel dimension {} suggests fewer than {t} nonzeros",
            kernel.dimension
        ));
    }
    let locator = LocatorPolynomial::new(kernel.vector.clone())?;
    let support = match family {
        MatrixFamily::Fourier { n } => support_by_fft(&locator, *n, step, tol)?,
        MatrixFamily::Vandermonde { .. } => support_by_horner(&locator, family, step, tol)?,
        _ => {
            let mut word = vec![ZERO; n];
            for (q, &v) in kernel.vector.iter().enumerate() {
                let row = family.row(start + q * step)?;
                for (acc, e) in word.iter_mut().zip(row.iter()) {
                    *acc += v * e;
                }
            }
            near_zeros(&word, tol.locator_zero, t)?
        }
    };
    if support.is_empty() {
        return Err(Error::Inconsistent { t, residual: 1.0 });
    }

    let solved = solve_syndrome(family, plan, &support, alphas, t, tol)?;
    if !solved.pruned.is_empty() {
        diagnostics.push(format!("pruned near-zero values at {:?}", solved.pruned));
    }
    Ok(RecoveryResult {
        solution: solved.solution,
        residual: solved.residual,
        kernel_dimension: kernel.dimension,
        support_size: support.len(),
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::root_of_unity;
    use nalgebra::DVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn dense_lu_solve(nodes: &[Scalar], rhs: &[Scalar]) -> Vec<Scalar> {
        let m = nodes.len();
        let a = Matrix::from_fn(m, m, |r, q| nodes[q].powu(r as u32));
        a.lu()
            .solve(&DVector::from_column_slice(rhs))
            .unwrap()
            .iter()
            .copied()
            .collect()
    }

    #[test]
    fn primal_small_cases() {
        let y = solve_vandermonde_primal(&[c(0.3, 2.0)], &[c(5.0, -1.0)]).unwrap();
        assert_eq!(y, vec![c(5.0, -1.0)]);
        let y = solve_vandermonde_primal(&[c(1.0, 0.0), c(2.0, 0.0)], &[c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert_eq!(y, vec![c(2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(
            solve_vandermonde_primal(&[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)], &[ZERO; 3]),
            Err(Error::DuplicateNodes(0, 2))
        );
    }

    #[test]
    fn primal_matches_dense_lu() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in 1..=20 {
            // Well separated nodes: perturbed points on a circle.
            let nodes: Vec<Scalar> = (0..m)
                .map(|q| {
                    let angle = std::f64::consts::TAU * (q as f64 + rng.random_range(-0.2..0.2)) / m as f64;
                    Scalar::from_polar(rng.random_range(0.9..1.1), angle)
                })
                .collect();
            let rhs: Vec<Scalar> = (0..m).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let bp = solve_vandermonde_primal(&nodes, &rhs).unwrap();
            let lu = dense_lu_solve(&nodes, &rhs);
            let scale = max_abs(&lu);
            let err = bp.iter().zip(&lu).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err <= 1e-10 * scale, "m={m}: err {err:e} scale {scale:e}");
        }
    }

    #[test]
    fn single_value_closed_form() {
        let tol = Tolerances::default();
        let fam = MatrixFamily::fourier(8).unwrap();
        let plan = MeasurementPlan::arithmetic(1, 1, 2).unwrap();
        let (p, amp) = (5, c(-1.5, 0.5));
        let alphas = [amp * root_of_unity(8, p), amp * root_of_unity(8, 2 * p)];
        let s = solve_syndrome(&fam, &plan, &[p], &alphas, 1, &tol).unwrap();
        assert_eq!(s.solution.support(), &[p]);
        assert!((s.solution.values()[0] - amp).norm() < 1e-14);
        assert!(!s.least_squares);
    }

    #[test]
    fn empty_support_with_zero_measurements() {
        let tol = Tolerances::default();
        let fam = MatrixFamily::fourier(8).unwrap();
        let plan = MeasurementPlan::arithmetic(1, 1, 4).unwrap();
        let s = solve_syndrome(&fam, &plan, &[], &[ZERO; 4], 2, &tol).unwrap();
        assert_eq!(s.solution.nnz(), 0);
        assert_eq!(s.residual, 0.0);
    }

    #[test]
    fn wrong_support_is_inconsistent() {
        let tol = Tolerances::default();
        let fam = MatrixFamily::fourier(8).unwrap();
        let plan = MeasurementPlan::arithmetic(1, 1, 4).unwrap();
        let w = SparseVector::new(8, vec![2, 5], vec![c(1.0, 0.0), c(-2.0, 0.0)]).unwrap();
        let alphas = fam.measure(&w, &plan).unwrap();
        assert!(matches!(
            solve_syndrome(&fam, &plan, &[1, 5], &alphas, 2, &tol),
            Err(Error::Inconsistent { .. })
        ));
    }

    #[test]
    fn end_to_end_fourier_8() {
        let tol = Tolerances::default();
        let fam = MatrixFamily::fourier(8).unwrap();
        let plan = MeasurementPlan::arithmetic(1, 1, 4).unwrap();
        let w = SparseVector::new(8, vec![2, 5], vec![c(1.0, 0.0), c(-2.0, 0.0)]).unwrap();
        let alphas = fam.measure(&w, &plan).unwrap();
        let r = recover(&fam, &plan, &alphas, 2, &tol).unwrap();
        assert_eq!(r.solution.support(), &[2, 5]);
        assert!(r.solution.max_abs_diff(&w) < 1e-12);
        assert!(r.residual < 1e-10);
        assert_eq!(r.kernel_dimension, 1);
    }

    #[test]
    fn zero_vector_recovers_as_zero() {
        let tol = Tolerances::default();
        let fam = MatrixFamily::fourier(8).unwrap();
        let plan = MeasurementPlan::arithmetic(0, 3, 6).unwrap();
        let r = recover(&fam, &plan, &[ZERO; 6], 3, &tol).unwrap();
        assert_eq!(r.solution, SparseVector::zeros(8));
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn fourier_19_step_5() {
        let tol = Tolerances::default();
        let fam = MatrixFamily::fourier(19).unwrap();
        let plan = MeasurementPlan::arithmetic(2, 5, 6).unwrap();
        let w = SparseVector::new(19, vec![0, 7, 13], vec![c(0.4, 1.0), c(-1.3, 0.2), c(0.9, -0.9)]).unwrap();
        let r = recover(&fam, &plan, &fam.measure(&w, &plan).unwrap(), 3, &tol).unwrap();
        assert!(r.solution.max_abs_diff(&w) <= 1e-8 * w.max_norm());
        assert_eq!(r.solution.support(), w.support());
    }

    #[test]
    fn vandermonde_positive_nodes() {
        let tol = Tolerances::default();
        let fam = MatrixFamily::vandermonde((1..=8).map(|x| c(x as f64, 0.0)).collect()).unwrap();
        let plan = MeasurementPlan::arithmetic(0, 1, 4).unwrap();
        let w = SparseVector::new(8, vec![1, 6], vec![c(2.0, 0.0), c(-0.5, 0.5)]).unwrap();
        let r = recover(&fam, &plan, &fam.measure(&w, &plan).unwrap(), 2, &tol).unwrap();
        assert_eq!(r.solution.support(), &[1, 6]);
        assert!(r.solution.max_abs_diff(&w) <= 1e-8 * w.max_norm());
    }

    #[test]
    fn under_sparse_input_is_pruned() {
        let tol = Tolerances::default();
        let fam = MatrixFamily::fourier(16).unwrap();
        let plan = MeasurementPlan::arithmetic(3, 5, 8).unwrap();
        let w = SparseVector::new(16, vec![9], vec![c(0.0, 2.0)]).unwrap();
        let r = recover(&fam, &plan, &fam.measure(&w, &plan).unwrap(), 4, &tol).unwrap();
        assert_eq!(r.kernel_dimension, 4);
        assert_eq!(r.solution.support(), &[9]);
        assert!(r.solution.max_abs_diff(&w) < 1e-10);
    }

    #[test]
    fn corrupted_measurement_is_flagged() {
        let tol = Tolerances::default();
        let fam = MatrixFamily::fourier(16).unwrap();
        let plan = MeasurementPlan::arithmetic(1, 3, 6).unwrap();
        let w = SparseVector::new(16, vec![2, 7, 12], vec![c(1.0, 0.0), c(0.5, -1.0), c(-1.0, 0.25)]).unwrap();
        let mut alphas = fam.measure(&w, &plan).unwrap();
        alphas[4] *= 1.1;
        assert!(matches!(recover(&fam, &plan, &alphas, 3, &tol), Err(Error::Inconsistent { .. })));
    }

    #[test]
    fn extra_measurements_enter_the_residual() {
        let tol = Tolerances::default();
        let fam = MatrixFamily::fourier(16).unwrap();
        let plan = MeasurementPlan::arithmetic(1, 3, 7).unwrap();
        let w = SparseVector::new(16, vec![4, 10], vec![c(1.0, 1.0), c(2.0, 0.0)]).unwrap();
        let mut alphas = fam.measure(&w, &plan).unwrap();
        let ok = recover(&fam, &plan, &alphas, 2, &tol).unwrap();
        assert!(ok.diagnostics.iter().any(|d| d.contains("first 4 of 7")));
        alphas[6] += c(0.1, 0.0);
        assert!(matches!(recover(&fam, &plan, &alphas, 2, &tol), Err(Error::Inconsistent { .. })));
    }

    #[test]
    fn invalid_configurations_are_rejected() {
        let tol = Tolerances::default();
        let fam = MatrixFamily::fourier(8).unwrap();
        let plan = MeasurementPlan::arithmetic(0, 2, 4).unwrap();
        assert_eq!(recover(&fam, &plan, &[ZERO; 4], 2, &tol), Err(Error::StepNotCoprime { n: 8, k: 2 }));
        let plan = MeasurementPlan::arithmetic(0, 1, 3).unwrap();
        assert!(matches!(recover(&fam, &plan, &[ZERO; 3], 2, &tol), Err(Error::InvalidPlan(_))));
        let v = MatrixFamily::vandermonde(vec![c(1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let plan = MeasurementPlan::arithmetic(0, 2, 2).unwrap();
        assert!(matches!(recover(&v, &plan, &[ZERO; 2], 1, &tol), Err(Error::RatioCondition { .. })));
        let h = MatrixFamily::hilbert(4).unwrap();
        let plan = MeasurementPlan::arithmetic(0, 1, 2).unwrap();
        assert!(matches!(recover(&h, &plan, &[ZERO; 2], 1, &tol), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn explicit_star_closed_family_uses_word_locator() {
        let tol = Tolerances::default();
        let fourier = MatrixFamily::fourier(11).unwrap();
        let rows: Vec<Vec<Scalar>> = (0..11).map(|j| fourier.row(j).unwrap().into_vec()).collect();
        let fam = MatrixFamily::explicit(rows, true).unwrap();
        let plan = MeasurementPlan::arithmetic(1, 1, 4).unwrap();
        let w = SparseVector::new(11, vec![3, 8], vec![c(1.0, -1.0), c(0.5, 0.0)]).unwrap();
        let r = recover(&fam, &plan, &fam.measure(&w, &plan).unwrap(), 2, &tol).unwrap();
        assert_eq!(r.solution.support(), &[3, 8]);
        assert!(r.solution.max_abs_diff(&w) < 1e-10);
    }
}
