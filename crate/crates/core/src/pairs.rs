//! Randomly chosen error-correcting pairs.
//!
//! For a matrix whose square submatrices are all nonsingular, any `t + 1`
//! rows `U` and `t` rows `V` form a `t`-error-correcting pair for the code
//! checked by the star span `U * V`. Measuring `w` against a generating set
//! of that span is enough to decode it; the locator map is no longer Hankel
//! in general.

use std::collections::HashMap;
use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::MatrixFamily;
use crate::linalg::{self, Matrix};
use crate::locator::near_zeros;
use crate::syndrome::RecoveryResult;
use crate::tolerance::Tolerances;
use crate::validity::gcd;
use crate::vector::{max_abs, star, DenseVector, Scalar, SparseVector, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpanKey {
    /// Row `a + b` of a star-closed family (reduced mod `n` for Fourier).
    Sum(usize),
    /// `row(a) * row(b)` with `a <= b`.
    Product(usize, usize),
}

impl fmt::Display for SpanKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpanKey::Sum(s) => write!(f, "E_{s}"),
            SpanKey::Product(a, b) => write!(f, "E_{a}*E_{b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStrategy {
    UniformRandom,
    /// `U` and `V` in arithmetic progression with a shared difference, so
    /// the span has exactly `2t` generators.
    ArithmeticCompressed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCorrectingPair {
    family: MatrixFamily,
    u_indices: Vec<usize>,
    v_indices: Vec<usize>,
    generators: Vec<SpanKey>,
    rows: Vec<DenseVector>,
    rank: usize,
}

impl ErrorCorrectingPair {
    /// `|U| = t + 1`, `|V| = t`, indices distinct within each set.
    pub fn new(family: MatrixFamily, u_indices: Vec<usize>, v_indices: Vec<usize>, tol: &Tolerances) -> Result<Self> {
        let t = v_indices.len();
        if t == 0 || u_indices.len() != t + 1 {
            return Err(Error::InvalidPlan(format!(
                "pair needs |U| = t + 1 and |V| = t >= 1, got {} and {t}",
                u_indices.len()
            )));
        }
        let canon = |idx: &[usize]| -> Result<Vec<usize>> {
            let c = idx.iter().map(|&j| family.canonical_row(j)).collect::<Result<Vec<_>>>()?;
            let mut sorted = c.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != c.len() {
                return Err(Error::InvalidPlan(format!("repeated row in {idx:?}")));
            }
            Ok(c)
        };
        let u_indices = canon(&u_indices)?;
        let v_indices = canon(&v_indices)?;

        let mut generators: Vec<SpanKey> = u_indices
            .iter()
            .flat_map(|&a| v_indices.iter().map(move |&b| (a, b)))
            .map(|(a, b)| span_key(&family, a, b))
            .collect();
        generators.sort_unstable();
        generators.dedup();
        let rows = generators
            .iter()
            .map(|&key| generator_row(&family, key))
            .collect::<Result<Vec<_>>>()?;
        let rank = linalg::rank(&linalg::from_rows(&rows), tol.rank);
        Ok(ErrorCorrectingPair {
            family,
            u_indices,
            v_indices,
            generators,
            rows,
            rank,
        })
    }

    pub fn family(&self) -> &MatrixFamily {
        &self.family
    }

    pub fn t(&self) -> usize {
        self.v_indices.len()
    }

    pub fn u_indices(&self) -> &[usize] {
        &self.u_indices
    }

    pub fn v_indices(&self) -> &[usize] {
        &self.v_indices
    }

    /// Distinct generators of `U * V`, sorted; measurements follow this order.
    pub fn generators(&self) -> &[SpanKey] {
        &self.generators
    }

    /// Sum indices of the span for star-closed families.
    pub fn star_span_indices(&self) -> Option<Vec<usize>> {
        self.generators
            .iter()
            .map(|k| match k {
                SpanKey::Sum(s) => Some(*s),
                SpanKey::Product(..) => None,
            })
            .collect()
    }

    pub fn star_span_rows(&self) -> &[DenseVector] {
        &self.rows
    }

    /// Numerical rank of the generator rows.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn key(&self, a: usize, b: usize) -> SpanKey {
        span_key(&self.family, a, b)
    }

    /// `<g, w>` for every generator `g`, in generator order.
    pub fn measure(&self, w: &SparseVector) -> Result<Vec<Scalar>> {
        if w.len() != self.family.n() {
            return Err(Error::LengthMismatch {
                expected: self.family.n(),
                actual: w.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|r| w.iter().map(|(c, x)| r[c] * x).sum())
            .collect())
    }
}

fn span_key(family: &MatrixFamily, a: usize, b: usize) -> SpanKey {
    if family.is_star_closed() {
        match family.period() {
            Some(n) => SpanKey::Sum((a + b) % n),
            None => SpanKey::Sum(a + b),
        }
    } else {
        SpanKey::Product(a.min(b), a.max(b))
    }
}

fn generator_row(family: &MatrixFamily, key: SpanKey) -> Result<DenseVector> {
    match key {
        SpanKey::Sum(s) => family.row(s),
        SpanKey::Product(a, b) => star(&family.row(a)?, &family.row(b)?),
    }
}

/// Picks `U` (`t + 1` rows) and `V` (`t` rows) from the family's rows,
/// deterministically from `seed`.
pub fn choose_pair_random(
    family: &MatrixFamily,
    t: usize,
    seed: u64,
    strategy: PairStrategy,
    tol: &Tolerances,
) -> Result<ErrorCorrectingPair> {
    let universe = family.row_count().unwrap_or_else(|| family.n());
    if t == 0 || universe < 2 * t + 1 {
        return Err(Error::InvalidPlan(format!(
            "{universe} rows are too few for a {t}-error-correcting pair"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (u, v) = match strategy {
        PairStrategy::UniformRandom => (
            sample(&mut rng, universe, t + 1).into_vec(),
            sample(&mut rng, universe, t).into_vec(),
        ),
        PairStrategy::ArithmeticCompressed => {
            if !family.is_star_closed() {
                return Err(Error::UnsupportedFamily(
                    "arithmetic pairs need star-closed rows".into(),
                ));
            }
            match family.period() {
                Some(n) => {
                    let d = loop {
                        let d = rng.random_range(1..n);
                        if gcd(d, n) == 1 {
                            break d;
                        }
                    };
                    let a = rng.random_range(0..n);
                    let b = rng.random_range(0..n);
                    (
                        (0..=t).map(|q| (a + q * d) % n).collect(),
                        (0..t).map(|q| (b + q * d) % n).collect(),
                    )
                }
                None => {
                    let d = rng.random_range(1..=3);
                    let (a, b) = match family.row_count() {
                        // Stored rows cap the largest sum index at rows - 1.
                        Some(rows) => {
                            let room = (rows - 1).checked_sub((2 * t - 1) * d).ok_or_else(|| {
                                Error::InvalidPlan("not enough stored rows for an arithmetic pair".into())
                            })?;
                            let a = rng.random_range(0..=room);
                            (a, rng.random_range(0..=room - a))
                        }
                        None => (rng.random_range(0..universe), rng.random_range(0..universe)),
                    };
                    (
                        (0..=t).map(|q| a + q * d).collect(),
                        (0..t).map(|q| b + q * d).collect(),
                    )
                }
            }
        }
    };
    let (mut u, mut v) = (u, v);
    if strategy == PairStrategy::UniformRandom {
        u.sort_unstable();
        v.sort_unstable();
    }
    ErrorCorrectingPair::new(family.clone(), u, v, tol)
}

/// `M[b][a] = <w, row(u_a) * row(v_b)>`, a `t x (t+1)` matrix.
pub fn build_locator_matrix(pair: &ErrorCorrectingPair, measurements: &[Scalar]) -> Result<Matrix> {
    let position: HashMap<SpanKey, usize> = pair
        .generators
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, i))
        .collect();
    let t = pair.t();
    let mut m = Matrix::zeros(t, t + 1);
    for (b, &vb) in pair.v_indices.iter().enumerate() {
        for (a, &ua) in pair.u_indices.iter().enumerate() {
            let key = pair.key(ua, vb);
            let value = position
                .get(&key)
                .and_then(|&i| measurements.get(i))
                .ok_or_else(|| Error::MissingMeasurement(key.to_string()))?;
            m[(b, a)] = *value;
        }
    }
    Ok(m)
}

/// Decodes `w` from one measurement per span generator.
///
/// A kernel vector `v` of the locator matrix gives the word
/// `a = sum_q v_q row(u_q)`, which vanishes on the support of `w`. Values
/// come from least squares over every generator restricted to that support.
pub fn recover_with_pair(pair: &ErrorCorrectingPair, measurements: &[Scalar], tol: &Tolerances) -> Result<RecoveryResult> {
    if measurements.len() != pair.generators.len() {
        return Err(Error::LengthMismatch {
            expected: pair.generators.len(),
            actual: measurements.len(),
        });
    }
    let t = pair.t();
    let n = pair.family.n();
    let mut diagnostics = Vec::new();
    if pair.rank < 2 * t {
        diagnostics.push(format!("star span rank {} is below 2t = {}", pair.rank, 2 * t));
    }
    if measurements.iter().all(|&a| a == ZERO) {
        diagnostics.push("all measurements are zero".into());
        return Ok(RecoveryResult {
            solution: SparseVector::zeros(n),
            residual: 0.0,
            kernel_dimension: t + 1,
            support_size: 0,
            diagnostics,
        });
    }

    let locator = build_locator_matrix(pair, measurements)?;
    let kernel = linalg::null_vector(&locator, tol.kernel_factor);
    let mut word = vec![ZERO; n];
    for (&v, &ua) in kernel.vector.iter().zip(&pair.u_indices) {
        let row = pair.family.row(ua)?;
        for (acc, e) in word.iter_mut().zip(row.iter()) {
            *acc += v * e;
        }
    }
    let support = near_zeros(&word, tol.locator_zero, t)?;
    if support.is_empty() {
        return Err(Error::Inconsistent { t, residual: 1.0 });
    }

    let a = Matrix::from_fn(pair.rows.len(), support.len(), |g, q| pair.rows[g][support[q]]);
    let values = linalg::least_squares(&a, measurements);
    let peak = max_abs(&values);
    let (kept_support, kept_values): (Vec<usize>, Vec<Scalar>) = support
        .iter()
        .zip(&values)
        .filter(|(_, x)| x.norm() > tol.value_prune * peak)
        .map(|(&i, &x)| (i, x))
        .unzip();
    if kept_support.len() < support.len() {
        diagnostics.push(format!("pruned {} near-zero values", support.len() - kept_support.len()));
    }
    let solution = SparseVector::new(n, kept_support, kept_values)?;
    let predicted = pair.measure(&solution)?;
    let err = predicted
        .iter()
        .zip(measurements)
        .map(|(p, m)| (p - m).norm())
        .fold(0.0, f64::max);
    let residual = err / max_abs(measurements);
    if residual > tol.consistency {
        return Err(Error::Inconsistent { t, residual });
    }
    Ok(RecoveryResult {
        solution,
        residual,
        kernel_dimension: kernel.dimension,
        support_size: support.len(),
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::build_hankel;
    use crate::plan::MeasurementPlan;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    #[test]
    fn example_one_span() {
        let tol = Tolerances::default();
        let f = MatrixFamily::fourier(19).unwrap();
        let pair = ErrorCorrectingPair::new(f, vec![1, 3, 6, 10], vec![0, 5, 8], &tol).unwrap();
        assert_eq!(pair.star_span_indices().unwrap(), vec![1, 3, 6, 8, 9, 10, 11, 14, 15, 18]);
        assert_eq!(pair.rank(), 10);
    }

    #[test]
    fn example_two_span_has_twelve_generators() {
        let tol = Tolerances::default();
        let f = MatrixFamily::fourier(19).unwrap();
        let pair = ErrorCorrectingPair::new(f, vec![1, 3, 6, 10, 18], vec![1, 3, 6, 10], &tol).unwrap();
        assert_eq!(pair.star_span_indices().unwrap(), vec![0, 1, 2, 4, 5, 6, 7, 9, 11, 12, 13, 16]);
        assert_eq!(pair.rank(), 12);
    }

    #[test]
    fn hilbert_span_rows() {
        let tol = Tolerances::default();
        let h = MatrixFamily::hilbert(6).unwrap();
        let pair = ErrorCorrectingPair::new(h, vec![0, 1, 2], vec![0, 1], &tol).unwrap();
        assert_eq!(
            pair.generators(),
            &[
                SpanKey::Product(0, 0),
                SpanKey::Product(0, 1),
                SpanKey::Product(0, 2),
                SpanKey::Product(1, 1),
                SpanKey::Product(1, 2),
            ]
        );
        let leading: Vec<[f64; 4]> = vec![
            [1.0, 1.0 / 4.0, 1.0 / 9.0, 1.0 / 16.0],
            [1.0 / 2.0, 1.0 / 6.0, 1.0 / 12.0, 1.0 / 20.0],
            [1.0 / 3.0, 1.0 / 8.0, 1.0 / 15.0, 1.0 / 24.0],
            [1.0 / 4.0, 1.0 / 9.0, 1.0 / 16.0, 1.0 / 25.0],
            [1.0 / 6.0, 1.0 / 12.0, 1.0 / 20.0, 1.0 / 30.0],
        ];
        for (row, expected) in pair.star_span_rows().iter().zip(&leading) {
            for (got, want) in row.iter().zip(expected) {
                assert!((got.re - want).abs() < 1e-15 && got.im == 0.0);
            }
        }
        // 1/((c+1)(c+3)) is the mean of 1/((c+1)(c+2)) and 1/((c+2)(c+3)).
        assert_eq!(pair.rank(), 4);
    }

    #[test]
    fn arithmetic_compressed_span_is_2t() {
        let tol = Tolerances::default();
        let fams = [
            MatrixFamily::fourier(19).unwrap(),
            MatrixFamily::fourier(32).unwrap(),
            MatrixFamily::vandermonde((1..=10).map(|x| c(x as f64 * 0.3, 0.0)).collect()).unwrap(),
        ];
        for f in &fams {
            for t in 1..=4 {
                for seed in 0..20 {
                    let p = choose_pair_random(f, t, seed, PairStrategy::ArithmeticCompressed, &tol).unwrap();
                    let span = p.star_span_indices().unwrap();
                    assert_eq!(span.len(), 2 * t);
                    // Sum of two progressions with the same difference.
                    let d = match f.period() {
                        Some(n) => (p.u_indices()[1] + n - p.u_indices()[0]) % n,
                        None => p.u_indices()[1] - p.u_indices()[0],
                    };
                    let base = p.u_indices()[0] + p.v_indices()[0];
                    let mut expected: Vec<usize> = (0..2 * t)
                        .map(|s| match f.period() {
                            Some(n) => (base + s * d) % n,
                            None => base + s * d,
                        })
                        .collect();
                    expected.sort_unstable();
                    assert_eq!(span, expected);
                }
            }
        }
    }

    #[test]
    fn uniform_span_size_is_bounded() {
        let tol = Tolerances::default();
        let f = MatrixFamily::fourier(31).unwrap();
        for t in 1..=5 {
            for seed in 0..20 {
                let p = choose_pair_random(&f, t, seed, PairStrategy::UniformRandom, &tol).unwrap();
                let size = p.generators().len();
                assert!(size >= 2 * t && size <= t * (t + 1), "t={t} size={size}");
            }
        }
    }

    #[test]
    fn choice_is_deterministic_per_seed() {
        let tol = Tolerances::default();
        let f = MatrixFamily::fourier(23).unwrap();
        let a = choose_pair_random(&f, 3, 42, PairStrategy::UniformRandom, &tol).unwrap();
        let b = choose_pair_random(&f, 3, 42, PairStrategy::UniformRandom, &tol).unwrap();
        assert_eq!(a, b);
        assert!(choose_pair_random(&f, 12, 0, PairStrategy::UniformRandom, &tol).is_err());
        let h = MatrixFamily::hilbert(8).unwrap();
        assert!(choose_pair_random(&h, 2, 0, PairStrategy::ArithmeticCompressed, &tol).is_err());
    }

    #[test]
    fn locator_matrix_reduces_to_hankel() {
        let tol = Tolerances::default();
        let f = MatrixFamily::fourier(17).unwrap();
        let (a0, b0, d, t) = (2, 5, 3, 3);
        let pair = ErrorCorrectingPair::new(
            f.clone(),
            (0..=t).map(|q| a0 + q * d).collect(),
            (0..t).map(|q| b0 + q * d).collect(),
            &tol,
        )
        .unwrap();
        let w = SparseVector::new(17, vec![1, 4, 9], vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 0.7)]).unwrap();
        let span_meas = pair.measure(&w).unwrap();
        let m = build_locator_matrix(&pair, &span_meas).unwrap();
        let plan = MeasurementPlan::arithmetic(a0 + b0, d, 2 * t).unwrap();
        let h = build_hankel(&f.measure(&w, &plan).unwrap()).unwrap();
        assert_eq!(&m, h.matrix());
    }

    #[test]
    fn locator_matrix_for_t_one_and_missing_values() {
        let tol = Tolerances::default();
        let f = MatrixFamily::fourier(7).unwrap();
        let pair = ErrorCorrectingPair::new(f, vec![1, 4], vec![2], &tol).unwrap();
        // Generators E_3 and E_6.
        let m = build_locator_matrix(&pair, &[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(m.shape(), (1, 2));
        assert_eq!((m[(0, 0)], m[(0, 1)]), (c(1.0, 0.0), c(2.0, 0.0)));
        assert!(matches!(build_locator_matrix(&pair, &[c(1.0, 0.0)]), Err(Error::MissingMeasurement(_))));
    }

    #[test]
    fn example_one_recovery() {
        let tol = Tolerances::default();
        let f = MatrixFamily::fourier(19).unwrap();
        let pair = ErrorCorrectingPair::new(f, vec![1, 3, 6, 10], vec![0, 5, 8], &tol).unwrap();
        let w = SparseVector::new(19, vec![2, 11, 17], vec![c(0.8, -0.1), c(-1.2, 0.9), c(0.3, 0.4)]).unwrap();
        let meas = pair.measure(&w).unwrap();
        let m = build_locator_matrix(&pair, &meas).unwrap();
        assert_eq!(linalg::null_vector(&m, 1.0).dimension, 1);
        let r = recover_with_pair(&pair, &meas, &tol).unwrap();
        assert_eq!(r.solution.support(), w.support());
        assert!(r.solution.max_abs_diff(&w) <= 1e-8 * w.max_norm());
    }

    #[test]
    fn zero_measurements_recover_zero() {
        let tol = Tolerances::default();
        let f = MatrixFamily::fourier(19).unwrap();
        let pair = ErrorCorrectingPair::new(f, vec![1, 3, 6, 10], vec![0, 5, 8], &tol).unwrap();
        let r = recover_with_pair(&pair, &[ZERO; 10], &tol).unwrap();
        assert_eq!(r.solution.nnz(), 0);
    }

    #[test]
    fn positive_vandermonde_random_pair() {
        let tol = Tolerances::default();
        let f = MatrixFamily::vandermonde((1..=10).map(|x| c(0.5 + 0.15 * x as f64, 0.0)).collect()).unwrap();
        let supports = [[0, 9], [1, 5], [2, 3], [4, 8], [6, 7]];
        for seed in 0..10 {
            let pair = choose_pair_random(&f, 2, seed, PairStrategy::UniformRandom, &tol).unwrap();
            let support = supports[seed as usize % supports.len()].to_vec();
            let w = SparseVector::new(10, support, vec![c(1.0, 0.5), c(-0.7, 0.0)]).unwrap();
            let r = recover_with_pair(&pair, &pair.measure(&w).unwrap(), &tol).unwrap();
            assert_eq!(r.solution.support(), w.support(), "seed {seed}");
            assert!(r.solution.max_abs_diff(&w) <= 1e-8 * w.max_norm());
        }
    }

    #[test]
    fn hilbert_pair_recovery() {
        let tol = Tolerances::default();
        let h = MatrixFamily::hilbert(6).unwrap();
        let pair = ErrorCorrectingPair::new(h, vec![0, 1, 2], vec![0, 1], &tol).unwrap();
        let w = SparseVector::new(6, vec![1, 4], vec![c(1.0, 0.0), c(-2.0, 0.0)]).unwrap();
        let r = recover_with_pair(&pair, &pair.measure(&w).unwrap(), &tol).unwrap();
        assert_eq!(r.solution.support(), &[1, 4]);
        assert!(r.solution.max_abs_diff(&w) <= 1e-8 * w.max_norm());
    }

    #[test]
    fn corrupted_pair_measurement_is_flagged() {
        let tol = Tolerances::default();
        let f = MatrixFamily::fourier(19).unwrap();
        let pair = ErrorCorrectingPair::new(f, vec![1, 3, 6, 10], vec![0, 5, 8], &tol).unwrap();
        let w = SparseVector::new(19, vec![2, 11, 17], vec![c(0.8, -0.1), c(-1.2, 0.9), c(0.3, 0.4)]).unwrap();
        let mut meas = pair.measure(&w).unwrap();
        meas[3] *= 1.1;
        assert!(matches!(recover_with_pair(&pair, &meas, &tol), Err(Error::Inconsistent { .. })));
    }
}
