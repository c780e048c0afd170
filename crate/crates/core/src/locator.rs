//! Support extraction from a Hankel kernel vector.
//!
//! The kernel vector `v` defines `f(x) = v_1 + v_2 x + ... + v_{t+1} x^t`.
//! Coordinate `i` of the locator word vanishes iff `f(beta_i^k) = 0`, so the
//! support is read off by evaluating `f` at every node power.

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::family::MatrixFamily;
use crate::tolerance::Tolerances;
use crate::validity::{check_fourier_step, gcd};
use crate::vector::{Scalar, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct LocatorPolynomial {
    coefficients: Vec<Scalar>,
}

impl LocatorPolynomial {
    /// Coefficients in increasing degree; must not all be zero.
    pub fn new(coefficients: Vec<Scalar>) -> Result<Self> {
        if coefficients.iter().all(|&z| z == ZERO) {
            return Err(Error::EmptySupport);
        }
        Ok(LocatorPolynomial { coefficients })
    }

    pub fn coefficients(&self) -> &[Scalar] {
        &self.coefficients
    }

    /// Maximum number of roots the locator may report.
    pub fn t(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, x: Scalar) -> Scalar {
        self.coefficients.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
    }
}

/// Indices whose magnitude is at most `threshold * max`, keeping the `cap`
/// smallest when more qualify. Returned in increasing order.
pub(crate) fn near_zeros(values: &[Scalar], threshold: f64, cap: usize) -> Result<Vec<usize>> {
    let mags: Vec<f64> = values.iter().map(|z| z.norm()).collect();
    let peak = mags.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::EmptySupport);
    }
    let mut hits: Vec<usize> = (0..mags.len()).filter(|&i| mags[i] <= threshold * peak).collect();
    if hits.len() > cap {
        hits.sort_by(|&a, &b| mags[a].total_cmp(&mags[b]).then(a.cmp(&b)));
        hits.truncate(cap);
    }
    hits.sort_unstable();
    Ok(hits)
}

/// Evaluates `f(beta_i^k)` at every node by Horner's rule, `O(n t)`.
pub fn support_by_horner(
    f: &LocatorPolynomial,
    family: &MatrixFamily,
    k: usize,
    tol: &Tolerances,
) -> Result<Vec<usize>> {
    let evals = (0..family.n())
        .map(|i| {
            family
                .node_power(i, k)
                .map(|x| f.eval(x))
                .ok_or_else(|| Error::UnsupportedFamily("locator needs a power family".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    near_zeros(&evals, tol.locator_zero, f.t())
}

pub(crate) fn mod_inverse(a: usize, n: usize) -> Option<usize> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(n as i128) as usize)
}

/// Evaluates `f` at all `n`-th roots of unity with one length-`n` transform
/// of the zero-padded coefficients, `O(n log n)`. Bin `j` holds
/// `f(omega^j)`, which belongs to node `i = j k^{-1} mod n`.
pub fn support_by_fft(f: &LocatorPolynomial, n: usize, k: usize, tol: &Tolerances) -> Result<Vec<usize>> {
    if n < 2 || !check_fourier_step(n, k) {
        return Err(Error::StepNotCoprime { n, k });
    }
    let k_inv = mod_inverse(k, n).ok_or(Error::StepNotCoprime { n, k })?;
    debug_assert_eq!(gcd(k_inv, n), 1);

    let mut bins = vec![ZERO; n];
    for (c, &v) in f.coefficients().iter().enumerate() {
        bins[c % n] += v;
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut bins);

    let mut evals = vec![ZERO; n];
    for (j, value) in bins.into_iter().enumerate() {
        evals[(j * k_inv) % n] = value;
    }
    near_zeros(&evals, tol.locator_zero, f.t())
}
