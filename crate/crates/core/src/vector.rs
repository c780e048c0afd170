use std::ops::{Deref, Index};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalars are complex doubles throughout.
pub type Scalar = Complex64;

pub(crate) const ZERO: Scalar = Complex64 { re: 0.0, im: 0.0 };

pub(crate) fn is_finite(z: Scalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub(crate) fn max_abs(values: &[Scalar]) -> f64 {
    values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A dense row or word of length `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector(Vec<Scalar>);

impl DenseVector {
    pub fn new(entries: Vec<Scalar>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::LengthMismatch { expected: 1, actual: 0 });
        }
        if !entries.iter().all(|&z| is_finite(z)) {
            return Err(Error::NonFinite);
        }
        Ok(DenseVector(entries))
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<Scalar>) -> Self {
        DenseVector(entries)
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Scalar> {
        self.0
    }

    /// Bilinear pairing `sum_i a_i b_i` (no conjugation).
    pub fn dot(&self, other: &[Scalar]) -> Result<Scalar> {
        if self.0.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.0.len(),
                actual: other.len(),
            });
        }
        Ok(self.0.iter().zip(other).map(|(a, b)| a * b).sum())
    }

    pub fn max_norm(&self) -> f64 {
        max_abs(&self.0)
    }
}

impl Deref for DenseVector {
    type Target = [Scalar];

    fn deref(&self) -> &[Scalar] {
        &self.0
    }
}

impl AsRef<[Scalar]> for DenseVector {
    fn as_ref(&self) -> &[Scalar] {
        &self.0
    }
}

impl Index<usize> for DenseVector {
    type Output = Scalar;

    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

/// Componentwise (star) product `(a * b)_i = a_i b_i`.
pub fn star(a: &DenseVector, b: &DenseVector) -> Result<DenseVector> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(DenseVector(a.iter().zip(b.iter()).map(|(x, y)| x * y).collect()))
}

/// A vector of length `n` stored as its support and the values on it.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    len: usize,
    support: Vec<usize>,
    values: Vec<Scalar>,
}

impl SparseVector {
    /// Support must be strictly increasing and inside `[0, len)`.
    pub fn new(len: usize, support: Vec<usize>, values: Vec<Scalar>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::InvalidSparseVector(format!(
                "{} support indices but {} values",
                support.len(),
                values.len()
            )));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSparseVector(
                "support indices must be strictly increasing".into(),
            ));
        }
        if let Some(&last) = support.last() {
            if last >= len {
                return Err(Error::InvalidSparseVector(format!(
                    "support index {last} out of range for length {len}"
                )));
            }
        }
        if !values.iter().all(|&z| is_finite(z)) {
            return Err(Error::NonFinite);
        }
        Ok(SparseVector {
            len,
            support,
            values,
        })
    }

    pub fn zeros(len: usize) -> Self {
        SparseVector {
            len,
            support: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Keeps entries with `|x_i| > threshold`.
    pub fn from_dense(entries: &[Scalar], threshold: f64) -> Self {
        let (support, values) = entries
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > threshold)
            .map(|(i, &z)| (i, z))
            .unzip();
        SparseVector {
            len: entries.len(),
            support,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn nnz(&self) -> usize {
        self.support.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Scalar)> + '_ {
        self.support.iter().copied().zip(self.values.iter().copied())
    }

    pub fn get(&self, index: usize) -> Scalar {
        match self.support.binary_search(&index) {
            Ok(pos) => self.values[pos],
            Err(_) => ZERO,
        }
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        let mut out = vec![ZERO; self.len];
        for (i, z) in self.iter() {
            out[i] = z;
        }
        out
    }

    pub fn max_norm(&self) -> f64 {
        max_abs(&self.values)
    }

    /// `max_i |self_i - other_i|` over the union of both supports.
    pub fn max_abs_diff(&self, other: &SparseVector) -> f64 {
        let mut idx: Vec<usize> = self.support.iter().chain(&other.support).copied().collect();
        idx.sort_unstable();
        idx.dedup();
        idx.into_iter()
            .map(|i| (self.get(i) - other.get(i)).norm())
            .fold(0.0, f64::max)
    }
}
