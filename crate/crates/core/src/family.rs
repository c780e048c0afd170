//! Structured matrix families and their generalized rows.
//!
//! Rows of the Fourier and Vandermonde families satisfy
//! `row(i) * row(j) = row(i + j)` componentwise, which is what turns the
//! measurement problem into a Hankel decoding problem.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::plan::MeasurementPlan;
use crate::vector::{is_finite, DenseVector, Scalar, SparseVector, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixFamily {
    /// `E_j[c] = omega^(j c)` with `omega = exp(2 pi i / n)`.
    Fourier { n: usize },
    /// `E_j[c] = nodes[c]^j` for every `j >= 0`.
    Vandermonde { nodes: Vec<Scalar> },
    /// `E_j[c] = 1 / (x[j] + y[c])`; only `x.len()` rows exist.
    Cauchy { x: Vec<Scalar>, y: Vec<Scalar> },
    /// Stored rows. `star_closed` asserts `E_i * E_j = E_{i+j}` whenever
    /// `i + j` is a stored row.
    Explicit {
        rows: Vec<Vec<Scalar>>,
        star_closed: bool,
    },
}

/// `omega_n^m` with quarter turns returned exactly.
pub fn root_of_unity(n: usize, m: usize) -> Scalar {
    let m = m % n;
    if (4 * m) % n == 0 {
        return match 4 * m / n {
            0 => Scalar::new(1.0, 0.0),
            1 => Scalar::new(0.0, 1.0),
            2 => Scalar::new(-1.0, 0.0),
            _ => Scalar::new(0.0, -1.0),
        };
    }
    Scalar::from_polar(1.0, TAU * m as f64 / n as f64)
}

fn mul_mod(a: usize, b: usize, n: usize) -> usize {
    ((a as u128 * b as u128) % n as u128) as usize
}

impl MatrixFamily {
    pub fn fourier(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidFamily(format!("Fourier size {n} < 2")));
        }
        Ok(MatrixFamily::Fourier { n })
    }

    pub fn vandermonde(nodes: Vec<Scalar>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidFamily("no Vandermonde nodes".into()));
        }
        for (i, &b) in nodes.iter().enumerate() {
            if !is_finite(b) {
                return Err(Error::NonFinite);
            }
            if b == ZERO {
                return Err(Error::ZeroNode(i));
            }
            if let Some(j) = nodes[..i].iter().position(|&a| a == b) {
                return Err(Error::DuplicateNodes(j, i));
            }
        }
        Ok(MatrixFamily::Vandermonde { nodes })
    }

    pub fn cauchy(x: Vec<Scalar>, y: Vec<Scalar>) -> Result<Self> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::InvalidFamily("empty Cauchy node list".into()));
        }
        if !x.iter().chain(&y).all(|&z| is_finite(z)) {
            return Err(Error::NonFinite);
        }
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                if xi + yj == ZERO {
                    return Err(Error::InvalidFamily(format!("x[{i}] + y[{j}] = 0")));
                }
            }
        }
        Ok(MatrixFamily::Cauchy { x, y })
    }

    /// The `n x n` Hilbert matrix, `1 / (i + j + 1)` with 0-based indices.
    pub fn hilbert(n: usize) -> Result<Self> {
        let x = (1..=n).map(|i| Scalar::new(i as f64, 0.0)).collect();
        let y = (0..n).map(|j| Scalar::new(j as f64, 0.0)).collect();
        Self::cauchy(x, y)
    }

    pub fn explicit(rows: Vec<Vec<Scalar>>, star_closed: bool) -> Result<Self> {
        let width = rows.first().map(Vec::len).unwrap_or(0);
        if width == 0 {
            return Err(Error::InvalidFamily("explicit matrix has no entries".into()));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != width) {
            return Err(Error::InvalidFamily(format!(
                "row {r} has length {} but row 0 has {width}",
                rows[r].len()
            )));
        }
        if !rows.iter().flatten().all(|&z| is_finite(z)) {
            return Err(Error::NonFinite);
        }
        Ok(MatrixFamily::Explicit { rows, star_closed })
    }

    /// Number of columns.
    pub fn n(&self) -> usize {
        match self {
            MatrixFamily::Fourier { n } => *n,
            MatrixFamily::Vandermonde { nodes } => nodes.len(),
            MatrixFamily::Cauchy { y, .. } => y.len(),
            MatrixFamily::Explicit { rows, .. } => rows[0].len(),
        }
    }

    /// Number of distinct rows, `None` when every `j >= 0` gives a new row.
    pub fn row_count(&self) -> Option<usize> {
        match self {
            MatrixFamily::Fourier { n } => Some(*n),
            MatrixFamily::Vandermonde { .. } => None,
            MatrixFamily::Cauchy { x, .. } => Some(x.len()),
            MatrixFamily::Explicit { rows, .. } => Some(rows.len()),
        }
    }

    pub fn is_star_closed(&self) -> bool {
        match self {
            MatrixFamily::Fourier { .. } | MatrixFamily::Vandermonde { .. } => true,
            MatrixFamily::Cauchy { .. } => false,
            MatrixFamily::Explicit { star_closed, .. } => *star_closed,
        }
    }

    /// Rows repeat with this period (Fourier only).
    pub fn period(&self) -> Option<usize> {
        match self {
            MatrixFamily::Fourier { n } => Some(*n),
            _ => None,
        }
    }

    /// Canonical index of row `j`, reducing mod `n` for Fourier.
    pub fn canonical_row(&self, j: usize) -> Result<usize> {
        match self {
            MatrixFamily::Fourier { n } => Ok(j % n),
            MatrixFamily::Vandermonde { .. } => Ok(j),
            MatrixFamily::Cauchy { x, .. } if j < x.len() => Ok(j),
            MatrixFamily::Explicit { rows, .. } if j < rows.len() => Ok(j),
            _ => Err(Error::RowOutOfRange {
                index: j,
                rows: self.row_count().unwrap_or(0),
            }),
        }
    }

    /// Entry `(j, c)` of the generalized matrix.
    pub fn entry(&self, j: usize, c: usize) -> Result<Scalar> {
        let n = self.n();
        if c >= n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: c + 1,
            });
        }
        let j = self.canonical_row(j)?;
        Ok(match self {
            MatrixFamily::Fourier { n } => root_of_unity(*n, mul_mod(j, c, *n)),
            MatrixFamily::Vandermonde { nodes } => nodes[c].powu(j as u32),
            MatrixFamily::Cauchy { x, y } => (x[j] + y[c]).inv(),
            MatrixFamily::Explicit { rows, .. } => rows[j][c],
        })
    }

    pub fn row(&self, j: usize) -> Result<DenseVector> {
        let j = self.canonical_row(j)?;
        let entries = match self {
            MatrixFamily::Fourier { n } => (0..*n).map(|c| root_of_unity(*n, mul_mod(j, c, *n))).collect(),
            MatrixFamily::Vandermonde { nodes } => nodes.iter().map(|b| b.powu(j as u32)).collect(),
            MatrixFamily::Cauchy { x, y } => y.iter().map(|yc| (x[j] + yc).inv()).collect(),
            MatrixFamily::Explicit { rows, .. } => rows[j].clone(),
        };
        Ok(DenseVector::from_vec_unchecked(entries))
    }

    /// Node `beta_c` of a power family: `omega^c` for Fourier.
    pub fn node(&self, c: usize) -> Option<Scalar> {
        match self {
            MatrixFamily::Fourier { n } if c < *n => Some(root_of_unity(*n, c)),
            MatrixFamily::Vandermonde { nodes } => nodes.get(c).copied(),
            _ => None,
        }
    }

    /// All nodes of a power family.
    pub fn nodes(&self) -> Option<Vec<Scalar>> {
        match self {
            MatrixFamily::Fourier { n } => Some((0..*n).map(|c| root_of_unity(*n, c)).collect()),
            MatrixFamily::Vandermonde { nodes } => Some(nodes.clone()),
            _ => None,
        }
    }

    /// `beta_c^p`, exact index arithmetic for Fourier.
    pub fn node_power(&self, c: usize, p: usize) -> Option<Scalar> {
        match self {
            MatrixFamily::Fourier { n } if c < *n => Some(root_of_unity(*n, mul_mod(c, p, *n))),
            MatrixFamily::Vandermonde { nodes } => nodes.get(c).map(|b| b.powu(p as u32)),
            _ => None,
        }
    }

    /// `alpha_s = <row(j_s), w>` for every index of the plan, in plan order.
    pub fn measure(&self, w: &SparseVector, plan: &MeasurementPlan) -> Result<Vec<Scalar>> {
        if w.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                actual: w.len(),
            });
        }
        (0..plan.count())
            .map(|s| {
                let j = plan.index(s);
                w.iter()
                    .map(|(c, x)| self.entry(j, c).map(|e| e * x))
                    .sum::<Result<Scalar>>()
            })
            .collect()
    }

    /// Dense `u x n` matrix of the measured rows.
    pub fn measurement_matrix(&self, plan: &MeasurementPlan) -> Result<Vec<DenseVector>> {
        plan.indices().into_iter().map(|j| self.row(j)).collect()
    }
}
