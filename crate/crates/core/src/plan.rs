use crate::error::{Error, Result};

/// Which rows of the family are measured.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasurementPlan {
    /// Rows `start, start + step, ..., start + (count - 1) * step`.
    Arithmetic {
        start: usize,
        step: usize,
        count: usize,
    },
    Explicit(Vec<usize>),
}

impl MeasurementPlan {
    pub fn arithmetic(start: usize, step: usize, count: usize) -> Result<Self> {
        if step == 0 {
            return Err(Error::InvalidPlan("step must be at least 1".into()));
        }
        if count < 2 {
            return Err(Error::InvalidPlan("count must be at least 2".into()));
        }
        Ok(MeasurementPlan::Arithmetic { start, step, count })
    }

    pub fn explicit(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidPlan("empty index list".into()));
        }
        Ok(MeasurementPlan::Explicit(indices))
    }

    pub fn count(&self) -> usize {
        match self {
            MeasurementPlan::Arithmetic { count, .. } => *count,
            MeasurementPlan::Explicit(idx) => idx.len(),
        }
    }

    /// Row index of the `s`-th measurement (0-based), before any reduction mod n.
    pub fn index(&self, s: usize) -> usize {
        match self {
            MeasurementPlan::Arithmetic { start, step, .. } => start + s * step,
            MeasurementPlan::Explicit(idx) => idx[s],
        }
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.count()).map(|s| self.index(s)).collect()
    }

    /// `(start, step)` for arithmetic plans.
    pub fn progression(&self) -> Option<(usize, usize)> {
        match self {
            MeasurementPlan::Arithmetic { start, step, .. } => Some((*start, *step)),
            MeasurementPlan::Explicit(_) => None,
        }
    }

    /// Sparsity the plan can decode: `floor(count / 2)`.
    pub fn capacity(&self) -> usize {
        self.count() / 2
    }
}
