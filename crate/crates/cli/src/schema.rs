//! JSON layout of instance files.
//!
//! Complex numbers are written as `[re, im]` arrays. Floats are printed in
//! shortest round-trip form, so a file read back and written again is
//! byte-identical.

use ecp_core::{MatrixFamily, MeasurementPlan, PairStrategy, Scalar, SparseVector};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilySpec {
    Fourier { n: usize },
    Vandermonde { nodes: Vec<Scalar> },
    Cauchy { x: Vec<Scalar>, y: Vec<Scalar> },
}

impl FamilySpec {
    pub fn from_family(family: &MatrixFamily) -> Result<Self, CliError> {
        match family {
            MatrixFamily::Fourier { n } => Ok(FamilySpec::Fourier { n: *n }),
            MatrixFamily::Vandermonde { nodes } => Ok(FamilySpec::Vandermonde { nodes: nodes.clone() }),
            MatrixFamily::Cauchy { x, y } => Ok(FamilySpec::Cauchy {
                x: x.clone(),
                y: y.clone(),
            }),
            MatrixFamily::Explicit { .. } => Err(CliError::Invalid("explicit families have no file form".into())),
        }
    }

    pub fn build(&self) -> Result<MatrixFamily, CliError> {
        let family = match self {
            FamilySpec::Fourier { n } => MatrixFamily::fourier(*n),
            FamilySpec::Vandermonde { nodes } => MatrixFamily::vandermonde(nodes.clone()),
            FamilySpec::Cauchy { x, y } => MatrixFamily::cauchy(x.clone(), y.clone()),
        };
        Ok(family?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlanSpec {
    Arithmetic { start: usize, step: usize, count: usize },
    Explicit { indices: Vec<usize> },
}

impl PlanSpec {
    pub fn from_plan(plan: &MeasurementPlan) -> Self {
        match plan {
            MeasurementPlan::Arithmetic { start, step, count } => PlanSpec::Arithmetic {
                start: *start,
                step: *step,
                count: *count,
            },
            MeasurementPlan::Explicit(indices) => PlanSpec::Explicit {
                indices: indices.clone(),
            },
        }
    }

    pub fn build(&self) -> Result<MeasurementPlan, CliError> {
        let plan = match self {
            PlanSpec::Arithmetic { start, step, count } => MeasurementPlan::arithmetic(*start, *step, *count),
            PlanSpec::Explicit { indices } => MeasurementPlan::explicit(indices.clone()),
        };
        Ok(plan?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseSpec {
    pub support: Vec<usize>,
    pub values: Vec<Scalar>,
}

impl SparseSpec {
    pub fn from_sparse(w: &SparseVector) -> Self {
        SparseSpec {
            support: w.support().to_vec(),
            values: w.values().to_vec(),
        }
    }

    pub fn build(&self, n: usize) -> Result<SparseVector, CliError> {
        Ok(SparseVector::new(n, self.support.clone(), self.values.clone())?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum StrategySpec {
    Uniform,
    Arithmetic,
}

impl From<StrategySpec> for PairStrategy {
    fn from(s: StrategySpec) -> Self {
        match s {
            StrategySpec::Uniform => PairStrategy::UniformRandom,
            StrategySpec::Arithmetic => PairStrategy::ArithmeticCompressed,
        }
    }
}

/// Error-correcting pair used in place of an arithmetic plan. Measurements
/// are then listed in the order of the pair's sorted star-span generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub u_indices: Vec<usize>,
    pub v_indices: Vec<usize>,
    pub seed: u64,
    pub strategy: StrategySpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub family: FamilySpec,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<PlanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sparse: Option<SparseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurements: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSpec>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| CliError::Io(format!("malformed instance file: {e}")))?;
        let family_n = file.family.build()?.n();
        if family_n != file.n {
            return Err(CliError::Invalid(format!(
                "n = {} does not match the family width {family_n}",
                file.n
            )));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("instance files always serialize");
        text.push('\n');
        text
    }

    /// Decoding radius: the stored `t`, or half the measurement count.
    pub fn sparsity(&self) -> Result<usize, CliError> {
        if let Some(t) = self.t {
            return Ok(t);
        }
        if let Some(pair) = &self.pair {
            return Ok(pair.v_indices.len());
        }
        match &self.plan {
            Some(plan) => Ok(plan.build()?.capacity()),
            None => Err(CliError::Invalid("instance has neither t nor a plan".into())),
        }
    }
}
