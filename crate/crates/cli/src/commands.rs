//! Subcommand bodies. Each takes parsed inputs and returns a serializable
//! report; reading files and choosing exit codes is left to `main`.

use std::f64::consts::TAU;
use std::time::Instant;

use ecp_core::pairs::recover_with_pair;
use ecp_core::validity::{check_fourier_step, mds_rank_check, ratio_report, require_valid_plan, CheckMode};
use ecp_core::{
    brute_force_recover, choose_pair_random, recover, ErrorCorrectingPair, MatrixFamily, MeasurementPlan,
    OracleConfig, OracleOutcome, RecoveryResult, Scalar, SparseVector, Tolerances,
};
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;
use crate::schema::{FamilySpec, InstanceFile, PairSpec, PlanSpec, SparseSpec, StrategySpec};

/// Relative tolerance for comparing a recovery with the ground truth.
pub const MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct GenRequest {
    pub family: MatrixFamily,
    pub t: usize,
    pub sparsity: usize,
    pub start: usize,
    pub step: usize,
    pub count: usize,
    pub seed: u64,
    pub pair_strategy: Option<StrategySpec>,
    pub force: bool,
}

fn random_value(rng: &mut impl Rng) -> Scalar {
    Complex64::from_polar(rng.random_range(0.5..1.5), rng.random_range(0.0..TAU))
}

/// Draws a random instance. The support, the values and the pair seed all
/// come from one ChaCha8 stream seeded with `req.seed`.
pub fn generate(req: &GenRequest, tol: &Tolerances) -> Result<InstanceFile, CliError> {
    let n = req.family.n();
    if req.t == 0 {
        return Err(CliError::Invalid("t must be at least 1".into()));
    }
    if req.sparsity > n {
        return Err(CliError::Invalid(format!("sparsity {} exceeds n = {n}", req.sparsity)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let mut support = sample(&mut rng, n, req.sparsity).into_vec();
    support.sort_unstable();
    let values = (0..support.len()).map(|_| random_value(&mut rng)).collect();
    let w = SparseVector::new(n, support, values)?;

    let (plan, pair, measurements) = match req.pair_strategy {
        Some(strategy) => {
            let pair_seed: u64 = rng.random();
            let pair = choose_pair_random(&req.family, req.t, pair_seed, strategy.into(), tol)?;
            let measurements = pair.measure(&w)?;
            let plan = pair
                .star_span_indices()
                .map(|indices| PlanSpec::Explicit { indices });
            let spec = PairSpec {
                u_indices: pair.u_indices().to_vec(),
                v_indices: pair.v_indices().to_vec(),
                seed: pair_seed,
                strategy,
            };
            (plan, Some(spec), measurements)
        }
        None => {
            let plan = MeasurementPlan::arithmetic(req.start, req.step, req.count)?;
            if !req.force {
                require_valid_plan(&req.family, &plan, tol)?;
            }
            let measurements = req.family.measure(&w, &plan)?;
            (Some(PlanSpec::from_plan(&plan)), None, measurements)
        }
    };

    Ok(InstanceFile {
        family: FamilySpec::from_family(&req.family)?,
        n,
        t: Some(req.t),
        plan,
        sparse: Some(SparseSpec::from_sparse(&w)),
        measurements: Some(measurements),
        pair,
    })
}

fn build_pair(file: &InstanceFile, family: MatrixFamily, tol: &Tolerances) -> Result<Option<ErrorCorrectingPair>, CliError> {
    match &file.pair {
        Some(spec) => Ok(Some(ErrorCorrectingPair::new(
            family,
            spec.u_indices.clone(),
            spec.v_indices.clone(),
            tol,
        )?)),
        None => Ok(None),
    }
}

fn take_measurements(file: &InstanceFile, w: &SparseVector, tol: &Tolerances) -> Result<Vec<Scalar>, CliError> {
    let family = file.family.build()?;
    if let Some(pair) = build_pair(file, family.clone(), tol)? {
        return Ok(pair.measure(w)?);
    }
    let plan = file
        .plan
        .as_ref()
        .ok_or_else(|| CliError::Invalid("instance has neither a plan nor a pair".into()))?
        .build()?;
    Ok(family.measure(w, &plan)?)
}

/// Fills in the measurements of the stored ground-truth vector.
pub fn measure(mut file: InstanceFile, force: bool, tol: &Tolerances) -> Result<InstanceFile, CliError> {
    let w = file
        .sparse
        .as_ref()
        .ok_or_else(|| CliError::Invalid("instance has no sparse vector to measure".into()))?
        .build(file.n)?;
    if !force && file.pair.is_none() {
        if let Some(plan) = &file.plan {
            require_valid_plan(&file.family.build()?, &plan.build()?, tol)?;
        }
    }
    file.measurements = Some(take_measurements(&file, &w, tol)?);
    Ok(file)
}

#[derive(Debug, Clone, Serialize)]
pub struct RecoverReport {
    pub support: Vec<usize>,
    pub values: Vec<Scalar>,
    pub residual: f64,
    pub kernel_dimension: usize,
    pub support_size: usize,
    pub diagnostics: Vec<String>,
    pub timing_ms: f64,
}

fn run_recovery(file: &InstanceFile, tol: &Tolerances) -> Result<(RecoveryResult, f64), CliError> {
    let alphas = file
        .measurements
        .as_ref()
        .ok_or_else(|| CliError::Invalid("instance has no measurements".into()))?;
    let t = file.sparsity()?;
    let family = file.family.build()?;
    let clock = Instant::now();
    let result = match build_pair(file, family.clone(), tol)? {
        Some(pair) => recover_with_pair(&pair, alphas, tol)?,
        None => {
            let plan = file
                .plan
                .as_ref()
                .ok_or_else(|| CliError::Invalid("instance has neither a plan nor a pair".into()))?
                .build()?;
            recover(&family, &plan, alphas, t, tol)?
        }
    };
    Ok((result, clock.elapsed().as_secs_f64() * 1e3))
}

/// Recovers the sparse vector from the measurements alone; any stored
/// ground truth is ignored.
pub fn recover_instance(file: &InstanceFile, tol: &Tolerances) -> Result<RecoverReport, CliError> {
    let (result, timing_ms) = run_recovery(file, tol)?;
    Ok(RecoverReport {
        support: result.solution.support().to_vec(),
        values: result.solution.values().to_vec(),
        residual: result.residual,
        kernel_dimension: result.kernel_dimension,
        support_size: result.support_size,
        diagnostics: result.diagnostics,
        timing_ms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleStatus {
    Agree,
    Disagree,
    Ambiguous,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub status: OracleStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub max_error: Option<f64>,
    pub tolerance: f64,
    pub recovered_support: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovery_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}

fn oracle_check(file: &InstanceFile, recovered: Option<&SparseVector>) -> Result<OracleReport, CliError> {
    let skipped = |detail: &str| OracleReport {
        status: OracleStatus::Skipped,
        detail: detail.into(),
    };
    if file.pair.is_some() {
        return Ok(skipped("the oracle runs on measurement plans only"));
    }
    let Some(plan) = &file.plan else {
        return Ok(skipped("instance has no plan"));
    };
    let family = file.family.build()?;
    let plan = plan.build()?;
    let alphas = file.measurements.as_deref().unwrap_or_default();
    let t = file.sparsity()?;
    let outcome = match brute_force_recover(&family, &plan, alphas, t, &OracleConfig::default()) {
        Ok(outcome) => outcome,
        Err(ecp_core::Error::BudgetExceeded(msg)) => return Ok(skipped(&msg)),
        Err(e) => return Err(e.into()),
    };
    Ok(match (outcome, recovered) {
        (OracleOutcome::Unique(v), Some(w)) => {
            let err = v.max_abs_diff(w);
            let same = v.support() == w.support() && err <= MATCH_TOL * v.max_norm().max(f64::MIN_POSITIVE);
            OracleReport {
                status: if same { OracleStatus::Agree } else { OracleStatus::Disagree },
                detail: format!("oracle found a unique {}-sparse solution (difference {err:.3e})", v.nnz()),
            }
        }
        (OracleOutcome::Unique(v), None) => OracleReport {
            status: OracleStatus::Disagree,
            detail: format!("oracle found a {}-sparse solution that recovery missed", v.nnz()),
        },
        (OracleOutcome::None, None) => OracleReport {
            status: OracleStatus::Agree,
            detail: format!("no {t}-sparse vector fits the measurements"),
        },
        (OracleOutcome::None, Some(_)) => OracleReport {
            status: OracleStatus::Disagree,
            detail: format!("recovery returned a vector but no {t}-sparse solution exists"),
        },
        (OracleOutcome::Ambiguous(found), _) => OracleReport {
            status: OracleStatus::Ambiguous,
            detail: format!("{} distinct sparse solutions fit the measurements", found.len()),
        },
    })
}

/// Recovers from the measurements (taken from the ground truth if absent)
/// and compares with the ground truth. A failed recovery is a `pass: false`
/// report, not an error.
pub fn verify_instance(mut file: InstanceFile, use_oracle: bool, tol: &Tolerances) -> Result<VerifyReport, CliError> {
    let truth = file
        .sparse
        .as_ref()
        .ok_or_else(|| CliError::Invalid("verify needs the ground-truth sparse vector".into()))?
        .build(file.n)?;
    if file.measurements.is_none() {
        file.measurements = Some(take_measurements(&file, &truth, tol)?);
    }
    let tolerance = MATCH_TOL * truth.max_norm();
    let (recovered, recovery_error) = match run_recovery(&file, tol) {
        Ok((result, _)) => (Some(result.solution), None),
        Err(CliError::Io(msg)) => return Err(CliError::Io(msg)),
        Err(e) => (None, Some(e.to_string())),
    };
    let max_error = recovered.as_ref().map(|w| w.max_abs_diff(&truth));
    let oracle = if use_oracle {
        Some(oracle_check(&file, recovered.as_ref())?)
    } else {
        None
    };
    let matches = max_error.is_some_and(|e| e <= tolerance);
    let oracle_ok = oracle.as_ref().is_none_or(|o| o.status != OracleStatus::Disagree);
    Ok(VerifyReport {
        pass: matches && oracle_ok,
        max_error,
        tolerance,
        recovered_support: recovered.map(|w| w.support().to_vec()),
        recovery_error,
        oracle,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioSummary {
    pub min_gap: f64,
    pub near_violations: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MdsSummary {
    pub passed: bool,
    pub exhaustive: bool,
    pub subsets_checked: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub family: FamilySpec,
    pub plan: PlanSpec,
    pub valid: bool,
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<RatioSummary>,
    pub mds: MdsSummary,
}

/// Runs the plan validity test for the family and a rank check of the
/// measurement matrix's column subsets.
pub fn check(
    family: &MatrixFamily,
    plan: &MeasurementPlan,
    seed: u64,
    tol: &Tolerances,
) -> Result<CheckReport, CliError> {
    let (_, k) = plan
        .progression()
        .ok_or_else(|| CliError::Invalid("check needs an arithmetic plan".into()))?;
    let mut ratio = None;
    let mut reason = match family {
        MatrixFamily::Fourier { n } if !check_fourier_step(*n, k) => {
            Some(format!("gcd(n,k) ≠ 1 for n = {n}, k = {k}"))
        }
        MatrixFamily::Vandermonde { nodes } => {
            let report = ratio_report(nodes, k, tol)?;
            let msg = (!report.satisfied).then(|| {
                let (i, j) = report.near_violations.first().copied().unwrap_or_default();
                format!("(beta_{i}/beta_{j})^{k} = 1; the ratio condition fails")
            });
            ratio = Some(RatioSummary {
                min_gap: report.min_gap,
                near_violations: report.near_violations,
            });
            msg
        }
        _ => None,
    };
    let mds = mds_rank_check(family, plan, tol, seed)?;
    if reason.is_none() && !mds.passed {
        reason = Some("a set of measurement-matrix columns is rank deficient".into());
    }
    Ok(CheckReport {
        family: FamilySpec::from_family(family)?,
        plan: PlanSpec::from_plan(plan),
        valid: reason.is_none(),
        reason,
        ratio,
        mds: MdsSummary {
            passed: mds.passed,
            exhaustive: mds.mode == CheckMode::Exhaustive,
            subsets_checked: mds.subsets_checked,
        },
    })
}
