#![allow(dead_code)]

use ecp_core::validity::{check_fourier_step, ratio_report};
use ecp_core::{MatrixFamily, MeasurementPlan, Scalar, SparseVector, Tolerances};
use rand::seq::index::sample;
use rand::Rng;

pub struct Instance {
    pub family: MatrixFamily,
    pub plan: MeasurementPlan,
    pub w: SparseVector,
    pub alphas: Vec<Scalar>,
    pub t: usize,
}

impl Instance {
    pub fn new(family: MatrixFamily, plan: MeasurementPlan, w: SparseVector, t: usize) -> Self {
        let alphas = family.measure(&w, &plan).unwrap();
        Instance {
            family,
            plan,
            w,
            alphas,
            t,
        }
    }
}

/// Values with modulus in [0.5, 1.5] and uniform phase.
pub fn random_value(rng: &mut impl Rng) -> Scalar {
    Scalar::from_polar(rng.random_range(0.5..1.5), rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn random_sparse(rng: &mut impl Rng, n: usize, nnz: usize) -> SparseVector {
    let mut support = sample(rng, n, nnz).into_vec();
    support.sort_unstable();
    let values = (0..nnz).map(|_| random_value(rng)).collect();
    SparseVector::new(n, support, values).unwrap()
}

pub fn random_coprime_step(rng: &mut impl Rng, n: usize) -> usize {
    loop {
        let k = rng.random_range(1..2 * n);
        if check_fourier_step(n, k) {
            return k;
        }
    }
}

pub fn fourier_instance(rng: &mut impl Rng, n: usize, t: usize, nnz: usize) -> Instance {
    let k = random_coprime_step(rng, n);
    let start = rng.random_range(0..n);
    let plan = MeasurementPlan::arithmetic(start, k, 2 * t).unwrap();
    let w = random_sparse(rng, n, nnz);
    Instance::new(MatrixFamily::fourier(n).unwrap(), plan, w, t)
}

/// Distinct positive reals on a jittered grid in [0.5, 2].
pub fn positive_nodes(rng: &mut impl Rng, n: usize) -> Vec<Scalar> {
    (0..n)
        .map(|c| Scalar::new(0.5 + 1.5 * (c as f64 + rng.random_range(0.1..0.9)) / n as f64, 0.0))
        .collect()
}

/// Complex nodes on the annulus 0.7 <= |z| <= 1.3 whose k-th power ratios
/// stay at least `margin` away from 1.
pub fn complex_nodes(rng: &mut impl Rng, n: usize, k: usize, margin: f64) -> Vec<Scalar> {
    let tol = Tolerances::default();
    loop {
        let nodes: Vec<Scalar> = (0..n)
            .map(|_| Scalar::from_polar(rng.random_range(0.7..1.3), rng.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        if ratio_report(&nodes, k, &tol).unwrap().min_gap > margin {
            return nodes;
        }
    }
}

pub fn vandermonde_instance(rng: &mut impl Rng, nodes: Vec<Scalar>, k: usize, t: usize, nnz: usize) -> Instance {
    let n = nodes.len();
    let start = rng.random_range(0..3);
    let plan = MeasurementPlan::arithmetic(start, k, 2 * t).unwrap();
    let w = random_sparse(rng, n, nnz);
    Instance::new(MatrixFamily::vandermonde(nodes).unwrap(), plan, w, t)
}

pub fn max_rel_error(got: &SparseVector, want: &SparseVector) -> f64 {
    let scale = want.max_norm();
    let diff = got.max_abs_diff(want);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

pub fn report(id: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "criterion {id} [{}]: {name} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
}

/// Fourier instance whose node powers `omega^(k i)` sit on a jittered
/// uniform grid, so the Hankel system stays well conditioned at large n.
pub fn separated_fourier_instance(rng: &mut impl Rng, n: usize, t: usize) -> Instance {
    let k = random_coprime_step(rng, n);
    let k_inv = (1..n).find(|&x| (x * k) % n == 1).unwrap();
    let slot = n / t;
    let mut support: Vec<usize> = (0..t)
        .map(|q| {
            let position = q * slot + rng.random_range(0..slot / 2);
            (position * k_inv) % n
        })
        .collect();
    support.sort_unstable();
    let values = (0..t).map(|_| random_value(rng)).collect();
    let w = SparseVector::new(n, support, values).unwrap();
    let start = rng.random_range(0..n);
    let plan = MeasurementPlan::arithmetic(start, k, 2 * t).unwrap();
    Instance::new(MatrixFamily::fourier(n).unwrap(), plan, w, t)
}
