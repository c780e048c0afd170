//! Recovery of a `t`-sparse vector `w` from `2t` measurements `E_j w` taken
//! with evenly spaced rows of a structured matrix.
//!
//! The rows play the role of a check matrix of an MDS code; `w` is the
//! "error" and the measurements are its syndrome. Decoding proceeds with an
//! error-correcting pair: a Hankel kernel gives a locator polynomial whose
//! zeros at the node powers mark the support, then a Vandermonde solve
//! gives the values.

pub mod error;
pub mod family;
pub mod hankel;
pub mod linalg;
pub mod locator;
pub mod oracle;
pub mod pairs;
pub mod plan;
pub mod syndrome;
pub mod tolerance;
pub mod validity;
pub mod vector;

pub use error::{Error, Result};
pub use family::MatrixFamily;
pub use hankel::{build_hankel, hankel_kernel, HankelKernel, HankelSystem};
pub use locator::{support_by_fft, support_by_horner, LocatorPolynomial};
pub use oracle::{brute_force_recover, exhaustive_distance, OracleConfig, OracleOutcome};
pub use pairs::{choose_pair_random, ErrorCorrectingPair, PairStrategy, SpanKey};
pub use plan::MeasurementPlan;
pub use syndrome::{recover, solve_syndrome, solve_vandermonde_primal, RecoveryResult};
pub use tolerance::Tolerances;
pub use vector::{star, DenseVector, Scalar, SparseVector};
