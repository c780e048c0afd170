/// Relative thresholds used by every floating-point decision in the crate.
///
/// The decoding pipeline is exact in exact arithmetic; these cutoffs decide
/// what counts as "zero" once it runs in `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `|(b_i / b_j)^k - 1|` must exceed this for the ratio condition to hold.
    pub ratio_gap: f64,
    /// Gaps below this (but above `ratio_gap`) are reported as near-violations.
    pub ratio_warn: f64,
    /// Singular values `<= factor * max(rows, cols) * eps * sigma_max` count
    /// as zero when sizing a kernel.
    pub kernel_factor: f64,
    /// Locator evaluations `<= locator_zero * max |f|` are treated as roots.
    pub locator_zero: f64,
    /// Recovered values `<= value_prune * max |x|` are dropped from the support.
    pub value_prune: f64,
    /// Relative residual above which a recovery is declared inconsistent.
    pub consistency: f64,
    /// Relative pivot cutoff for rank and minor tests.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ratio_gap: 1e-8,
            ratio_warn: 1e-4,
            kernel_factor: 1.0,
            locator_zero: 1e-6,
            value_prune: 1e-8,
            consistency: 1e-6,
            rank: 1e-9,
        }
    }
}
