//! Numerical tolerances used across the crate, collected in one place.

/// Allowed deviation of a probability vector's total mass from one.
pub const SUM_TOL: f64 = 1e-10;

/// Per-coordinate tolerance for mixture/pmf round trips.
pub const ROUND_TRIP_TOL: f64 = 1e-12;

/// Convexity tolerance for general real-valued vectors. Count-based
/// empirical pmfs are checked exactly on integer counts instead.
pub const CONVEXITY_TOL: f64 = 1e-12;

/// Second-difference threshold above which an index counts as a change of slope.
pub const KINK_TOL: f64 = 1e-9;

/// Number of basis indices past `final_L` inspected by the certificate.
pub const CERTIFICATE_LOOKAHEAD: usize = 10;

/// Tolerances applied by [`crate::diagnostics::certify`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CertifyTolerances {
    /// Lower bound `-d_tol` for every directional derivative, and bound on `|d_j|` on the support.
    pub d_tol: f64,
    /// Allowed negative slack in `H_fit - H_empirical`.
    pub h_slack: f64,
    /// Allowed `|H_fit - H_empirical|` at change-of-slope points.
    pub h_equality: f64,
    /// Allowed `|sum(p) - 1|`.
    pub mass: f64,
    /// Second-difference threshold for detecting a change of slope.
    pub kink: f64,
    /// Allowed gap between the stored pmf and the pmf rebuilt from the mixture.
    pub consistency: f64,
}

impl Default for CertifyTolerances {
    fn default() -> Self {
        Self {
            d_tol: 1e-8,
            h_slack: 1e-9,
            h_equality: 1e-8,
            mass: 1e-8,
            kink: KINK_TOL,
            consistency: 1e-10,
        }
    }
}
