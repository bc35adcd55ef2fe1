//! Numerical policy shared across modules. Printed by `pnlab --show-config`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct NumericsConfig {
    /// `|f(s)|` below this aborts `log_derivative`.
    pub eval_floor: f64,
    /// Minimum `|f|` accepted on a counting contour before it is nudged.
    pub boundary_clearance: f64,
    /// Maximum bisection depth of a contour segment.
    pub max_segment_depth: u32,
    /// Newton iterations per zero.
    pub newton_max_iter: u32,
    /// Relative residual for accepting a Newton iterate, scaled by `max(1, ||a||_1)`.
    pub newton_residual: f64,
    /// Largest zero multiplicity resolved.
    pub multiplicity_cap: u32,
    /// Diameter below which a multi-zero rectangle is treated as one cluster.
    pub cluster_diameter: f64,
    /// Cap on enumerated frequency terms.
    pub enumeration_cap: usize,
    /// Absolute tolerance of adaptive quadrature.
    pub quad_abs_tol: f64,
    /// Relative tolerance of adaptive quadrature.
    pub quad_rel_tol: f64,
    /// Maximum subintervals per adaptive quadrature call.
    pub quad_max_intervals: usize,
    /// Spread of discrepancy samples above which the polynomial is rejected.
    pub discrepancy_tol: f64,
    /// Largest integer sieved for prime powers.
    pub prime_sieve_cap: u64,
    /// Acceptance tolerance added to the error budget in verification reports.
    pub verify_tol: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            eval_floor: 1e-14,
            boundary_clearance: 1e-6,
            max_segment_depth: 48,
            newton_max_iter: 200,
            newton_residual: 1e-12,
            multiplicity_cap: 8,
            cluster_diameter: 1e-5,
            enumeration_cap: 10_000_000,
            quad_abs_tol: 1e-13,
            quad_rel_tol: 1e-12,
            quad_max_intervals: 50_000,
            discrepancy_tol: 1e-4,
            prime_sieve_cap: 100_000_000,
            verify_tol: 1e-8,
        }
    }
}
