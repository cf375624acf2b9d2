//! Centralized numeric tolerances.
//!
//! Every tolerance used anywhere in the crate lives in one [`Tolerances`]
//! value that callers pass explicitly — no globals, no per-module constants.
//! The defaults are chosen so that each band is separated from its
//! neighbours by at least two orders of magnitude:
//!
//! * `eps_unit`  — unit-vector drift; normalization is exact to a few ulps,
//!   so this only guards against corrupted input.
//! * `eps_len`   — exact-length checks (diameters, arc conditions, mirror
//!   symmetry). Constructed inputs satisfy these to ~1e-15; 1e-9 leaves room
//!   for round-tripped files while still rejecting modelling errors.
//! * `eps_width` — width-constancy checks through analytic evaluation.
//! * `eps_oracle`— agreement between the numeric support oracle and analytic
//!   evaluation; dominated by generator discretization, not by the solver.
//! * `fd_step`   — central-difference step for support-function derivatives.
//!   1e-3 balances O(step²) truncation against O(eps/step²) round-off.
//! * `tau_kallay`— membership band for the 2D radius-in-{0,1} test.
//! * `tau_scan`  — band for the 3D curvature-bound scan.

/// Centralized tolerance bundle passed explicitly to every validating or
/// finite-difference operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Unit-vector norm drift allowed on construction.
    pub eps_unit: f64,
    /// Exact-length comparisons (diameter 1, arc conditions, mirrors).
    pub eps_len: f64,
    /// Width-constancy deviation for analytic support evaluation.
    pub eps_width: f64,
    /// Numeric-oracle vs analytic support agreement.
    pub eps_oracle: f64,
    /// Central finite-difference step (radians).
    pub fd_step: f64,
    /// Band half-width for the 2D |r - {0,1}| membership test.
    pub tau_kallay: f64,
    /// Band half-width for the 3D curvature-bound scan.
    pub tau_scan: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_unit: 1e-12,
            eps_len: 1e-9,
            eps_width: 1e-6,
            eps_oracle: 5e-4,
            fd_step: 1e-3,
            tau_kallay: 0.05,
            tau_scan: 0.05,
        }
    }
}

impl Tolerances {
    /// Margin around chart poles inside which second-derivative stencils
    /// are refused: 10 finite-difference steps.
    pub fn pole_margin(&self) -> f64 {
        10.0 * self.fd_step
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_documented_values() {
        let t = Tolerances::default();
        assert_eq!(t.eps_unit, 1e-12);
        assert_eq!(t.eps_len, 1e-9);
        assert_eq!(t.eps_width, 1e-6);
        assert_eq!(t.eps_oracle, 5e-4);
        assert_eq!(t.fd_step, 1e-3);
        assert_eq!(t.tau_kallay, 0.05);
        assert_eq!(t.tau_scan, 0.05);
    }

    #[test]
    fn bands_are_ordered_and_positive() {
        let t = Tolerances::default();
        assert!(t.eps_unit > 0.0);
        assert!(t.eps_unit < t.eps_len);
        assert!(t.eps_len < t.eps_width);
        assert!(t.eps_width < t.eps_oracle);
        assert!(t.eps_oracle < t.tau_kallay);
        assert_eq!(t.pole_margin(), 1e-2);
    }
}
