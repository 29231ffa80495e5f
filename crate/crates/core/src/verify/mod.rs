//! Closed-form curvature formulas and inequalities, each checked against the
//! numeric shape-operator oracle or by direct arithmetic.

mod connection;
mod enclosing;
mod equator;
mod inequalities;
mod planes;

pub use connection::{
    berger_connection_check, heisenberg_christoffel_check, CHRISTOFFEL_TOL, CONNECTION_TOL,
};
pub use enclosing::{
    convex_curve_radius_check, discrete_curvatures, minimal_enclosing_circle, Circle, RadiusCheck,
    CURVATURE_PRECONDITION_SLACK,
};
pub use equator::{
    adjudicate_ii_coefficient, equator_alpha, equator_curvature_bound, equator_ke_closed_form,
    equator_profile, equator_theta_spread, implied_ii_coefficient, printed_ii_coefficient,
    verify_equator, IiAdjudication, IiCandidate, ProfileRow, ATTAINMENT_TOL, BOUND_TOL, H_TOL,
    KE_FLOOR, KE_REL_TOL,
};
pub use inequalities::{
    bonnet_diameter_bound, bonnet_gap, comparability_check, comparability_constant,
    pinching_inequality_check, PinchingCheck, COMPARABILITY_TOL,
};
pub use planes::{heisenberg_plane_bound, PLANE_BOUND_TOL, VERTICAL_H_TOL};

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub check: String,
    pub params: BTreeMap<String, f64>,
    /// Observed extreme values, keyed by quantity.
    pub metrics: BTreeMap<String, f64>,
    pub max_residual: f64,
    /// Minimum over samples of `bound − quantity`; `NaN` when no bound applies.
    pub slack: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(check: &str) -> Self {
        Self {
            check: check.to_string(),
            params: BTreeMap::new(),
            metrics: BTreeMap::new(),
            max_residual: 0.0,
            slack: f64::NAN,
            pass: true,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.to_string(), value);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Records a residual against its tolerance.
    pub fn residual(&mut self, value: f64, tol: f64, what: &str) {
        if value > self.max_residual || value.is_nan() {
            self.max_residual = value;
        }
        if !(value <= tol) {
            self.pass = false;
            self.notes
                .push(alloc::format!("{what}: {value:.3e} exceeds {tol:.1e}"));
        }
    }

    pub fn bound_slack(&mut self, slack: f64) {
        if self.slack.is_nan() || slack < self.slack {
            self.slack = slack;
        }
    }
}
