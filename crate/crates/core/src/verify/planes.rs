use super::VerificationReport;
use crate::error::{GeomError, Result};
use crate::immersion::{shape_report, AffinePlane, ParametricSurface, SurfaceFamily};
use crate::spaces::Heisenberg;
use alloc::format;

pub const PLANE_BOUND_TOL: f64 = 1e-6;
pub const VERTICAL_H_TOL: f64 = 1e-7;

/// `max |k_i| ≤ |τ|` over an `n × n` grid of an affine plane in `Nil₃(τ)`,
/// plus minimality when the plane is vertical.
pub fn heisenberg_plane_bound(
    tau: f64,
    plane: &AffinePlane,
    n: usize,
) -> Result<VerificationReport> {
    let space = Heisenberg::new(tau)?;
    let nrm = plane.normal();
    let mut report = VerificationReport::new("heisenberg-plane")
        .param("tau", tau)
        .param("a", nrm[0])
        .param("b", nrm[1])
        .param("c", nrm[2])
        .param("grid", n as f64);
    let (mut max_k, mut max_h) = (0.0f64, 0.0f64);
    for (u, v) in plane.domain().grid(n, n) {
        let r = shape_report(plane, &space, u, v)?;
        if !r.k1.is_finite() || !r.k2.is_finite() {
            return Err(GeomError::DegenerateImmersion(0.0));
        }
        let k = r.k1.abs().max(r.k2.abs());
        max_k = max_k.max(k);
        max_h = max_h.max(r.h.abs());
        report.bound_slack(tau.abs() - k);
    }
    report.metric("max_abs_k", max_k);
    report.metric("max_abs_h", max_h);
    report.residual(
        (max_k - tau.abs()).max(0.0),
        PLANE_BOUND_TOL,
        "bound excess",
    );
    if plane.family() == SurfaceFamily::VerticalPlane {
        report.residual(max_h, VERTICAL_H_TOL, "max |H| on a vertical plane");
    }
    report.note(format!("max |k_i| = {max_k:.12e}, max |H| = {max_h:.3e}"));
    Ok(report)
}
