use super::VerificationReport;
use crate::error::{GeomError, Result};
use crate::immersion::{shape_report, Equator, ShapeReport};
use crate::spaces::BergerSphere;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

pub const H_TOL: f64 = 1e-6;
pub const KE_REL_TOL: f64 = 1e-4;
/// Denominator floor for relative `K_e` errors where `K_e` vanishes.
pub const KE_FLOOR: f64 = 1e-6;
pub const BOUND_TOL: f64 = 1e-6;
pub const ATTAINMENT_TOL: f64 = 1e-4;

fn check_params(kappa: f64, tau: f64) -> Result<()> {
    if !(kappa > 0.0) || tau == 0.0 || !tau.is_finite() {
        return Err(GeomError::InvalidParameter("need kappa > 0 and tau != 0"));
    }
    Ok(())
}

fn denominator(kappa: f64, tau: f64, x: f64) -> f64 {
    kappa + 4.0 * tau * tau - (kappa - 4.0 * tau * tau) * (2.0 * x).cos()
}

/// `α = √(2κτ² / (κ + 4τ² − (κ − 4τ²) cos 2x))`
pub fn equator_alpha(kappa: f64, tau: f64, x: f64) -> f64 {
    (2.0 * kappa * tau * tau / denominator(kappa, tau, x)).sqrt()
}

/// `K_e = −4τ²(κ − 4τ²)² cos⁴x / (κ + 4τ² − (κ − 4τ²) cos 2x)²`
pub fn equator_ke_closed_form(kappa: f64, tau: f64, x: f64) -> f64 {
    let d = denominator(kappa, tau, x);
    let m = kappa - 4.0 * tau * tau;
    -4.0 * tau * tau * m * m * x.cos().powi(4) / (d * d)
}

/// `|κ − 4τ²| / (4|τ|)`
pub fn equator_curvature_bound(kappa: f64, tau: f64) -> f64 {
    (kappa - 4.0 * tau * tau).abs() / (4.0 * tau.abs())
}

/// The mixed second-form coefficient as printed: `4α(κ − 4τ²) cos³x`.
pub fn printed_ii_coefficient(kappa: f64, tau: f64, x: f64) -> f64 {
    4.0 * equator_alpha(kappa, tau, x) * (kappa - 4.0 * tau * tau) * x.cos().powi(3)
}

/// The mixed coefficient forced by the closed-form `K_e` through
/// `K_e E G = −f²`: `4α(κ − 4τ²) cos³x / κ²`.
pub fn implied_ii_coefficient(kappa: f64, tau: f64, x: f64) -> f64 {
    printed_ii_coefficient(kappa, tau, x) / (kappa * kappa)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileRow {
    pub x: f64,
    pub k1: f64,
    pub k2: f64,
    pub h: f64,
    pub ke_oracle: f64,
    pub ke_closed: f64,
}

fn grid_axis(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 2.0 * PI * i as f64 / (n - 1) as f64)
        .collect()
}

fn oracle(
    space: &BergerSphere,
    surface: &Equator,
    x: f64,
    y: f64,
) -> Result<Option<ShapeReport<4>>> {
    match shape_report(surface, space, x, y) {
        Ok(r) => Ok(Some(r)),
        Err(GeomError::DegenerateImmersion(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Minimality, closed-form `K_e`, and the curvature bound with its
/// attainment, over an `n × n` grid of `[0, 2π]²`.
pub fn verify_equator(kappa: f64, tau: f64, theta: f64, n: usize) -> Result<VerificationReport> {
    check_params(kappa, tau)?;
    if n < 2 {
        return Err(GeomError::InvalidParameter(
            "grid needs at least two samples per axis",
        ));
    }
    let space = BergerSphere::new(kappa, tau)?;
    let surface = Equator::new(theta);
    let bound = equator_curvature_bound(kappa, tau);
    let mut report = VerificationReport::new("equator")
        .param("kappa", kappa)
        .param("tau", tau)
        .param("theta", theta)
        .param("grid", n as f64);
    let axis = grid_axis(n);
    let (mut max_h, mut max_ke, mut max_k, mut max_abs_ke) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut skipped = 0usize;
    let mut attained: Vec<(f64, f64)> = Vec::new();
    for &x in &axis {
        let mut row_max = None::<f64>;
        for &y in &axis {
            let Some(r) = oracle(&space, &surface, x, y)? else {
                skipped += 1;
                continue;
            };
            let closed = equator_ke_closed_form(kappa, tau, x);
            max_h = max_h.max(r.h.abs());
            max_ke = max_ke.max((r.ke - closed).abs() / closed.abs().max(KE_FLOOR));
            max_abs_ke = max_abs_ke.max(r.ke.abs());
            let k = r.k1.abs().max(r.k2.abs());
            max_k = max_k.max(k);
            report.bound_slack(bound - k);
            row_max = Some(row_max.map_or(k, |m: f64| m.max(k)));
        }
        if (x.cos().abs() - 1.0).abs() < 1e-12 {
            if let Some(m) = row_max {
                attained.push((x, m));
            }
        }
    }
    report.residual(max_h, H_TOL, "max |H|");
    report.residual(max_ke, KE_REL_TOL, "relative K_e error");
    report.residual((max_k - bound).max(0.0), BOUND_TOL, "bound excess");
    if attained.is_empty() {
        report.pass = false;
        report.note("grid has no sample with |cos x| = 1");
    }
    let attainment = attained
        .iter()
        .map(|(_, m)| (m - bound).abs())
        .fold(0.0, f64::max);
    report.metric("max_abs_h", max_h);
    report.metric("max_rel_ke_error", max_ke);
    report.metric("max_abs_k", max_k);
    report.metric("max_abs_ke", max_abs_ke);
    report.metric("bound", bound);
    report.metric("attainment_error", attainment);
    for (x, m) in &attained {
        report.residual(
            (m - bound).abs(),
            ATTAINMENT_TOL,
            &format!("bound attainment at x = {x:.6}"),
        );
    }
    if bound == 0.0 || max_k < 1e-6 {
        report.note("round case: K_e vanishes identically");
    }
    if skipped > 0 {
        report.note(format!(
            "{skipped} samples on the parametrization poles cos x = 0 skipped"
        ));
    }
    report.note(format!("max |k_i| = {max_k:.12e}, bound = {bound:.12e}"));
    Ok(report)
}

/// Oracle and closed-form curvatures along `x` at a fixed `y`.
pub fn equator_profile(
    kappa: f64,
    tau: f64,
    theta: f64,
    y: f64,
    n: usize,
) -> Result<Vec<ProfileRow>> {
    check_params(kappa, tau)?;
    let space = BergerSphere::new(kappa, tau)?;
    let surface = Equator::new(theta);
    let mut rows = Vec::with_capacity(n);
    for x in grid_axis(n) {
        if let Some(r) = oracle(&space, &surface, x, y)? {
            rows.push(ProfileRow {
                x,
                k1: r.k1,
                k2: r.k2,
                h: r.h,
                ke_oracle: r.ke,
                ke_closed: equator_ke_closed_form(kappa, tau, x),
            });
        }
    }
    Ok(rows)
}

/// Largest difference in `(k₁, k₂, H, K_e)` along `x` between the profiles
/// of the given `θ` values.
pub fn equator_theta_spread(kappa: f64, tau: f64, thetas: &[f64], n: usize) -> Result<f64> {
    let profiles = thetas
        .iter()
        .map(|&t| equator_profile(kappa, tau, t, 0.3, n))
        .collect::<Result<Vec<_>>>()?;
    let mut spread = 0.0f64;
    for p in &profiles[1..] {
        for (a, b) in profiles[0].iter().zip(p) {
            spread = spread
                .max((a.k1 - b.k1).abs())
                .max((a.k2 - b.k2).abs())
                .max((a.h - b.h).abs())
                .max((a.ke_oracle - b.ke_oracle).abs());
        }
    }
    Ok(spread)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum IiCandidate {
    Printed,
    Implied,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IiAdjudication {
    /// Worst relative residual of `K_e E G + f²` for the printed and the
    /// implied coefficient.
    pub printed_residual: f64,
    pub implied_residual: f64,
    /// Worst relative mismatch between each candidate and the oracle `f`.
    pub printed_oracle_error: f64,
    pub implied_oracle_error: f64,
    /// Candidates satisfying the identity within the tolerance.
    pub consistent: Vec<IiCandidate>,
    /// `|f_printed| / |f_oracle|`, extreme values over samples where `f` is
    /// not negligible.
    pub factor_range: (f64, f64),
    /// Whether the oracle `f` has the sign of the closed-form candidates for
    /// the oriented normal.
    pub same_sign: bool,
    pub report: VerificationReport,
}

/// Decides which mixed second-form coefficient is compatible with the
/// closed-form `K_e`, using the oracle `E`, `G` and `f`.
pub fn adjudicate_ii_coefficient(
    kappa: f64,
    tau: f64,
    theta: f64,
    n: usize,
) -> Result<IiAdjudication> {
    check_params(kappa, tau)?;
    let space = BergerSphere::new(kappa, tau)?;
    let surface = Equator::new(theta);
    let axis = grid_axis(n);
    let scale = 4.0 * equator_alpha(kappa, tau, 0.0) * (kappa - 4.0 * tau * tau).abs();
    let floor = |v: f64| v.abs().max(KE_FLOOR);
    let (mut res_a, mut res_b, mut err_a, mut err_b) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut fmin, mut fmax) = (f64::INFINITY, 0.0f64);
    let mut same_sign = true;
    let mut gap = 0.0f64;
    for &x in &axis {
        for &y in &axis {
            let Some(r) = oracle(&space, &surface, x, y)? else {
                continue;
            };
            let ke = equator_ke_closed_form(kappa, tau, x);
            let eg = r.forms.e_1 * r.forms.g_1;
            let fa = printed_ii_coefficient(kappa, tau, x);
            let fb = implied_ii_coefficient(kappa, tau, x);
            gap = gap.max((fa - fb).abs());
            let f = r.forms.f_2;
            res_a = res_a.max((ke * eg + fa * fa).abs() / floor(ke * eg));
            res_b = res_b.max((ke * eg + fb * fb).abs() / floor(ke * eg));
            err_a = err_a.max((fa.abs() - f.abs()).abs() / floor(f));
            err_b = err_b.max((fb.abs() - f.abs()).abs() / floor(f));
            if f.abs() > 1e-3 * scale.max(KE_FLOOR) {
                let ratio = fa.abs() / f.abs();
                fmin = fmin.min(ratio);
                fmax = fmax.max(ratio);
                if f.signum() != fb.signum() {
                    same_sign = false;
                }
            }
        }
    }
    let mut consistent = Vec::new();
    if res_a < KE_REL_TOL {
        consistent.push(IiCandidate::Printed);
    }
    if res_b < KE_REL_TOL {
        consistent.push(IiCandidate::Implied);
    }
    let mut report = VerificationReport::new("ii-adjudication")
        .param("kappa", kappa)
        .param("tau", tau)
        .param("theta", theta)
        .param("grid", n as f64);
    report.max_residual = res_a.min(res_b);
    // at kappa = 1 or kappa = 4 tau^2 the candidates are the same function
    let coincide = gap <= 1e-12 * (1.0 + scale);
    report.pass = consistent.len() == 1 || (coincide && consistent.len() == 2);
    match consistent.as_slice() {
        [IiCandidate::Printed] => report.note("identity K_e E G = -f^2 holds for the printed coefficient 4a(k-4t^2)cos^3x"),
        [IiCandidate::Implied] => report.note("identity K_e E G = -f^2 holds for 4a(k-4t^2)cos^3x / k^2, not for the printed coefficient"),
        [] => report.note("neither candidate satisfies K_e E G = -f^2"),
        _ => report.note("both candidates satisfy K_e E G = -f^2: they coincide for these parameters, nothing to adjudicate"),
    }
    if fmax > 0.0 {
        report.note(format!(
            "printed/oracle coefficient ratio in [{fmin:.12}, {fmax:.12}], kappa^2 = {:.12}",
            kappa * kappa
        ));
    }
    report.note(format!(
        "relative residuals: printed {res_a:.3e}, implied {res_b:.3e}"
    ));
    Ok(IiAdjudication {
        printed_residual: res_a,
        implied_residual: res_b,
        printed_oracle_error: err_a,
        implied_oracle_error: err_b,
        consistent,
        factor_range: (fmin, fmax),
        same_sign,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        assert!((equator_ke_closed_form(4.0, 0.5, 0.0) + 2.25).abs() < 1e-15);
        assert_eq!(equator_ke_closed_form(4.0, 1.0, 0.7), 0.0);
        assert!(equator_ke_closed_form(9.0, 0.3, PI / 2.0).abs() < 1e-30);
        assert!((equator_curvature_bound(4.0, 0.5) - 1.5).abs() < 1e-15);
        assert!((equator_curvature_bound(1.0, 1.0) - 0.75).abs() < 1e-15);
        assert_eq!(equator_curvature_bound(4.0, 1.0), 0.0);
        assert!((equator_alpha(4.0, 0.5, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn minimality_makes_the_bound_sharp_at_cos_one() {
        for (k, t) in [(1.0, 0.25), (9.0, 1.0), (4.0, 0.5)] {
            let b = equator_curvature_bound(k, t);
            for i in 0..=50 {
                let x = PI * i as f64 / 50.0;
                let k_abs = (-equator_ke_closed_form(k, t, x)).sqrt();
                assert!(k_abs <= b * (1.0 + 1e-14));
                if x.cos().abs() == 1.0 {
                    assert!((k_abs - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn small_grid_passes() {
        let r = verify_equator(4.0, 0.5, 0.3, 21).unwrap();
        assert!(r.pass, "{:?}", r.notes);
        assert!(r.slack > -BOUND_TOL);
    }

    #[test]
    fn implied_coefficient_is_selected_away_from_unit_kappa() {
        let a = adjudicate_ii_coefficient(4.0, 0.5, 0.0, 21).unwrap();
        assert_eq!(a.consistent, [IiCandidate::Implied]);
        assert!((a.factor_range.0 / 16.0 - 1.0).abs() < 1e-6);
        assert!((a.factor_range.1 / 16.0 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(verify_equator(-1.0, 0.5, 0.0, 11).is_err());
        assert!(verify_equator(4.0, 0.0, 0.0, 11).is_err());
    }
}
