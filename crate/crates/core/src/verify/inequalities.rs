use super::VerificationReport;
use crate::error::{GeomError, Result};
use crate::kernel::RiemannianChart;
use crate::linalg::{self, Matrix};
use crate::spaces::BergerSphere;
use alloc::format;
use core::f64::consts::PI;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Lower limit on the smallest eigenvalue of `a² I − g`.
pub const COMPARABILITY_TOL: f64 = 1e-12;

/// `a² = (4/κ)(1 + |4τ²/κ − 1|)`
pub fn comparability_constant(kappa: f64, tau: f64) -> f64 {
    4.0 / kappa * (1.0 + (4.0 * tau * tau / kappa - 1.0).abs())
}

pub(crate) fn random_unit4(rng: &mut ChaCha8Rng) -> [f64; 4] {
    loop {
        let p: [f64; 4] = core::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = linalg::norm(&p);
        if n > 0.1 && n <= 1.0 {
            return linalg::scale(1.0 / n, &p);
        }
    }
}

/// `a²‖X‖² − ⟨X, X⟩_(κ,τ) ≥ 0` as a matrix inequality at `samples` random
/// points, plus the scalar inequality for one random tangent vector each.
pub fn comparability_check(
    kappa: f64,
    tau: f64,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let space = BergerSphere::new(kappa, tau)?;
    let a2 = comparability_constant(kappa, tau);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("comparability")
        .param("kappa", kappa)
        .param("tau", tau)
        .param("samples", samples as f64)
        .param("a2", a2);
    let mut min_eig = f64::INFINITY;
    let mut min_scalar = f64::INFINITY;
    for _ in 0..samples {
        let p = random_unit4(&mut rng);
        let g = space.metric_matrix(&p);
        let diff: Matrix<4> = core::array::from_fn(|i| {
            core::array::from_fn(|j| if i == j { a2 } else { 0.0 } - g[i][j])
        });
        min_eig = min_eig.min(linalg::symmetric_eigenvalues(&diff)[0]);
        let raw = random_unit4(&mut rng);
        let x = linalg::axpy(&raw, -linalg::dot(&raw, &p), &p);
        let xx = linalg::dot(&x, &x);
        if xx > 1e-12 {
            min_scalar = min_scalar.min((a2 * xx - linalg::bilinear(&g, &x, &x)) / xx);
        }
    }
    report.bound_slack(min_eig);
    report.metric("min_eigenvalue", min_eig);
    report.metric("min_tangent_slack", min_scalar);
    report.residual(
        (-min_eig).max(0.0),
        COMPARABILITY_TOL,
        "negative eigenvalue of a^2 I - g",
    );
    report.residual(
        (-min_scalar).max(0.0),
        COMPARABILITY_TOL,
        "tangent inequality violation",
    );
    report.note(format!(
        "min eigenvalue {min_eig:.3e}, min tangent slack {min_scalar:.3e}"
    ));
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PinchingCheck {
    pub ratio: f64,
    /// `κ⁻/κ⁺ ≤ 1/4`: the length window below is non-empty.
    pub contradiction_possible: bool,
    /// `2π/√κ⁺`, twice the injectivity-radius lower bound.
    pub injectivity_length: f64,
    /// `π/√κ⁻`, the Bonnet diameter bound.
    pub bonnet_length: f64,
    /// `bonnet_length − injectivity_length`.
    pub slack: f64,
}

pub fn pinching_inequality_check(kappa_minus: f64, kappa_plus: f64) -> Result<PinchingCheck> {
    if !(kappa_minus > 0.0) || !(kappa_plus >= kappa_minus) {
        return Err(GeomError::InvalidParameter("need 0 < kappa- <= kappa+"));
    }
    let injectivity_length = 2.0 * PI / kappa_plus.sqrt();
    let bonnet_length = PI / kappa_minus.sqrt();
    let ratio = kappa_minus / kappa_plus;
    Ok(PinchingCheck {
        ratio,
        contradiction_possible: ratio <= 0.25,
        injectivity_length,
        bonnet_length,
        slack: bonnet_length - injectivity_length,
    })
}

/// `π / c`
pub fn bonnet_diameter_bound(c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(GeomError::InvalidParameter(
            "curvature bound must be positive",
        ));
    }
    Ok(PI / c)
}

/// `π/(2√κ⁺) − π/c`: positive when a geodesic disk of radius just under
/// `π/(2√κ⁺)` is wider than the diameter bound.
pub fn bonnet_gap(c: f64, kappa_plus: f64) -> Result<f64> {
    if !(kappa_plus > 0.0) {
        return Err(GeomError::InvalidParameter("kappa+ must be positive"));
    }
    Ok(PI / (2.0 * kappa_plus.sqrt()) - bonnet_diameter_bound(c)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert_eq!(comparability_constant(4.0, 1.0), 1.0);
        assert!((comparability_constant(4.0, 0.5) - 1.75).abs() < 1e-15);
        assert!((bonnet_diameter_bound(2.5).unwrap() - 1.2566370614359172).abs() < 1e-15);
        assert!(bonnet_gap(2.5, 1.0).unwrap() > 0.0);
        assert!(bonnet_gap(2.0, 1.0).unwrap().abs() < 1e-15);
        assert!(bonnet_diameter_bound(0.0).is_err());
    }

    #[test]
    fn pinching_examples() {
        let c = pinching_inequality_check(1.0, 1.0).unwrap();
        assert!(!c.contradiction_possible && c.slack < 0.0);
        let c = pinching_inequality_check(0.2, 1.0).unwrap();
        assert!(c.contradiction_possible && c.slack > 0.0);
        let c = pinching_inequality_check(0.26, 1.0).unwrap();
        assert!(!c.contradiction_possible);
        assert!((c.injectivity_length - 6.283185307179586).abs() < 1e-12);
        assert!((c.bonnet_length - 6.161170094).abs() < 1e-8);
        assert!(pinching_inequality_check(0.0, 1.0).is_err());
    }

    #[test]
    fn comparability_holds() {
        let r = comparability_check(9.0, 0.25, 500, 7).unwrap();
        assert!(r.pass, "{:?}", r.notes);
    }
}
