//! Complete surfaces used as bases of product spaces.
//!
//! Curved bases are surfaces of revolution written in geodesic polar form
//! `ds² + f(s)² dφ²`, with `s` arc length along a meridian and `φ` periodic.

use crate::error::{GeomError, Result};
use crate::kernel::{Christoffel, ChristoffelMode, RiemannianChart};
use crate::linalg::{Matrix, Vector};
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};
use num_traits::Float;

/// Curvature on the cylindrical section of a capped cylinder when none is given.
pub const DEFAULT_CYLINDER_CURVATURE: f64 = 1e-3;
const BLEND_NODES: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum Surface2D {
    RoundSphere { radius: f64 },
    CappedCylinder(CappedProfile),
    FlatPlane,
}

/// Meridian profile of a smoothed cylinder of length `l` and radius ≈ 1
/// closed by two caps.
///
/// The Gaussian curvature `K = −f''/f` is prescribed: a small constant `ε` on
/// `|s| ≤ l/2`, a quintic smoothstep ramp over `blend` up to a cap value
/// `K_c`, and `K_c` on the caps. `K_c` is solved for so that the caps close
/// smoothly at the poles (`f' = ∓1` where `f = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct CappedProfile {
    length: f64,
    blend: f64,
    cylinder_curvature: f64,
    cap_curvature: f64,
    /// `(f, f')` at equally spaced nodes on `[l/2, l/2 + blend]`.
    blend_table: Vec<(f64, f64)>,
    cap_amplitude: f64,
    cap_phase: f64,
    pole: f64,
}

fn smoothstep5(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (10.0 - 15.0 * x + 6.0 * x * x)
}

fn rk4_profile(k: &impl Fn(f64) -> f64, s: f64, f: f64, df: f64, h: f64) -> (f64, f64) {
    let a1 = (df, -k(s) * f);
    let (f2, d2) = (f + 0.5 * h * a1.0, df + 0.5 * h * a1.1);
    let a2 = (d2, -k(s + 0.5 * h) * f2);
    let (f3, d3) = (f + 0.5 * h * a2.0, df + 0.5 * h * a2.1);
    let a3 = (d3, -k(s + 0.5 * h) * f3);
    let (f4, d4) = (f + h * a3.0, df + h * a3.1);
    let a4 = (d4, -k(s + h) * f4);
    (
        f + h / 6.0 * (a1.0 + 2.0 * a2.0 + 2.0 * a3.0 + a4.0),
        df + h / 6.0 * (a1.1 + 2.0 * a2.1 + 2.0 * a3.1 + a4.1),
    )
}

impl CappedProfile {
    pub fn new(length: f64, blend: f64) -> Result<Self> {
        Self::with_cylinder_curvature(length, blend, DEFAULT_CYLINDER_CURVATURE)
    }

    pub fn with_cylinder_curvature(length: f64, blend: f64, eps: f64) -> Result<Self> {
        if !(length > 0.0) || !(blend > 0.0) || !(eps > 0.0) {
            return Err(GeomError::InvalidParameter(
                "capped cylinder needs l, blend, eps > 0",
            ));
        }
        if eps.sqrt() * length / 2.0 >= FRAC_PI_2 {
            return Err(GeomError::InvalidParameter(
                "cylinder curvature closes the profile too early",
            ));
        }
        let half = length / 2.0;
        let f0 = (eps.sqrt() * half).cos();
        let d0 = -eps.sqrt() * (eps.sqrt() * half).sin();
        let h = blend / BLEND_NODES as f64;
        let integrate = |kc: f64| -> Option<Vec<(f64, f64)>> {
            let k = |s: f64| eps + (kc - eps) * smoothstep5((s - half) / blend);
            let mut table = Vec::with_capacity(BLEND_NODES + 1);
            let (mut f, mut df) = (f0, d0);
            table.push((f, df));
            for i in 0..BLEND_NODES {
                (f, df) = rk4_profile(&k, half + i as f64 * h, f, df, h);
                if f <= 0.0 {
                    return None;
                }
                table.push((f, df));
            }
            Some(table)
        };
        // closure condition K_c f² + f'² = 1 at the end of the blend
        let residual = |kc: f64| match integrate(kc) {
            Some(t) => {
                let (f, df) = *t.last().unwrap();
                kc * f * f + df * df - 1.0
            }
            None => f64::INFINITY,
        };
        let (mut lo, mut hi) = (eps, 1.0);
        while residual(hi) < 0.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(GeomError::InvalidParameter(
                    "capped cylinder profile cannot close",
                ));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if residual(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let kc = 0.5 * (lo + hi);
        let blend_table = integrate(kc).ok_or(GeomError::InvalidParameter(
            "capped cylinder profile cannot close",
        ))?;
        let (fb, db) = *blend_table.last().unwrap();
        let w = kc.sqrt();
        let cap_phase = (-db / w).atan2(fb);
        let cap_amplitude = (fb * fb + db * db / kc).sqrt();
        let pole = half + blend + (FRAC_PI_2 - cap_phase) / w;
        Ok(Self {
            length,
            blend,
            cylinder_curvature: eps,
            cap_curvature: kc,
            blend_table,
            cap_amplitude,
            cap_phase,
            pole,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn blend(&self) -> f64 {
        self.blend
    }

    pub fn cylinder_curvature(&self) -> f64 {
        self.cylinder_curvature
    }

    pub fn cap_curvature(&self) -> f64 {
        self.cap_curvature
    }

    /// Arc length from the middle of the cylinder to either pole.
    pub fn pole(&self) -> f64 {
        self.pole
    }

    /// `K(s) = −f''(s)/f(s)`.
    pub fn curvature(&self, s: f64) -> f64 {
        let half = self.length / 2.0;
        let a = s.abs();
        self.cylinder_curvature
            + (self.cap_curvature - self.cylinder_curvature) * smoothstep5((a - half) / self.blend)
    }

    /// `(f, f', f'')` at arc length `s`.
    pub fn eval(&self, s: f64) -> (f64, f64, f64) {
        let sign = if s < 0.0 { -1.0 } else { 1.0 };
        let a = s.abs();
        let half = self.length / 2.0;
        let (f, df) = if a <= half {
            let w = self.cylinder_curvature.sqrt();
            ((w * a).cos(), -w * (w * a).sin())
        } else if a < half + self.blend {
            let h = self.blend / BLEND_NODES as f64;
            let i = (((a - half) / h) as usize).min(BLEND_NODES - 1);
            let (f0, d0) = self.blend_table[i];
            let k = |s: f64| self.curvature(s);
            rk4_profile(&k, half + i as f64 * h, f0, d0, a - (half + i as f64 * h))
        } else {
            let w = self.cap_curvature.sqrt();
            let arg = w * (a - half - self.blend) + self.cap_phase;
            (
                self.cap_amplitude * arg.cos(),
                -self.cap_amplitude * w * arg.sin(),
            )
        };
        (f, sign * df, -self.curvature(a) * f)
    }
}

impl Surface2D {
    pub fn round_sphere(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(GeomError::InvalidParameter(
                "sphere radius must be positive",
            ));
        }
        Ok(Self::RoundSphere { radius })
    }

    pub fn capped_cylinder(length: f64, blend: f64) -> Result<Self> {
        Ok(Self::CappedCylinder(CappedProfile::new(length, blend)?))
    }

    /// Period of the second chart coordinate, if it is an angle.
    pub fn period(&self) -> Option<f64> {
        match self {
            Self::FlatPlane => None,
            _ => Some(TAU),
        }
    }

    /// Open interval of the meridian coordinate covered by the chart.
    pub fn meridian_range(&self) -> Option<(f64, f64)> {
        match self {
            Self::RoundSphere { radius } => Some((0.0, PI * radius)),
            Self::CappedCylinder(p) => Some((-p.pole(), p.pole())),
            Self::FlatPlane => None,
        }
    }

    /// `(f, f', f'')` of the revolution profile; `None` for the flat plane.
    pub fn profile(&self, s: f64) -> Option<(f64, f64, f64)> {
        match self {
            Self::RoundSphere { radius } => {
                let (sn, cs) = (s / radius).sin_cos();
                Some((radius * sn, cs, -sn / radius))
            }
            Self::CappedCylinder(p) => Some(p.eval(s)),
            Self::FlatPlane => None,
        }
    }

    /// Closed-form Gaussian curvature at a chart point.
    pub fn gaussian_curvature(&self, p: &Vector<2>) -> f64 {
        match self {
            Self::RoundSphere { radius } => 1.0 / (radius * radius),
            Self::CappedCylinder(prof) => prof.curvature(p[0]),
            Self::FlatPlane => 0.0,
        }
    }

    /// Embeds a round-sphere chart point in ℝ³ (north pole at `s = 0`).
    pub fn sphere_to_cartesian(radius: f64, p: &Vector<2>) -> Vector<3> {
        let (ss, cs) = (p[0] / radius).sin_cos();
        let (sp, cp) = p[1].sin_cos();
        [radius * ss * cp, radius * ss * sp, radius * cs]
    }

    pub fn sphere_from_cartesian(radius: f64, q: &Vector<3>) -> Vector<2> {
        let r = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
        let polar = (q[2] / r).clamp(-1.0, 1.0).acos();
        let mut phi = q[1].atan2(q[0]);
        if phi < 0.0 {
            phi += TAU;
        }
        [radius * polar, phi]
    }
}

impl RiemannianChart<2> for Surface2D {
    fn metric_matrix(&self, p: &Vector<2>) -> Matrix<2> {
        match self.profile(p[0]) {
            Some((f, _, _)) => [[1.0, 0.0], [0.0, f * f]],
            None => [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    fn validate_point(&self, p: &Vector<2>) -> Result<()> {
        if !p.iter().all(|c| c.is_finite()) {
            return Err(GeomError::OutsideChart("non-finite coordinate"));
        }
        if let Some((lo, hi)) = self.meridian_range() {
            if !(p[0] > lo && p[0] < hi) {
                return Err(GeomError::OutsideChart(
                    "meridian coordinate at or beyond a pole",
                ));
            }
        }
        Ok(())
    }

    fn analytic_christoffel(&self, p: &Vector<2>) -> Option<Christoffel<2>> {
        let mut gamma = [[[0.0; 2]; 2]; 2];
        if let Some((f, df, _)) = self.profile(p[0]) {
            gamma[0][1][1] = -f * df;
            gamma[1][0][1] = df / f;
            gamma[1][1][0] = df / f;
        }
        Some(Christoffel {
            gamma,
            mode: ChristoffelMode::Analytic,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capped_profile_is_c2_and_closes_smoothly() {
        let p = CappedProfile::new(10.0, 0.2).unwrap();
        // f'' = −K f continuous across the section boundaries
        for s in [5.0, 5.2] {
            let (fa, da, _) = p.eval(s - 1e-9);
            let (fb, db, _) = p.eval(s + 1e-9);
            assert!(
                (fa - fb).abs() < 1e-8 && (da - db).abs() < 1e-8,
                "jump at {s}"
            );
        }
        let (f, df, _) = p.eval(p.pole() - 1e-7);
        assert!(f.abs() < 1e-6);
        assert!((df + 1.0).abs() < 1e-6, "cone point at pole: f' = {df}");
        assert!((p.cap_curvature() - 1.0).abs() < 0.1);
    }

    #[test]
    fn profile_derivatives_are_consistent() {
        let p = CappedProfile::new(10.0, 0.2).unwrap();
        for s in [0.3, 4.9, 5.05, 5.13, 5.5, 6.0, -5.1] {
            let h = 1e-5;
            let (_, df, ddf) = p.eval(s);
            let fd1 = (p.eval(s + h).0 - p.eval(s - h).0) / (2.0 * h);
            let fd2 = (p.eval(s + h).1 - p.eval(s - h).1) / (2.0 * h);
            assert!((df - fd1).abs() < 1e-8, "f' at {s}");
            assert!((ddf - fd2).abs() < 1e-7, "f'' at {s}");
        }
    }

    #[test]
    fn sphere_cartesian_round_trip() {
        let p = [1.1, 4.0];
        let q = Surface2D::sphere_to_cartesian(1.0, &p);
        let back = Surface2D::sphere_from_cartesian(1.0, &q);
        assert!((back[0] - p[0]).abs() < 1e-14 && (back[1] - p[1]).abs() < 1e-14);
    }
}
