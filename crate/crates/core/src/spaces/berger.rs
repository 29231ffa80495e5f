//! Berger spheres `S³_B(κ, τ)`: the unit sphere of `ℂ² ≅ ℝ⁴` with the round
//! metric stretched along the Hopf field `V(z, w) = (iz, iw)`.
//!
//! Points are kept extrinsically in ℝ⁴ as `(Re z, Im z, Re w, Im w)`. The
//! metric formula is extended to a neighbourhood of the sphere with `V = Jp`,
//! which makes the sphere a hypersurface of the chart with normal `p`.

use crate::error::{GeomError, Result};
use crate::kernel::{Christoffel, ChristoffelMode, RiemannianChart};
use crate::linalg::{self, Matrix, Vector};
use num_traits::Float;

/// Tolerance on `|z|² + |w|² = 1`.
pub const SPHERE_TOL: f64 = 1e-12;

/// Multiplication by `i` on `ℂ²` in real coordinates.
const J: Matrix<4> = [
    [0.0, -1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BergerSphere {
    kappa: f64,
    tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FrameField {
    E1,
    E2,
    V,
}

impl FrameField {
    pub const ALL: [FrameField; 3] = [FrameField::E1, FrameField::E2, FrameField::V];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// The frame `{E₁, E₂, V}` at a point, in ℝ⁴ components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BergerFrame {
    pub e1: Vector<4>,
    pub e2: Vector<4>,
    pub v: Vector<4>,
}

impl BergerFrame {
    pub fn get(&self, f: FrameField) -> Vector<4> {
        match f {
            FrameField::E1 => self.e1,
            FrameField::E2 => self.e2,
            FrameField::V => self.v,
        }
    }

    /// `c₁E₁ + c₂E₂ + c₃V`
    pub fn combine(&self, c: &[f64; 3]) -> Vector<4> {
        core::array::from_fn(|i| c[0] * self.e1[i] + c[1] * self.e2[i] + c[2] * self.v[i])
    }
}

pub fn e1_field(p: &Vector<4>) -> Vector<4> {
    // (-w̄, z̄)
    [-p[2], p[3], p[0], -p[1]]
}

pub fn e2_field(p: &Vector<4>) -> Vector<4> {
    // (-i w̄, i z̄)
    [-p[3], -p[2], p[1], p[0]]
}

pub fn v_field(p: &Vector<4>) -> Vector<4> {
    linalg::mat_vec(&J, p)
}

impl BergerSphere {
    pub fn new(kappa: f64, tau: f64) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(GeomError::InvalidParameter("Berger sphere needs kappa > 0"));
        }
        if tau == 0.0 || !tau.is_finite() {
            return Err(GeomError::InvalidParameter("Berger sphere needs tau != 0"));
        }
        Ok(Self { kappa, tau })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `4τ²/κ − 1`, the stretch applied along `V`.
    pub fn hopf_coefficient(&self) -> f64 {
        4.0 * self.tau * self.tau / self.kappa - 1.0
    }

    /// True when the metric is a rescaled round metric.
    pub fn is_round(&self) -> bool {
        self.hopf_coefficient().abs() < 1e-15
    }

    /// Scale `λ` with `ξ = λV` of unit length.
    pub fn killing_scale(&self) -> f64 {
        self.kappa / (4.0 * self.tau)
    }

    /// `|V|²` implied by the metric: `16τ²/κ²`.
    pub fn v_norm_squared(&self) -> f64 {
        16.0 * self.tau * self.tau / (self.kappa * self.kappa)
    }

    pub fn frame(&self, p: &Vector<4>) -> Result<BergerFrame> {
        self.validate_point(p)?;
        Ok(BergerFrame {
            e1: e1_field(p),
            e2: e2_field(p),
            v: v_field(p),
        })
    }

    /// The Berger inner product of two ℝ⁴ vectors at a point of the sphere.
    pub fn inner(&self, p: &Vector<4>, x: &Vector<4>, y: &Vector<4>) -> f64 {
        let v = v_field(p);
        4.0 / self.kappa
            * (linalg::dot(x, y)
                + self.hopf_coefficient() * linalg::dot(x, &v) * linalg::dot(y, &v))
    }

    /// Unit vertical Killing field `ξ = (κ/4τ)V`.
    pub fn xi(&self, p: &Vector<4>) -> Vector<4> {
        linalg::scale(self.killing_scale(), &v_field(p))
    }

    /// Hopf rotation `p ↦ e^{iθ}p`.
    pub fn rotate(p: &Vector<4>, theta: f64) -> Vector<4> {
        let (s, c) = theta.sin_cos();
        [
            c * p[0] - s * p[1],
            s * p[0] + c * p[1],
            c * p[2] - s * p[3],
            s * p[2] + c * p[3],
        ]
    }
}

impl RiemannianChart<4> for BergerSphere {
    fn metric_matrix(&self, p: &Vector<4>) -> Matrix<4> {
        let v = v_field(p);
        let c = self.hopf_coefficient();
        let s = 4.0 / self.kappa;
        core::array::from_fn(|i| {
            core::array::from_fn(|j| s * ((i == j) as u8 as f64 + c * v[i] * v[j]))
        })
    }

    fn validate_point(&self, p: &Vector<4>) -> Result<()> {
        let r = linalg::dot(p, p) - 1.0;
        if r.abs() > SPHERE_TOL {
            return Err(GeomError::OffSphere(r));
        }
        Ok(())
    }

    fn analytic_christoffel(&self, p: &Vector<4>) -> Option<Christoffel<4>> {
        let v = v_field(p);
        let c = self.hopf_coefficient();
        let s = 4.0 / self.kappa;
        // ∂_m g_ij = s c (J_im v_j + v_i J_jm)
        let dg: [Matrix<4>; 4] = core::array::from_fn(|m| {
            core::array::from_fn(|i| {
                core::array::from_fn(|j| s * c * (J[i][m] * v[j] + v[i] * J[j][m]))
            })
        });
        let vv = linalg::dot(&v, &v);
        let w = c / (1.0 + c * vv);
        let g_inv: Matrix<4> = core::array::from_fn(|i| {
            core::array::from_fn(|j| ((i == j) as u8 as f64 - w * v[i] * v[j]) / s)
        });
        Some(Christoffel::from_metric_derivatives(
            &g_inv,
            &dg,
            ChristoffelMode::Analytic,
        ))
    }

    fn constraint_normal(&self, p: &Vector<4>) -> Option<Vector<4>> {
        Some(*p)
    }

    fn project_point(&self, p: &Vector<4>) -> Vector<4> {
        linalg::scale(1.0 / linalg::norm(p), p)
    }

    /// The frame `(E₁, E₂, V)` is positive for the boundary orientation of the
    /// unit ball; the Berger sphere is oriented so that `∇_X ξ = τ X ∧ ξ`
    /// holds with the declared sign of `τ`, which is the opposite one.
    fn orientation(&self) -> f64 {
        -self.tau.signum()
    }
}

/// `∇_{E_i} E_j` as coefficients on `(E₁, E₂, V)`, from the Koszul formula
/// for this frame: `[E₁,E₂] = −2V`, `[E₁,V] = 2E₂`, `[E₂,V] = −2E₁`.
pub fn berger_connection(space: &BergerSphere, i: FrameField, j: FrameField) -> [f64; 3] {
    use FrameField::*;
    let t = 4.0 * space.tau * space.tau / space.kappa;
    match (i, j) {
        (E1, E1) | (E2, E2) | (V, V) => [0.0, 0.0, 0.0],
        (E1, E2) => [0.0, 0.0, -1.0],
        (E2, E1) => [0.0, 0.0, 1.0],
        (E1, V) => [0.0, t, 0.0],
        (E2, V) => [-t, 0.0, 0.0],
        (V, E1) => [0.0, t - 2.0, 0.0],
        (V, E2) => [-(t - 2.0), 0.0, 0.0],
    }
}

/// The connection table with the vertical-row coefficients `4τ²/κ − 1` as
/// they are commonly quoted; kept for comparison against
/// [`berger_connection`]. Row two, column three is `∇_{E₂}V`.
pub fn quoted_connection_table(space: &BergerSphere, i: FrameField, j: FrameField) -> [f64; 3] {
    use FrameField::*;
    let t = 4.0 * space.tau * space.tau / space.kappa;
    match (i, j) {
        (V, E1) => [0.0, t - 1.0, 0.0],
        (V, E2) => [-(t - 1.0), 0.0, 0.0],
        _ => berger_connection(space, i, j),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel;

    fn sample_point(a: f64, b: f64, c: f64) -> Vector<4> {
        let q = [
            a.cos() * b.cos(),
            a.cos() * b.sin(),
            a.sin() * c.cos(),
            a.sin() * c.sin(),
        ];
        linalg::scale(1.0 / linalg::norm(&q), &q)
    }

    #[test]
    fn frame_lengths_follow_the_metric() {
        let s = BergerSphere::new(9.0, 0.7).unwrap();
        let p = sample_point(0.3, 1.1, -2.0);
        let f = s.frame(&p).unwrap();
        assert!((s.inner(&p, &f.e1, &f.e1) - 4.0 / 9.0).abs() < 1e-12);
        assert!((s.inner(&p, &f.e2, &f.e2) - 4.0 / 9.0).abs() < 1e-12);
        assert!((s.inner(&p, &f.v, &f.v) - s.v_norm_squared()).abs() < 1e-12);
        assert!(s.inner(&p, &f.e1, &f.v).abs() < 1e-14);
    }

    #[test]
    fn vertical_field_at_base_point() {
        let f = BergerSphere::new(4.0, 1.0)
            .unwrap()
            .frame(&[1.0, 0.0, 0.0, 0.0])
            .unwrap();
        assert_eq!(f.v, [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn off_sphere_points_are_rejected() {
        let s = BergerSphere::new(4.0, 0.5).unwrap();
        assert!(matches!(
            s.frame(&[1.0, 1e-5, 0.0, 0.0]),
            Err(GeomError::OffSphere(_))
        ));
        assert!(BergerSphere::new(-1.0, 0.5).is_err());
        assert!(BergerSphere::new(1.0, 0.0).is_err());
    }

    #[test]
    fn analytic_christoffel_matches_finite_differences() {
        let s = BergerSphere::new(3.0, 0.4).unwrap();
        let p = sample_point(0.7, -0.2, 0.9);
        let a = s.analytic_christoffel(&p).unwrap();
        let fd = kernel::christoffel_fd(&s, &p, kernel::FD_STEP).unwrap();
        assert!(a.max_abs_difference(&fd) < 1e-8);
        assert_eq!(a.symmetry_residual(), 0.0);
    }

    #[test]
    fn quoted_table_differs_only_in_vertical_row() {
        let s = BergerSphere::new(4.0, 0.5).unwrap();
        let mut differing = 0;
        for i in FrameField::ALL {
            for j in FrameField::ALL {
                let a = berger_connection(&s, i, j);
                let b = quoted_connection_table(&s, i, j);
                if a != b {
                    differing += 1;
                    assert_eq!(i, FrameField::V);
                }
            }
        }
        assert_eq!(differing, 2);
        assert_eq!(
            quoted_connection_table(&s, FrameField::V, FrameField::E1),
            [0.0, 0.25 - 1.0, 0.0]
        );
    }
}
