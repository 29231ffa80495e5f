use super::{Domain, ParametricSurface, SurfaceFamily, SurfaceJet};
use crate::error::{GeomError, Result};
use crate::linalg::{self, Vector};
use crate::spaces::{e1_field, e2_field, v_field, Surface2D};
use core::f64::consts::{FRAC_PI_2, PI, TAU};
use num_traits::Float;

/// The equator `ψ(x, y) = (cos x sin y, cos x cos y, sin x sin θ, sin x cos θ)`
/// of the 3-sphere, in real coordinates `(Re z, Im z, Re w, Im w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equator {
    pub theta: f64,
}

impl Equator {
    pub fn new(theta: f64) -> Self {
        Self { theta }
    }
}

impl ParametricSurface<4> for Equator {
    fn domain(&self) -> Domain {
        Domain::new((0.0, TAU), (0.0, TAU))
    }

    fn family(&self) -> SurfaceFamily {
        SurfaceFamily::Equator
    }

    fn point(&self, x: f64, y: f64) -> Vector<4> {
        let (sx, cx) = x.sin_cos();
        let (sy, cy) = y.sin_cos();
        let (st, ct) = self.theta.sin_cos();
        [cx * sy, cx * cy, sx * st, sx * ct]
    }

    fn jet(&self, x: f64, y: f64) -> SurfaceJet<4> {
        let (sx, cx) = x.sin_cos();
        let (sy, cy) = y.sin_cos();
        let (st, ct) = self.theta.sin_cos();
        let point = [cx * sy, cx * cy, sx * st, sx * ct];
        SurfaceJet {
            point,
            du: [-sx * sy, -sx * cy, cx * st, cx * ct],
            dv: [cx * cy, -cx * sy, 0.0, 0.0],
            duu: linalg::scale(-1.0, &point),
            duv: [-sx * cy, sx * sy, 0.0, 0.0],
            dvv: [-cx * sy, -cx * cy, 0.0, 0.0],
        }
    }

    /// `−(cos x sin(y+θ) E₁ + cos x cos(y+θ) E₂ − sin x V)`: any positive
    /// weight on `V` selects the same side of the tangent plane.
    fn normal_hint(&self, x: f64, y: f64) -> Option<Vector<4>> {
        let p = self.point(x, y);
        let (sx, cx) = x.sin_cos();
        let (s, c) = (y + self.theta).sin_cos();
        let e1 = e1_field(&p);
        let e2 = e2_field(&p);
        let v = v_field(&p);
        Some(core::array::from_fn(|k| {
            -(cx * s * e1[k] + cx * c * e2[k] - sx * v[k])
        }))
    }
}

/// The affine plane `a x + b y + c z = d` of a three-dimensional chart,
/// parametrized by a Euclidean orthonormal frame over `[−R, R]²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffinePlane {
    normal: Vector<3>,
    origin: Vector<3>,
    e1: Vector<3>,
    e2: Vector<3>,
    half_width: f64,
    family: SurfaceFamily,
}

impl AffinePlane {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let n = [a, b, c];
        let len = linalg::norm(&n);
        if !(len > 1e-12) {
            return Err(GeomError::DegeneratePlane(len));
        }
        let nh = linalg::scale(1.0 / len, &n);
        let z = [0.0, 0.0, 1.0];
        let mut e1 = linalg::cross3(&nh, &z);
        if linalg::norm(&e1) < 1e-8 {
            e1 = [1.0, 0.0, 0.0];
        }
        let e1 = linalg::scale(1.0 / linalg::norm(&e1), &e1);
        let e2 = linalg::cross3(&nh, &e1);
        let family = if c == 0.0 {
            SurfaceFamily::VerticalPlane
        } else {
            SurfaceFamily::AffinePlane
        };
        Ok(Self {
            normal: n,
            origin: linalg::scale(d / (len * len), &n),
            e1,
            e2,
            half_width: 1.0,
            family,
        })
    }

    /// The vertical plane over the base line through `offset · (−sin φ, cos φ)`
    /// with direction `(cos φ, sin φ)`.
    pub fn vertical(dir: f64, offset: f64) -> Self {
        let (s, c) = dir.sin_cos();
        Self::new(-s, c, 0.0, offset).expect("unit normal")
    }

    pub fn with_half_width(mut self, r: f64) -> Self {
        self.half_width = r;
        self
    }

    pub fn normal(&self) -> Vector<3> {
        self.normal
    }
}

impl ParametricSurface<3> for AffinePlane {
    fn domain(&self) -> Domain {
        let r = self.half_width;
        Domain::new((-r, r), (-r, r))
    }

    fn family(&self) -> SurfaceFamily {
        self.family
    }

    fn point(&self, u: f64, v: f64) -> Vector<3> {
        core::array::from_fn(|k| self.origin[k] + u * self.e1[k] + v * self.e2[k])
    }

    fn jet(&self, u: f64, v: f64) -> SurfaceJet<3> {
        SurfaceJet {
            point: self.point(u, v),
            du: self.e1,
            dv: self.e2,
            duu: [0.0; 3],
            duv: [0.0; 3],
            dvv: [0.0; 3],
        }
    }

    fn normal_hint(&self, _u: f64, _v: f64) -> Option<Vector<3>> {
        Some(self.normal)
    }
}

/// The graph `z = a (x² + y²)` over `[−R, R]²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergParaboloid {
    pub a: f64,
    pub half_width: f64,
}

impl ParametricSurface<3> for HeisenbergParaboloid {
    fn domain(&self) -> Domain {
        let r = self.half_width;
        Domain::new((-r, r), (-r, r))
    }

    fn point(&self, u: f64, v: f64) -> Vector<3> {
        [u, v, self.a * (u * u + v * v)]
    }

    fn jet(&self, u: f64, v: f64) -> SurfaceJet<3> {
        let a2 = 2.0 * self.a;
        SurfaceJet {
            point: self.point(u, v),
            du: [1.0, 0.0, a2 * u],
            dv: [0.0, 1.0, a2 * v],
            duu: [0.0, 0.0, a2],
            duv: [0.0; 3],
            dvv: [0.0, 0.0, a2],
        }
    }

    fn normal_hint(&self, _u: f64, _v: f64) -> Option<Vector<3>> {
        Some([0.0, 0.0, self.a.signum()])
    }
}

/// Geodesic sphere of radius `ρ` about `(s₀, φ₀, t₀)` in `S²(r) × ℝ`,
/// parametrized by latitude `β` and longitude `γ` of the initial direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationalSphere {
    base_radius: f64,
    center: Vector<3>,
    rho: f64,
    c3: Vector<3>,
    es: Vector<3>,
    ephi: Vector<3>,
}

impl RotationalSphere {
    pub fn new(base_radius: f64, center: Vector<3>, rho: f64) -> Result<Self> {
        if !(base_radius > 0.0) || !(rho > 0.0) || rho >= PI * base_radius / 2.0 {
            return Err(GeomError::InvalidParameter(
                "rotational sphere radius out of range",
            ));
        }
        let polar = center[0] / base_radius;
        if !(polar > rho / base_radius && polar < PI - rho / base_radius) {
            return Err(GeomError::InvalidParameter(
                "rotational sphere must avoid the chart poles",
            ));
        }
        let (sp, cp) = polar.sin_cos();
        let (sf, cf) = center[1].sin_cos();
        Ok(Self {
            base_radius,
            center,
            rho,
            c3: [sp * cf, sp * sf, cp],
            es: [cp * cf, cp * sf, -sp],
            ephi: [-sf, cf, 0.0],
        })
    }

    pub fn center(&self) -> Vector<3> {
        self.center
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Chart point reached along the unit direction `w = (w_s, w_φ, w_t)`,
    /// expressed in an orthonormal frame at the centre.
    pub fn map_direction(&self, w: &Vector<3>) -> Vector<3> {
        let r = self.base_radius;
        let horiz = (w[0] * w[0] + w[1] * w[1]).sqrt();
        let d = self.rho * horiz / r;
        let (sd, cd) = d.sin_cos();
        let (cg, sg) = if horiz > 0.0 {
            (w[0] / horiz, w[1] / horiz)
        } else {
            (1.0, 0.0)
        };
        let q: Vector<3> = core::array::from_fn(|k| {
            r * (cd * self.c3[k] + sd * (cg * self.es[k] + sg * self.ephi[k]))
        });
        let mut chart = Surface2D::sphere_from_cartesian(r, &q);
        chart[1] += TAU * ((self.center[1] - chart[1]) / TAU).round();
        [chart[0], chart[1], self.center[2] + self.rho * w[2]]
    }
}

impl ParametricSurface<3> for RotationalSphere {
    fn domain(&self) -> Domain {
        Domain::new((-FRAC_PI_2, FRAC_PI_2), (0.0, TAU))
    }

    fn family(&self) -> SurfaceFamily {
        SurfaceFamily::RotationalSphere
    }

    fn point(&self, beta: f64, gamma: f64) -> Vector<3> {
        let (sb, cb) = beta.sin_cos();
        let (sg, cg) = gamma.sin_cos();
        self.map_direction(&[cb * cg, cb * sg, sb])
    }

    fn normal_hint(&self, beta: f64, gamma: f64) -> Option<Vector<3>> {
        Some(linalg::sub(&self.center, &self.point(beta, gamma)))
    }
}

/// A surface given by a closure, with finite-difference jets.
pub struct FnSurface<F> {
    domain: Domain,
    map: F,
}

impl<F> FnSurface<F> {
    pub fn new(domain: Domain, map: F) -> Self {
        Self { domain, map }
    }
}

impl<const N: usize, F: Fn(f64, f64) -> Vector<N>> ParametricSurface<N> for FnSurface<F> {
    fn domain(&self) -> Domain {
        self.domain
    }

    fn point(&self, u: f64, v: f64) -> Vector<N> {
        (self.map)(u, v)
    }
}

/// `ψ(v, u)`: the same surface with its parameters exchanged.
pub struct Swapped<P>(pub P);

impl<const N: usize, P: ParametricSurface<N>> ParametricSurface<N> for Swapped<P> {
    fn domain(&self) -> Domain {
        let d = self.0.domain();
        Domain::new(d.v, d.u)
    }

    fn family(&self) -> SurfaceFamily {
        self.0.family()
    }

    fn point(&self, u: f64, v: f64) -> Vector<N> {
        self.0.point(v, u)
    }

    fn jet(&self, u: f64, v: f64) -> SurfaceJet<N> {
        let j = self.0.jet(v, u);
        SurfaceJet {
            point: j.point,
            du: j.dv,
            dv: j.du,
            duu: j.dvv,
            duv: j.duv,
            dvv: j.duu,
        }
    }

    fn normal_hint(&self, u: f64, v: f64) -> Option<Vector<N>> {
        self.0.normal_hint(v, u)
    }
}

/// The same surface with the opposite normal hint.
pub struct Flipped<P>(pub P);

impl<const N: usize, P: ParametricSurface<N>> ParametricSurface<N> for Flipped<P> {
    fn domain(&self) -> Domain {
        self.0.domain()
    }

    fn family(&self) -> SurfaceFamily {
        self.0.family()
    }

    fn point(&self, u: f64, v: f64) -> Vector<N> {
        self.0.point(u, v)
    }

    fn jet(&self, u: f64, v: f64) -> SurfaceJet<N> {
        self.0.jet(u, v)
    }

    fn normal_hint(&self, u: f64, v: f64) -> Option<Vector<N>> {
        self.0.normal_hint(u, v).map(|h| linalg::scale(-1.0, &h))
    }
}
