//! Extrinsic geometry of parametrized surfaces: fundamental forms, unit
//! normal, principal curvatures, the angle function and convexity tests.

mod families;

pub use families::{
    AffinePlane, Equator, Flipped, FnSurface, HeisenbergParaboloid, RotationalSphere, Swapped,
};

use crate::error::{GeomError, Result};
use crate::kernel::{self, MetricAtPoint};
use crate::linalg::{self, Vector};
use crate::spaces::KillingSubmersion;
use alloc::vec::Vec;
use num_traits::Float;

/// Default finite-difference step for surface jets.
pub const JET_STEP: f64 = 1e-4;
/// `|ψ_u ∧ ψ_v|` below which a sample is a degenerate immersion point.
pub const DEGENERATE_IMMERSION: f64 = 1e-9;
/// Slack for convexity inequalities.
pub const CONVEXITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SurfaceFamily {
    Equator,
    AffinePlane,
    VerticalPlane,
    RotationalSphere,
    Custom,
}

/// Rectangular parameter domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl Domain {
    pub fn new(u: (f64, f64), v: (f64, f64)) -> Self {
        Self { u, v }
    }

    /// `nu × nv` samples including both ends of each interval.
    pub fn grid(&self, nu: usize, nv: usize) -> Vec<(f64, f64)> {
        let at = |(a, b): (f64, f64), i: usize, n: usize| {
            if n < 2 {
                0.5 * (a + b)
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(nu * nv);
        for i in 0..nu {
            for j in 0..nv {
                out.push((at(self.u, i, nu), at(self.v, j, nv)));
            }
        }
        out
    }
}

/// Position and derivatives up to order two of `ψ` at a parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet<const N: usize> {
    pub point: Vector<N>,
    pub du: Vector<N>,
    pub dv: Vector<N>,
    pub duu: Vector<N>,
    pub duv: Vector<N>,
    pub dvv: Vector<N>,
}

pub trait ParametricSurface<const N: usize> {
    fn domain(&self) -> Domain;

    fn family(&self) -> SurfaceFamily {
        SurfaceFamily::Custom
    }

    fn point(&self, u: f64, v: f64) -> Vector<N>;

    fn jet(&self, u: f64, v: f64) -> SurfaceJet<N> {
        fd_jet(|a, b| self.point(a, b), u, v, JET_STEP)
    }

    /// A vector on the side the unit normal should point to.
    fn normal_hint(&self, _u: f64, _v: f64) -> Option<Vector<N>> {
        None
    }
}

fn richardson<const N: usize>(coarse: Vector<N>, fine: Vector<N>) -> Vector<N> {
    core::array::from_fn(|k| (4.0 * fine[k] - coarse[k]) / 3.0)
}

fn central_jet<const N: usize>(
    f: &impl Fn(f64, f64) -> Vector<N>,
    u: f64,
    v: f64,
    h: f64,
) -> [Vector<N>; 5] {
    let p = f(u, v);
    let (up, um, vp, vm) = (f(u + h, v), f(u - h, v), f(u, v + h), f(u, v - h));
    let (pp, pm, mp, mm) = (
        f(u + h, v + h),
        f(u + h, v - h),
        f(u - h, v + h),
        f(u - h, v - h),
    );
    let h2 = h * h;
    [
        core::array::from_fn(|k| (up[k] - um[k]) / (2.0 * h)),
        core::array::from_fn(|k| (vp[k] - vm[k]) / (2.0 * h)),
        core::array::from_fn(|k| (up[k] - 2.0 * p[k] + um[k]) / h2),
        core::array::from_fn(|k| (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h2)),
        core::array::from_fn(|k| (vp[k] - 2.0 * p[k] + vm[k]) / h2),
    ]
}

/// Second-order jet of `f` by central differences at steps `h` and `h/2`
/// combined by Richardson extrapolation.
pub fn fd_jet<const N: usize>(
    f: impl Fn(f64, f64) -> Vector<N>,
    u: f64,
    v: f64,
    h: f64,
) -> SurfaceJet<N> {
    let c = central_jet(&f, u, v, h);
    let d = central_jet(&f, u, v, 0.5 * h);
    SurfaceJet {
        point: f(u, v),
        du: richardson(c[0], d[0]),
        dv: richardson(c[1], d[1]),
        duu: richardson(c[2], d[2]),
        duv: richardson(c[3], d[3]),
        dvv: richardson(c[4], d[4]),
    }
}

/// Coefficients of the first and second fundamental forms.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FundamentalForms {
    pub e_1: f64,
    pub f_1: f64,
    pub g_1: f64,
    pub e_2: f64,
    pub f_2: f64,
    pub g_2: f64,
}

impl FundamentalForms {
    pub fn first_determinant(&self) -> f64 {
        self.e_1 * self.g_1 - self.f_1 * self.f_1
    }

    pub fn second_determinant(&self) -> f64 {
        self.e_2 * self.g_2 - self.f_2 * self.f_2
    }

    /// Eigenvalues of `I⁻¹ II`, ascending, through the Cholesky factor of `I`.
    pub fn principal_curvatures(&self) -> (f64, f64) {
        let l11 = self.e_1.sqrt();
        let l21 = self.f_1 / l11;
        let l22 = (self.g_1 - l21 * l21).sqrt();
        // M = L⁻¹ II L⁻ᵀ
        let a = self.e_2 / (l11 * l11);
        let b = (self.f_2 - l21 * a * l11) / (l11 * l22);
        let c = (self.g_2 - 2.0 * l21 * b * l22 - l21 * l21 * a) / (l22 * l22);
        let mean = 0.5 * (a + c);
        let disc = (0.25 * (a - c) * (a - c) + b * b).sqrt();
        (mean - disc, mean + disc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeReport<const N: usize> {
    pub sample: (f64, f64),
    pub forms: FundamentalForms,
    pub normal: Vector<N>,
    pub k1: f64,
    pub k2: f64,
    pub h: f64,
    pub ke: f64,
    pub nu: f64,
}

fn immersion_metric<const N: usize, S: KillingSubmersion<N> + ?Sized>(
    space: &S,
    jet: &SurfaceJet<N>,
) -> Result<MetricAtPoint<N>> {
    let g = kernel::metric_at(space, &jet.point)?;
    kernel::check_tangent(space, &jet.point, &jet.du)?;
    kernel::check_tangent(space, &jet.point, &jet.dv)?;
    let area2 =
        g.apply(&jet.du, &jet.du) * g.apply(&jet.dv, &jet.dv) - g.apply(&jet.du, &jet.dv).powi(2);
    if !(area2 > DEGENERATE_IMMERSION * DEGENERATE_IMMERSION) {
        return Err(GeomError::DegenerateImmersion(area2.max(0.0).sqrt()));
    }
    Ok(g)
}

/// `(E, F, G)` at a parameter.
pub fn first_form<const N: usize, S, P>(
    surface: &P,
    space: &S,
    u: f64,
    v: f64,
) -> Result<(f64, f64, f64)>
where
    S: KillingSubmersion<N> + ?Sized,
    P: ParametricSurface<N> + ?Sized,
{
    let jet = surface.jet(u, v);
    let g = immersion_metric(space, &jet)?;
    Ok((
        g.apply(&jet.du, &jet.du),
        g.apply(&jet.du, &jet.dv),
        g.apply(&jet.dv, &jet.dv),
    ))
}

fn normal_from_jet<const N: usize, S, P>(
    surface: &P,
    space: &S,
    g: &MetricAtPoint<N>,
    jet: &SurfaceJet<N>,
    u: f64,
    v: f64,
) -> Result<Vector<N>>
where
    S: KillingSubmersion<N> + ?Sized,
    P: ParametricSurface<N> + ?Sized,
{
    let w = kernel::hodge_cross(space, &jet.point, &[jet.du, jet.dv])?;
    let len = g.norm(&w);
    if !(len > DEGENERATE_IMMERSION) {
        return Err(GeomError::DegenerateImmersion(len));
    }
    let mut n = linalg::scale(1.0 / len, &w);
    if let Some(hint) = surface.normal_hint(u, v) {
        if g.apply(&n, &hint) < 0.0 {
            n = linalg::scale(-1.0, &n);
        }
    }
    Ok(n)
}

/// Unit normal, oriented by the surface's hint when it has one and by the
/// ambient orientation otherwise.
pub fn unit_normal<const N: usize, S, P>(
    surface: &P,
    space: &S,
    u: f64,
    v: f64,
) -> Result<Vector<N>>
where
    S: KillingSubmersion<N> + ?Sized,
    P: ParametricSurface<N> + ?Sized,
{
    let jet = surface.jet(u, v);
    let g = immersion_metric(space, &jet)?;
    normal_from_jet(surface, space, &g, &jet, u, v)
}

/// Fundamental forms, principal curvatures, mean and extrinsic curvature and
/// angle function at a parameter, all from ambient covariant derivatives.
pub fn shape_report<const N: usize, S, P>(
    surface: &P,
    space: &S,
    u: f64,
    v: f64,
) -> Result<ShapeReport<N>>
where
    S: KillingSubmersion<N> + ?Sized,
    P: ParametricSurface<N> + ?Sized,
{
    let jet = surface.jet(u, v);
    let g = immersion_metric(space, &jet)?;
    let n = normal_from_jet(surface, space, &g, &jet, u, v)?;
    let gamma = kernel::christoffel(space, &jet.point)?;
    let second = |a: &Vector<N>, b: &Vector<N>, ab: &Vector<N>| {
        g.apply(&linalg::add(ab, &gamma.contract(a, b)), &n)
    };
    let forms = FundamentalForms {
        e_1: g.apply(&jet.du, &jet.du),
        f_1: g.apply(&jet.du, &jet.dv),
        g_1: g.apply(&jet.dv, &jet.dv),
        e_2: second(&jet.du, &jet.du, &jet.duu),
        f_2: 0.5 * (second(&jet.du, &jet.dv, &jet.duv) + second(&jet.dv, &jet.du, &jet.duv)),
        g_2: second(&jet.dv, &jet.dv, &jet.dvv),
    };
    let (k1, k2) = forms.principal_curvatures();
    let nu = g.apply(&n, &space.xi(&jet.point));
    Ok(ShapeReport {
        sample: (u, v),
        forms,
        normal: n,
        k1,
        k2,
        h: 0.5 * (k1 + k2),
        ke: k1 * k2,
        nu,
    })
}

/// `ν = ⟨N, ξ⟩` and the tangent part `T = ξ − νN`.
pub fn angle_function<const N: usize, S, P>(
    surface: &P,
    space: &S,
    u: f64,
    v: f64,
) -> Result<(f64, Vector<N>)>
where
    S: KillingSubmersion<N> + ?Sized,
    P: ParametricSurface<N> + ?Sized,
{
    let jet = surface.jet(u, v);
    let g = immersion_metric(space, &jet)?;
    let n = normal_from_jet(surface, space, &g, &jet, u, v)?;
    let xi = space.xi(&jet.point);
    let nu = g.apply(&n, &xi);
    Ok((nu, linalg::axpy(&xi, -nu, &n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ConvexityCriterion {
    /// `k_i > 0` for some choice of normal.
    Positive,
    /// `k_i > |τ|` for some choice of normal.
    KillingBound,
    /// `|k_i| ≥ |κ − 4τ²| / (4|τ|)` in a Berger sphere.
    BergerBound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexitySample {
    pub u: f64,
    pub v: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityMap {
    pub criterion: ConvexityCriterion,
    pub samples: Vec<ConvexitySample>,
    /// Parameters skipped because the immersion degenerates there.
    pub skipped: usize,
}

impl ConvexityMap {
    pub fn failures(&self) -> impl Iterator<Item = &ConvexitySample> {
        self.samples.iter().filter(|s| !s.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.samples.iter().all(|s| s.pass)
    }

    pub fn min_margin(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Margin of the criterion at one shape report; positive means satisfied.
pub fn convexity_margin(
    criterion: ConvexityCriterion,
    k1: f64,
    k2: f64,
    tau: f64,
    kappa: f64,
) -> f64 {
    let lo = k1.min(k2);
    let hi = k1.max(k2);
    let convex = lo.max(-hi);
    match criterion {
        ConvexityCriterion::Positive => convex,
        ConvexityCriterion::KillingBound => convex - tau.abs(),
        ConvexityCriterion::BergerBound => {
            lo.abs().min(hi.abs()) - (kappa - 4.0 * tau * tau).abs() / (4.0 * tau.abs())
        }
    }
}

/// Evaluates `criterion` at every sample of an `nu × nv` grid.
pub fn convexity_predicate<const N: usize, S, P>(
    surface: &P,
    space: &S,
    criterion: ConvexityCriterion,
    nu: usize,
    nv: usize,
) -> Result<ConvexityMap>
where
    S: KillingSubmersion<N> + ?Sized,
    P: ParametricSurface<N> + ?Sized,
{
    let berger = space.berger_parameters();
    if criterion == ConvexityCriterion::BergerBound && berger.is_none() {
        return Err(GeomError::IncompatibleCriterion);
    }
    let tau = space.bundle_curvature();
    let kappa = berger.map_or(0.0, |b| b.0);
    let mut samples = Vec::new();
    let mut skipped = 0;
    for (u, v) in surface.domain().grid(nu, nv) {
        let r = match shape_report(surface, space, u, v) {
            Ok(r) => r,
            Err(GeomError::DegenerateImmersion(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let margin = convexity_margin(criterion, r.k1, r.k2, tau, kappa);
        let pass = match criterion {
            ConvexityCriterion::BergerBound => margin >= -CONVEXITY_SLACK,
            _ => margin > CONVEXITY_SLACK,
        };
        samples.push(ConvexitySample { u, v, margin, pass });
    }
    Ok(ConvexityMap {
        criterion,
        samples,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_curvatures_of_diagonal_forms() {
        let f = FundamentalForms {
            e_1: 4.0,
            f_1: 0.0,
            g_1: 1.0,
            e_2: 8.0,
            f_2: 0.0,
            g_2: -3.0,
        };
        let (a, b) = f.principal_curvatures();
        assert!((a + 3.0).abs() < 1e-14 && (b - 2.0).abs() < 1e-14);
    }

    #[test]
    fn principal_curvatures_match_characteristic_polynomial() {
        let f = FundamentalForms {
            e_1: 2.0,
            f_1: 0.7,
            g_1: 1.5,
            e_2: 0.3,
            f_2: -1.1,
            g_2: 0.9,
        };
        let (a, b) = f.principal_curvatures();
        let det = f.second_determinant() / f.first_determinant();
        let tr = (f.e_2 * f.g_1 - 2.0 * f.f_2 * f.f_1 + f.g_2 * f.e_1) / f.first_determinant();
        assert!((a * b - det).abs() < 1e-12);
        assert!((a + b - tr).abs() < 1e-12);
    }

    #[test]
    fn fd_jet_of_a_cubic_is_exact_to_roundoff() {
        let jet = fd_jet(|u, v| [u * u * v, v * v * v, u], 0.3, -0.8, JET_STEP);
        assert!((jet.duv[0] - 0.6).abs() < 1e-6);
        assert!((jet.dvv[1] + 4.8).abs() < 1e-6);
        assert!((jet.du[0] - 2.0 * 0.3 * -0.8).abs() < 1e-9);
    }

    #[test]
    fn grid_includes_endpoints() {
        let g = Domain::new((0.0, 1.0), (2.0, 4.0)).grid(3, 2);
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], (0.0, 2.0));
        assert_eq!(g[5], (1.0, 4.0));
    }

    #[test]
    fn margins_pick_the_convex_side() {
        let m = convexity_margin(ConvexityCriterion::Positive, -2.0, -1.0, 0.0, 0.0);
        assert_eq!(m, 1.0);
        let m = convexity_margin(ConvexityCriterion::Positive, -1.0, 1.0, 0.0, 0.0);
        assert_eq!(m, -1.0);
        let m = convexity_margin(ConvexityCriterion::BergerBound, -1.5, 1.5, 0.5, 4.0);
        assert!(m.abs() < 1e-15);
    }
}

#[cfg(test)]
mod family_tests {
    use super::*;
    use crate::spaces::{BergerSphere, Fiber, Heisenberg, ProductSpace, Surface2D};
    use core::f64::consts::PI;

    #[test]
    fn equator_curvature_at_the_widest_circle() {
        let s = BergerSphere::new(4.0, 0.5).unwrap();
        let r = shape_report(&Equator::new(0.0), &s, 0.0, 0.7).unwrap();
        assert!(r.h.abs() < 1e-7, "{}", r.h);
        assert!((r.ke + 2.25).abs() < 1e-6, "{}", r.ke);
    }

    #[test]
    fn round_equator_is_totally_geodesic() {
        let s = BergerSphere::new(4.0, 1.0).unwrap();
        let r = shape_report(&Equator::new(0.4), &s, 0.9, 2.0).unwrap();
        assert!(r.k1.abs() < 1e-7 && r.k2.abs() < 1e-7);
    }

    #[test]
    fn equator_first_form_matches_closed_form() {
        let (k, t) = (9.0, 0.7);
        let s = BergerSphere::new(k, t).unwrap();
        let x: f64 = 0.4;
        let (e, f, g) = first_form(&Equator::new(0.3), &s, x, 1.1).unwrap();
        let d = k + 4.0 * t * t - (k - 4.0 * t * t) * (2.0 * x).cos();
        let alpha2 = 2.0 * k * t * t / d;
        assert!((e - 4.0 / k).abs() < 1e-10);
        assert!(f.abs() < 1e-10);
        assert!((g - 4.0 * t * t / (k * alpha2) * x.cos().powi(2)).abs() < 1e-8);
    }

    #[test]
    fn equator_pole_is_degenerate() {
        let s = BergerSphere::new(4.0, 0.5).unwrap();
        assert!(matches!(
            shape_report(&Equator::new(0.0), &s, PI / 2.0, 0.3),
            Err(GeomError::DegenerateImmersion(_))
        ));
    }

    #[test]
    fn horizontal_heisenberg_plane_has_vertical_normal() {
        let h = Heisenberg::new(0.5).unwrap();
        let plane = AffinePlane::new(0.0, 0.0, 1.0, 0.0).unwrap();
        let (u, v) = (0.0, 0.0);
        let n = unit_normal(&plane, &h, u, v).unwrap();
        assert!((n[2] - 1.0).abs() < 1e-12 && n[0].abs() < 1e-12 && n[1].abs() < 1e-12);
        let (nu, t) = angle_function(&plane, &h, u, v).unwrap();
        assert!((nu - 1.0).abs() < 1e-12 && linalg::norm(&t) < 1e-12);
    }

    #[test]
    fn vertical_plane_has_zero_angle_function() {
        let h = Heisenberg::new(0.5).unwrap();
        let plane = AffinePlane::vertical(0.0, 0.0);
        for (u, v) in plane.domain().grid(5, 5) {
            let (nu, t) = angle_function(&plane, &h, u, v).unwrap();
            let g = kernel::metric_at(&h, &plane.point(u, v)).unwrap();
            assert!(nu.abs() < 1e-12);
            assert!((g.norm(&t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rotational_sphere_is_strictly_convex() {
        let space = ProductSpace::new(Surface2D::round_sphere(1.0).unwrap(), Fiber::Line).unwrap();
        let s = RotationalSphere::new(1.0, [PI / 2.0, PI, 0.7], 0.3).unwrap();
        let map = convexity_predicate(&s, &space, ConvexityCriterion::Positive, 12, 12).unwrap();
        assert!(map.all_pass(), "min margin {}", map.min_margin());
        assert!(map.min_margin() > 2.0);
    }
}
