//! Chart-level Riemannian primitives: metric, Levi-Civita connection,
//! covariant derivatives, sectional curvature and geodesics.
//!
//! Every space is a coordinate chart of dimension `N` carrying a metric
//! `g_ij(p)`. A space may also be a hypersurface of its chart (the Berger
//! sphere sits in ℝ⁴ as `|p| = 1`); such spaces report a
//! [`RiemannianChart::constraint_normal`] and the kernel then projects
//! connections tangentially and adds the Gauss-equation term to curvatures.

mod geodesic;

use crate::error::{GeomError, Result};
use crate::linalg::{self, Matrix, Vector};
use num_traits::Float;

pub use geodesic::{geodesic_integrate, Geodesic};

/// Central-difference step for metric derivatives, relative to coordinate scale.
pub const FD_STEP: f64 = 1e-5;
/// Step used when differentiating Christoffel symbols for curvature.
pub const CURVATURE_FD_STEP: f64 = 1e-4;
/// Gram determinant below which a 2-plane is rejected.
pub const DEGENERATE_PLANE: f64 = 1e-10;
/// Tolerance on `⟨v, p⟩` for tangency to a constraint sphere.
pub const TANGENCY_TOL: f64 = 1e-10;

pub trait RiemannianChart<const N: usize> {
    /// Metric components at `p`. Must be defined in a neighbourhood of every
    /// valid point, including off-constraint probes used by finite differences.
    fn metric_matrix(&self, p: &Vector<N>) -> Matrix<N>;

    fn validate_point(&self, _p: &Vector<N>) -> Result<()> {
        Ok(())
    }

    fn analytic_christoffel(&self, _p: &Vector<N>) -> Option<Christoffel<N>> {
        None
    }

    /// A field that is metric-normal to the constraint level sets, for spaces
    /// living on a hypersurface of their chart.
    fn constraint_normal(&self, _p: &Vector<N>) -> Option<Vector<N>> {
        None
    }

    /// Pulls a point back onto the constraint surface.
    fn project_point(&self, p: &Vector<N>) -> Vector<N> {
        *p
    }

    /// `+1` when the chart orientation (with the outward constraint normal
    /// first, if any) is the space's orientation, `-1` otherwise.
    fn orientation(&self) -> f64 {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ChristoffelMode {
    Analytic,
    FiniteDifference,
}

/// Symmetric positive-definite metric at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricAtPoint<const N: usize> {
    pub g: Matrix<N>,
}

impl<const N: usize> MetricAtPoint<N> {
    pub fn new(g: Matrix<N>) -> Result<Self> {
        let asym = linalg::symmetry_residual(&g);
        if asym >= 1e-14 * (1.0 + linalg::max_abs(&g.map(|r| linalg::max_abs(&r)))) {
            return Err(GeomError::MetricNotSymmetric(asym));
        }
        linalg::cholesky(&g).ok_or(GeomError::MetricNotPositive)?;
        Ok(Self { g })
    }

    pub fn apply(&self, x: &Vector<N>, y: &Vector<N>) -> f64 {
        linalg::bilinear(&self.g, x, y)
    }

    pub fn norm(&self, x: &Vector<N>) -> f64 {
        self.apply(x, x).max(0.0).sqrt()
    }

    pub fn lower(&self, x: &Vector<N>) -> Vector<N> {
        linalg::mat_vec(&self.g, x)
    }

    pub fn inverse(&self) -> Matrix<N> {
        linalg::inverse(&self.g).expect("positive definite metric is invertible")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::symmetric_eigenvalues(&self.g)[0]
    }
}

/// Christoffel symbols `gamma[k][i][j] = Γ^k_{ij}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel<const N: usize> {
    pub gamma: [Matrix<N>; N],
    pub mode: ChristoffelMode,
}

impl<const N: usize> Christoffel<N> {
    /// `Γ^k_{ij} x^i y^j`
    pub fn contract(&self, x: &Vector<N>, y: &Vector<N>) -> Vector<N> {
        core::array::from_fn(|k| linalg::bilinear(&self.gamma[k], x, y))
    }

    pub fn symmetry_residual(&self) -> f64 {
        self.gamma
            .iter()
            .map(linalg::symmetry_residual)
            .fold(0.0, f64::max)
    }

    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        let mut d = 0.0f64;
        for k in 0..N {
            for i in 0..N {
                for j in 0..N {
                    d = d.max((self.gamma[k][i][j] - other.gamma[k][i][j]).abs());
                }
            }
        }
        d
    }

    /// Levi-Civita symbols from the metric, its inverse and its partials
    /// `dg[m] = ∂_m g`.
    pub fn from_metric_derivatives(
        g_inv: &Matrix<N>,
        dg: &[Matrix<N>; N],
        mode: ChristoffelMode,
    ) -> Self {
        let mut gamma = [[[0.0; N]; N]; N];
        for (k, gk) in gamma.iter_mut().enumerate() {
            for i in 0..N {
                for j in i..N {
                    let mut s = 0.0;
                    for l in 0..N {
                        s += g_inv[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
                    }
                    gk[i][j] = 0.5 * s;
                    gk[j][i] = 0.5 * s;
                }
            }
        }
        Self { gamma, mode }
    }
}

/// Value and first derivatives of a vector field at a point:
/// `jacobian[k][i] = ∂_i Y^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorJet<const N: usize> {
    pub value: Vector<N>,
    pub jacobian: Matrix<N>,
}

impl<const N: usize> VectorJet<N> {
    pub fn constant(value: Vector<N>) -> Self {
        Self {
            value,
            jacobian: [[0.0; N]; N],
        }
    }

    /// Jet of `field` at `p` by central differences.
    pub fn from_field(p: &Vector<N>, field: impl Fn(&Vector<N>) -> Vector<N>) -> Self {
        let mut jacobian = [[0.0; N]; N];
        for i in 0..N {
            let h = coordinate_step(p, i, FD_STEP);
            let mut plus = *p;
            let mut minus = *p;
            plus[i] += h;
            minus[i] -= h;
            let fp = field(&plus);
            let fm = field(&minus);
            for k in 0..N {
                jacobian[k][i] = (fp[k] - fm[k]) / (2.0 * h);
            }
        }
        Self {
            value: field(p),
            jacobian,
        }
    }

    /// Directional derivative `X(Y)`.
    pub fn directional(&self, x: &Vector<N>) -> Vector<N> {
        linalg::mat_vec(&self.jacobian, x)
    }
}

pub(crate) fn coordinate_step<const N: usize>(p: &Vector<N>, i: usize, rel: f64) -> f64 {
    rel * p[i].abs().max(1.0)
}

pub fn metric_at<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
) -> Result<MetricAtPoint<N>> {
    space.validate_point(p)?;
    MetricAtPoint::new(space.metric_matrix(p))
}

pub fn check_tangent<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
    v: &Vector<N>,
) -> Result<()> {
    if let Some(nu) = space.constraint_normal(p) {
        let r = linalg::dot(&nu, v) / linalg::norm(&nu);
        if r.abs() > TANGENCY_TOL * linalg::norm(v).max(1.0) {
            return Err(GeomError::NotTangent(r));
        }
    }
    Ok(())
}

/// `⟨X, Y⟩_p`.
pub fn metric_apply<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
    x: &Vector<N>,
    y: &Vector<N>,
) -> Result<f64> {
    let g = metric_at(space, p)?;
    check_tangent(space, p, x)?;
    check_tangent(space, p, y)?;
    Ok(g.apply(x, y))
}

pub fn christoffel_fd<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
    rel_step: f64,
) -> Result<Christoffel<N>> {
    let g = MetricAtPoint::new(space.metric_matrix(p))?;
    let mut dg = [[[0.0; N]; N]; N];
    for (m, dgm) in dg.iter_mut().enumerate() {
        let h = coordinate_step(p, m, rel_step);
        let mut plus = *p;
        let mut minus = *p;
        plus[m] += h;
        minus[m] -= h;
        let gp = space.metric_matrix(&plus);
        let gm = space.metric_matrix(&minus);
        for i in 0..N {
            for j in 0..N {
                dgm[i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
            }
        }
    }
    Ok(Christoffel::from_metric_derivatives(
        &g.inverse(),
        &dg,
        ChristoffelMode::FiniteDifference,
    ))
}

/// Christoffel symbols at `p`: the space's analytic table when it has one,
/// central differences of the metric otherwise.
pub fn christoffel<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
) -> Result<Christoffel<N>> {
    space.validate_point(p)?;
    match space.analytic_christoffel(p) {
        Some(c) => Ok(c),
        None => christoffel_fd(space, p, FD_STEP),
    }
}

fn christoffel_unchecked<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
) -> Result<Christoffel<N>> {
    match space.analytic_christoffel(p) {
        Some(c) => Ok(c),
        None => christoffel_fd(space, p, FD_STEP),
    }
}

/// Metric-unit normal to the constraint surface through `p`, if any.
pub fn unit_constraint_normal<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
) -> Option<Vector<N>> {
    let nu = space.constraint_normal(p)?;
    let g = space.metric_matrix(p);
    let len = linalg::bilinear(&g, &nu, &nu).sqrt();
    Some(linalg::scale(1.0 / len, &nu))
}

/// Metric-orthogonal projection onto the tangent space of the constraint
/// surface; identity for unconstrained charts.
pub fn tangent_projection<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
    v: &Vector<N>,
) -> Vector<N> {
    match unit_constraint_normal(space, p) {
        Some(n) => {
            let g = space.metric_matrix(p);
            linalg::axpy(v, -linalg::bilinear(&g, &n, v), &n)
        }
        None => *v,
    }
}

/// `∇_X Y` at `p`, where `field` carries `Y` and its first derivatives.
pub fn covariant_derivative<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
    x: &Vector<N>,
    field: &VectorJet<N>,
) -> Result<Vector<N>> {
    let gamma = christoffel(space, p)?;
    let ambient = linalg::add(&field.directional(x), &gamma.contract(x, &field.value));
    Ok(tangent_projection(space, p, &ambient))
}

/// Scalar second fundamental form of the constraint surface,
/// `h(X, Y) = -⟨∇_X n, Y⟩`; zero for unconstrained charts.
pub fn constraint_second_form<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
    x: &Vector<N>,
    y: &Vector<N>,
) -> Result<f64> {
    if space.constraint_normal(p).is_none() {
        return Ok(0.0);
    }
    let jet = VectorJet::from_field(p, |q| {
        unit_constraint_normal(space, q).expect("constraint normal defined near p")
    });
    let gamma = christoffel_unchecked(space, p)?;
    let dn = linalg::add(&jet.directional(x), &gamma.contract(x, &jet.value));
    Ok(-linalg::bilinear(&space.metric_matrix(p), &dn, y))
}

/// Vector `W` with `⟨W, Z⟩ = vol(v_1, …, v_k, Z)` for every tangent `Z`:
/// the cross product `X ∧ Y` in dimension three, the rotation `J X` on a
/// surface. For constrained spaces the outward unit constraint normal is
/// prepended, so `vectors.len()` is `N - 1` or `N - 2`.
pub fn hodge_cross<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
    vectors: &[Vector<N>],
) -> Result<Vector<N>> {
    let g = metric_at(space, p)?;
    let mut all: [Vector<N>; N] = [[0.0; N]; N];
    let mut count = 0;
    if let Some(n) = unit_constraint_normal(space, p) {
        all[0] = n;
        count = 1;
    }
    if count + vectors.len() + 1 != N {
        return Err(GeomError::InvalidParameter(
            "hodge_cross arity does not match dimension",
        ));
    }
    for v in vectors {
        all[count] = *v;
        count += 1;
    }
    let co = linalg::cofactor_covector(&all[..N - 1]);
    let vol = space.orientation() * linalg::determinant(&g.g).sqrt();
    let w = linalg::mat_vec(&g.inverse(), &co);
    Ok(linalg::scale(vol, &w))
}

fn christoffel_derivatives<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
) -> Result<[[Matrix<N>; N]; N]> {
    // d[m][k][i][j] = ∂_m Γ^k_{ij}
    let mut d = [[[[0.0; N]; N]; N]; N];
    for (m, dm) in d.iter_mut().enumerate() {
        let h = coordinate_step(p, m, CURVATURE_FD_STEP);
        let mut plus = *p;
        let mut minus = *p;
        plus[m] += h;
        minus[m] -= h;
        let gp = christoffel_unchecked(space, &plus)?;
        let gm = christoffel_unchecked(space, &minus)?;
        for k in 0..N {
            for i in 0..N {
                for j in 0..N {
                    dm[k][i][j] = (gp.gamma[k][i][j] - gm.gamma[k][i][j]) / (2.0 * h);
                }
            }
        }
    }
    Ok(d)
}

/// `⟨R(X,Y)Y, X⟩` of the chart metric (no constraint correction).
fn ambient_curvature_form<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
    x: &Vector<N>,
    y: &Vector<N>,
) -> Result<f64> {
    let gamma = christoffel_unchecked(space, p)?.gamma;
    let dgamma = christoffel_derivatives(space, p)?;
    let gx = linalg::mat_vec(&space.metric_matrix(p), x);
    let mut total = 0.0;
    for l in 0..N {
        if gx[l] == 0.0 {
            continue;
        }
        let mut rl = 0.0;
        for i in 0..N {
            for j in 0..N {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..N {
                    let mut r = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                    for m in 0..N {
                        r += gamma[l][i][m] * gamma[m][j][k] - gamma[l][j][m] * gamma[m][i][k];
                    }
                    rl += r * xy * y[k];
                }
            }
        }
        total += rl * gx[l];
    }
    Ok(total)
}

/// Sectional curvature of `span{X, Y}` at `p`.
pub fn sectional_curvature<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
    x: &Vector<N>,
    y: &Vector<N>,
) -> Result<f64> {
    let g = metric_at(space, p)?;
    check_tangent(space, p, x)?;
    check_tangent(space, p, y)?;
    let xx = g.apply(x, x);
    let yy = g.apply(y, y);
    let xy = g.apply(x, y);
    let gram = xx * yy - xy * xy;
    if gram < DEGENERATE_PLANE {
        return Err(GeomError::DegeneratePlane(gram));
    }
    let mut num = ambient_curvature_form(space, p, x, y)?;
    if space.constraint_normal(p).is_some() {
        let hxx = constraint_second_form(space, p, x, x)?;
        let hyy = constraint_second_form(space, p, y, y)?;
        let hxy = constraint_second_form(space, p, x, y)?;
        num += hxx * hyy - hxy * hxy;
    }
    Ok(num / gram)
}
