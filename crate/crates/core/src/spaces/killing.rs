//! Unit vertical Killing fields, their flows, and recovery of the bundle
//! curvature `τ` from `∇_X ξ = τ X ∧ ξ`.

use super::{BergerSphere, Heisenberg, ProductSpace};
use crate::error::{GeomError, Result};
use crate::kernel::{self, RiemannianChart, VectorJet};
use crate::linalg::{self, Vector};

pub trait KillingSubmersion<const N: usize>: RiemannianChart<N> {
    /// Unit vertical Killing field at `p`.
    fn xi(&self, p: &Vector<N>) -> Vector<N>;

    /// Flow of `ξ` for time `t` (unit speed).
    fn flow(&self, p: &Vector<N>, t: f64) -> Vector<N>;

    /// The declared bundle curvature.
    fn bundle_curvature(&self) -> f64;

    fn xi_jet(&self, p: &Vector<N>) -> VectorJet<N> {
        VectorJet::from_field(p, |q| self.xi(q))
    }

    /// `(κ, τ)` when the space is a Berger sphere.
    fn berger_parameters(&self) -> Option<(f64, f64)> {
        None
    }
}

impl KillingSubmersion<4> for BergerSphere {
    fn xi(&self, p: &Vector<4>) -> Vector<4> {
        BergerSphere::xi(self, p)
    }

    fn flow(&self, p: &Vector<4>, t: f64) -> Vector<4> {
        BergerSphere::rotate(p, self.killing_scale() * t)
    }

    fn bundle_curvature(&self) -> f64 {
        self.tau()
    }

    fn berger_parameters(&self) -> Option<(f64, f64)> {
        Some((self.kappa(), self.tau()))
    }

    fn xi_jet(&self, p: &Vector<4>) -> VectorJet<4> {
        // ξ = λ J p is linear in p
        let mut jacobian = [[0.0; 4]; 4];
        for i in 0..4 {
            let e = linalg::basis::<4>(i);
            let col = BergerSphere::xi(self, &e);
            for k in 0..4 {
                jacobian[k][i] = col[k];
            }
        }
        VectorJet {
            value: BergerSphere::xi(self, p),
            jacobian,
        }
    }
}

impl KillingSubmersion<3> for Heisenberg {
    fn xi(&self, _p: &Vector<3>) -> Vector<3> {
        [0.0, 0.0, 1.0]
    }

    fn flow(&self, p: &Vector<3>, t: f64) -> Vector<3> {
        [p[0], p[1], p[2] + t]
    }

    fn bundle_curvature(&self) -> f64 {
        self.tau()
    }

    fn xi_jet(&self, _p: &Vector<3>) -> VectorJet<3> {
        VectorJet::constant([0.0, 0.0, 1.0])
    }
}

impl KillingSubmersion<3> for ProductSpace {
    fn xi(&self, _p: &Vector<3>) -> Vector<3> {
        [0.0, 0.0, 1.0]
    }

    fn flow(&self, p: &Vector<3>, t: f64) -> Vector<3> {
        [p[0], p[1], p[2] + t]
    }

    fn bundle_curvature(&self) -> f64 {
        0.0
    }

    fn xi_jet(&self, _p: &Vector<3>) -> VectorJet<3> {
        VectorJet::constant([0.0, 0.0, 1.0])
    }
}

/// The unit vertical Killing field, after validating `p`.
pub fn killing_field<const N: usize, S: KillingSubmersion<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
) -> Result<Vector<N>> {
    space.validate_point(p)?;
    Ok(space.xi(p))
}

pub fn killing_flow<const N: usize, S: KillingSubmersion<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
    t: f64,
) -> Result<Vector<N>> {
    space.validate_point(p)?;
    Ok(space.flow(p, t))
}

/// A unit horizontal vector at `p`, built from the chart basis.
pub fn horizontal_unit<const N: usize, S: KillingSubmersion<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
) -> Result<Vector<N>> {
    let g = kernel::metric_at(space, p)?;
    let xi = space.xi(p);
    let mut best = ([0.0; N], 0.0);
    for i in 0..N {
        let e = kernel::tangent_projection(space, p, &linalg::basis::<N>(i));
        let h = linalg::axpy(&e, -g.apply(&e, &xi), &xi);
        let n = g.norm(&h);
        if n > best.1 {
            best = (h, n);
        }
    }
    Ok(linalg::scale(1.0 / best.1, &best.0))
}

/// `τ̂` with `∇_X ξ = τ̂ X ∧ ξ` for a horizontal unit `X` chosen from the chart.
pub fn tau_estimate<const N: usize, S: KillingSubmersion<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
) -> Result<f64> {
    let x = horizontal_unit(space, p)?;
    tau_estimate_along(space, p, &x)
}

/// As [`tau_estimate`] with a caller-supplied horizontal direction.
pub fn tau_estimate_along<const N: usize, S: KillingSubmersion<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
    x: &Vector<N>,
) -> Result<f64> {
    let g = kernel::metric_at(space, p)?;
    let xi = space.xi(p);
    let x = kernel::tangent_projection(space, p, x);
    let x = linalg::axpy(&x, -g.apply(&x, &xi), &xi);
    let nabla = kernel::covariant_derivative(space, p, &x, &space.xi_jet(p))?;
    let wedge = kernel::hodge_cross(space, p, &[x, xi])?;
    let ww = g.apply(&wedge, &wedge);
    if ww < kernel::DEGENERATE_PLANE {
        return Err(GeomError::DegeneratePlane(ww));
    }
    Ok(g.apply(&nabla, &wedge) / ww)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Fiber, Surface2D};

    #[test]
    fn heisenberg_tau_is_recovered_with_sign() {
        for tau in [0.5, -0.3] {
            let h = Heisenberg::new(tau).unwrap();
            let est = tau_estimate(&h, &[0.4, -1.2, 3.0]).unwrap();
            assert!((est - tau).abs() < 1e-8, "{est} vs {tau}");
        }
    }

    #[test]
    fn berger_tau_is_recovered_with_sign() {
        for (k, t) in [(4.0, 1.0), (4.0, 0.5), (9.0, -0.7), (1.0, 2.0)] {
            let s = BergerSphere::new(k, t).unwrap();
            let p = [0.5, 0.5, 0.5, 0.5];
            let est = tau_estimate(&s, &p).unwrap();
            assert!((est - t).abs() < 1e-8, "kappa={k} tau={t}: {est}");
        }
    }

    #[test]
    fn product_space_is_untwisted() {
        let s = ProductSpace::new(Surface2D::round_sphere(1.0).unwrap(), Fiber::Line).unwrap();
        assert!(tau_estimate(&s, &[1.0, 0.3, 0.0]).unwrap().abs() < 1e-9);
    }

    #[test]
    fn berger_xi_is_unit() {
        let s = BergerSphere::new(9.0, 0.3).unwrap();
        let p = [0.0, 0.6, 0.8, 0.0];
        let xi = KillingSubmersion::xi(&s, &p);
        assert!((s.inner(&p, &xi, &xi) - 1.0).abs() < 1e-12);
    }
}
