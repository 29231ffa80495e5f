use super::{christoffel_unchecked, constraint_second_form, metric_at, tangent_projection};
use super::{unit_constraint_normal, RiemannianChart};
use crate::error::{GeomError, Result};
use crate::linalg::{self, Vector};
use alloc::vec::Vec;
use num_traits::Float;

/// Relative speed drift that aborts an integration.
pub const MAX_SPEED_DRIFT: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Geodesic<const N: usize> {
    pub points: Vec<Vector<N>>,
    pub velocities: Vec<Vector<N>>,
    /// Largest relative deviation of `|γ'|` from its initial value.
    pub max_speed_drift: f64,
}

impl<const N: usize> Geodesic<N> {
    pub fn end(&self) -> &Vector<N> {
        self.points.last().expect("geodesic has at least one point")
    }
}

fn acceleration<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    x: &Vector<N>,
    v: &Vector<N>,
) -> Result<Vector<N>> {
    let gamma = christoffel_unchecked(space, x)?;
    let mut a = linalg::scale(-1.0, &gamma.contract(v, v));
    if let Some(n) = unit_constraint_normal(space, x) {
        let h = constraint_second_form(space, x, v, v)?;
        a = linalg::axpy(&a, h, &n);
    }
    Ok(a)
}

/// Integrates the unit-speed geodesic from `p` in direction `v` over arc
/// length `length` with classical RK4 steps no larger than `step`.
pub fn geodesic_integrate<const N: usize, S: RiemannianChart<N> + ?Sized>(
    space: &S,
    p: &Vector<N>,
    v: &Vector<N>,
    length: f64,
    step: f64,
) -> Result<Geodesic<N>> {
    if !(step > 0.0) || !(length >= 0.0) {
        return Err(GeomError::InvalidParameter(
            "geodesic step and length must be positive",
        ));
    }
    let g = metric_at(space, p)?;
    let v = tangent_projection(space, p, v);
    let speed = g.norm(&v);
    if !(speed > 0.0) {
        return Err(GeomError::InvalidParameter(
            "geodesic needs a nonzero initial velocity",
        ));
    }
    let mut x = *p;
    let mut vel = linalg::scale(1.0 / speed, &v);
    let steps = (length / step).ceil().max(1.0) as usize;
    let h = length / steps as f64;

    let mut points = Vec::with_capacity(steps + 1);
    let mut velocities = Vec::with_capacity(steps + 1);
    points.push(x);
    velocities.push(vel);
    let mut drift = 0.0f64;
    for _ in 0..steps {
        let k1x = vel;
        let k1v = acceleration(space, &x, &vel)?;
        let x2 = linalg::axpy(&x, 0.5 * h, &k1x);
        let v2 = linalg::axpy(&vel, 0.5 * h, &k1v);
        let k2v = acceleration(space, &x2, &v2)?;
        let x3 = linalg::axpy(&x, 0.5 * h, &v2);
        let v3 = linalg::axpy(&vel, 0.5 * h, &k2v);
        let k3v = acceleration(space, &x3, &v3)?;
        let x4 = linalg::axpy(&x, h, &v3);
        let v4 = linalg::axpy(&vel, h, &k3v);
        let k4v = acceleration(space, &x4, &v4)?;
        x = core::array::from_fn(|i| x[i] + h / 6.0 * (k1x[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]));
        vel = core::array::from_fn(|i| {
            vel[i] + h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i])
        });
        x = space.project_point(&x);
        vel = tangent_projection(space, &x, &vel);
        let s = linalg::bilinear(&space.metric_matrix(&x), &vel, &vel).sqrt();
        drift = drift.max((s - 1.0).abs());
        if drift > MAX_SPEED_DRIFT {
            return Err(GeomError::StepTooLarge(drift));
        }
        points.push(x);
        velocities.push(vel);
    }
    Ok(Geodesic {
        points,
        velocities,
        max_speed_drift: drift,
    })
}
