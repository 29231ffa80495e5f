use super::inequalities::random_unit4;
use super::VerificationReport;
use crate::error::Result;
use crate::kernel::{christoffel_fd, covariant_derivative, RiemannianChart, VectorJet, FD_STEP};
use crate::linalg::{self, Vector};
use crate::spaces::{
    berger_connection, e1_field, e2_field, quoted_connection_table, v_field, BergerSphere,
    FrameField, Heisenberg,
};
use alloc::format;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Residual bound for the frame connection table.
pub const CONNECTION_TOL: f64 = 1e-8;
/// Bound on `|Γ_FD − Γ_analytic|` in Heisenberg space.
pub const CHRISTOFFEL_TOL: f64 = 1e-6;

const FIELDS: [FrameField; 3] = [FrameField::E1, FrameField::E2, FrameField::V];

fn field(f: FrameField) -> fn(&Vector<4>) -> Vector<4> {
    match f {
        FrameField::E1 => e1_field,
        FrameField::E2 => e2_field,
        FrameField::V => v_field,
    }
}

struct Residuals {
    compatibility: f64,
    torsion: f64,
    levi_civita: f64,
}

fn table_residuals(
    space: &BergerSphere,
    p: &Vector<4>,
    table: fn(&BergerSphere, FrameField, FrameField) -> [f64; 3],
) -> Result<Residuals> {
    let frame = space.frame(p)?;
    let nabla = |x: FrameField, y: FrameField| frame.combine(&table(space, x, y));
    let g = |a: &Vector<4>, b: &Vector<4>| space.inner(p, a, b);
    let mut r = Residuals {
        compatibility: 0.0,
        torsion: 0.0,
        levi_civita: 0.0,
    };
    let h = FD_STEP;
    for &x in &FIELDS {
        let xv = frame.get(x);
        // curve through p with velocity X, kept on the sphere
        let at = |s: f64| {
            let q = linalg::axpy(p, s, &xv);
            linalg::scale(1.0 / linalg::norm(&q), &q)
        };
        let (qp, qm) = (at(h), at(-h));
        for &y in &FIELDS {
            for &z in &FIELDS {
                let pair = |q: &Vector<4>| space.inner(q, &field(y)(q), &field(z)(q));
                let lhs = (pair(&qp) - pair(&qm)) / (2.0 * h);
                let rhs = g(&nabla(x, y), &frame.get(z)) + g(&frame.get(y), &nabla(x, z));
                r.compatibility = r.compatibility.max((lhs - rhs).abs());
            }
            // [X, Y] as the commutator of ambient vector fields
            let jy = VectorJet::from_field(p, field(y));
            let jx = VectorJet::from_field(p, field(x));
            let bracket = linalg::sub(&jy.directional(&xv), &jx.directional(&frame.get(y)));
            let t = linalg::sub(&linalg::sub(&nabla(x, y), &nabla(y, x)), &bracket);
            r.torsion = r.torsion.max(g(&t, &t).sqrt());
            let lc = covariant_derivative(space, p, &xv, &jy)?;
            let d = linalg::sub(&nabla(x, y), &lc);
            r.levi_civita = r.levi_civita.max(g(&d, &d).sqrt());
        }
    }
    Ok(r)
}

/// Metric compatibility and torsion of the frame connection table of the
/// Berger sphere at `samples` random points, cross-checked against the
/// chart's Levi-Civita connection. The quoted variant of the table is
/// evaluated alongside and reported in the notes.
pub fn berger_connection_check(
    kappa: f64,
    tau: f64,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let space = BergerSphere::new(kappa, tau)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("berger-connection")
        .param("kappa", kappa)
        .param("tau", tau)
        .param("samples", samples as f64);
    let (mut comp, mut tors, mut lc, mut quoted) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let p = random_unit4(&mut rng);
        let r = table_residuals(&space, &p, berger_connection)?;
        comp = comp.max(r.compatibility);
        tors = tors.max(r.torsion);
        lc = lc.max(r.levi_civita);
        let q = table_residuals(&space, &p, quoted_connection_table)?;
        quoted = quoted.max(q.torsion);
    }
    report.metric("compatibility", comp);
    report.metric("torsion", tors);
    report.metric("chart_difference", lc);
    report.metric("quoted_torsion", quoted);
    report.residual(comp, CONNECTION_TOL, "metric compatibility");
    report.residual(tors, CONNECTION_TOL, "torsion");
    report.residual(lc, 1e-6, "difference from the chart Levi-Civita connection");
    report.note(format!(
        "compatibility {comp:.3e}, torsion {tors:.3e}, chart difference {lc:.3e}"
    ));
    report.note(format!("quoted table torsion residual {quoted:.3e}"));
    Ok(report)
}

/// Finite-difference against analytic Christoffel symbols of `Nil₃(τ)` at
/// `samples` random points of `[-2, 2]³`.
pub fn heisenberg_christoffel_check(
    tau: f64,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let space = Heisenberg::new(tau)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("heisenberg-christoffel")
        .param("tau", tau)
        .param("samples", samples as f64);
    let mut worst = 0.0f64;
    for i in 0..samples {
        let p: Vector<3> = if i == 0 {
            [0.0; 3]
        } else {
            core::array::from_fn(|_| rng.gen_range(-2.0..2.0))
        };
        let fd = christoffel_fd(&space, &p, FD_STEP)?;
        let exact = space
            .analytic_christoffel(&p)
            .expect("Heisenberg space has analytic symbols");
        worst = worst.max(fd.max_abs_difference(&exact));
    }
    report.metric("max_difference", worst);
    report.residual(
        worst,
        CHRISTOFFEL_TOL,
        "finite-difference Christoffel error",
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn berger_table_is_levi_civita() {
        for (k, t) in [(4.0, 0.5), (1.0, 0.25), (9.0, 1.0), (4.0, -0.7)] {
            let r = berger_connection_check(k, t, 20, 1).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn quoted_table_has_torsion() {
        let space = BergerSphere::new(4.0, 0.5).unwrap();
        let r = table_residuals(&space, &[1.0, 0.0, 0.0, 0.0], quoted_connection_table).unwrap();
        assert!(r.torsion > 0.1);
    }

    #[test]
    fn heisenberg_symbols_agree() {
        let r = heisenberg_christoffel_check(0.5, 50, 2).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
