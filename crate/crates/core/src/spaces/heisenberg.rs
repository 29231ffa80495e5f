use crate::error::{GeomError, Result};
use crate::kernel::{Christoffel, ChristoffelMode, RiemannianChart};
use crate::linalg::{Matrix, Vector};

/// `Nil₃(τ)`: ℝ³ with `dx² + dy² + (τ(y dx − x dy) + dz)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Heisenberg {
    tau: f64,
}

impl Heisenberg {
    pub fn new(tau: f64) -> Result<Self> {
        if tau == 0.0 || !tau.is_finite() {
            return Err(GeomError::InvalidParameter(
                "Heisenberg space needs tau != 0",
            ));
        }
        Ok(Self { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

impl RiemannianChart<3> for Heisenberg {
    fn metric_matrix(&self, p: &Vector<3>) -> Matrix<3> {
        let t = self.tau;
        let (x, y) = (p[0], p[1]);
        // ω = τy dx − τx dy + dz
        let w = [t * y, -t * x, 1.0];
        [
            [1.0 + w[0] * w[0], w[0] * w[1], w[0]],
            [w[1] * w[0], 1.0 + w[1] * w[1], w[1]],
            [w[0], w[1], 1.0],
        ]
    }

    fn analytic_christoffel(&self, p: &Vector<3>) -> Option<Christoffel<3>> {
        let t = self.tau;
        let (x, y) = (p[0], p[1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let gamma = [
            [
                [0.0, t2 * y, 0.0],
                [t2 * y, -2.0 * t2 * x, t],
                [0.0, t, 0.0],
            ],
            [
                [-2.0 * t2 * y, t2 * x, -t],
                [t2 * x, 0.0, 0.0],
                [-t, 0.0, 0.0],
            ],
            [
                [-2.0 * t3 * x * y, t3 * (x * x - y * y), -t2 * x],
                [t3 * (x * x - y * y), 2.0 * t3 * x * y, -t2 * y],
                [-t2 * x, -t2 * y, 0.0],
            ],
        ];
        Some(Christoffel {
            gamma,
            mode: ChristoffelMode::Analytic,
        })
    }
}
