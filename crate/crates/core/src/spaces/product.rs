use super::surface2d::Surface2D;
use crate::error::{GeomError, Result};
use crate::kernel::{Christoffel, ChristoffelMode, RiemannianChart};
use crate::linalg::{Matrix, Vector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fiber {
    Line,
    Circle { period: f64 },
}

/// `M² × ℝ` or `M² × S¹` in chart coordinates `(u, v, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpace {
    pub base: Surface2D,
    pub fiber: Fiber,
}

impl ProductSpace {
    pub fn new(base: Surface2D, fiber: Fiber) -> Result<Self> {
        if let Fiber::Circle { period } = fiber {
            if !(period > 0.0) {
                return Err(GeomError::InvalidParameter(
                    "circle fiber needs a positive period",
                ));
            }
        }
        Ok(Self { base, fiber })
    }

    pub fn fiber_period(&self) -> Option<f64> {
        match self.fiber {
            Fiber::Line => None,
            Fiber::Circle { period } => Some(period),
        }
    }

    /// Periods of the three chart coordinates.
    pub fn periods(&self) -> [Option<f64>; 3] {
        [None, self.base.period(), self.fiber_period()]
    }
}

impl RiemannianChart<3> for ProductSpace {
    fn metric_matrix(&self, p: &Vector<3>) -> Matrix<3> {
        let b = self.base.metric_matrix(&[p[0], p[1]]);
        [
            [b[0][0], b[0][1], 0.0],
            [b[1][0], b[1][1], 0.0],
            [0.0, 0.0, 1.0],
        ]
    }

    fn validate_point(&self, p: &Vector<3>) -> Result<()> {
        if !p[2].is_finite() {
            return Err(GeomError::OutsideChart("non-finite fiber coordinate"));
        }
        self.base.validate_point(&[p[0], p[1]])
    }

    fn analytic_christoffel(&self, p: &Vector<3>) -> Option<Christoffel<3>> {
        let b = self.base.analytic_christoffel(&[p[0], p[1]])?;
        let mut gamma = [[[0.0; 3]; 3]; 3];
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    gamma[k][i][j] = b.gamma[k][i][j];
                }
            }
        }
        Some(Christoffel {
            gamma,
            mode: ChristoffelMode::Analytic,
        })
    }
}
