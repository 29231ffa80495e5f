//! The concrete ambient spaces and Killing-field utilities.

mod berger;
mod heisenberg;
mod killing;
mod product;
mod surface2d;

pub use berger::{
    berger_connection, e1_field, e2_field, quoted_connection_table, v_field, BergerFrame,
    BergerSphere, FrameField, SPHERE_TOL,
};
pub use heisenberg::Heisenberg;
pub use killing::{
    horizontal_unit, killing_field, killing_flow, tau_estimate, tau_estimate_along,
    KillingSubmersion,
};
pub use product::{Fiber, ProductSpace};
pub use surface2d::{CappedProfile, Surface2D, DEFAULT_CYLINDER_CURVATURE};

use crate::error::{GeomError, Result};
use alloc::vec::Vec;

/// Any of the supported ambient 3-manifolds.
#[derive(Debug, Clone, PartialEq)]
pub enum AmbientSpace {
    Berger(BergerSphere),
    Heisenberg(Heisenberg),
    Product(ProductSpace),
}

impl AmbientSpace {
    /// Number of chart coordinates.
    pub fn chart_dimension(&self) -> usize {
        match self {
            Self::Berger(_) => 4,
            _ => 3,
        }
    }

    /// Bundle curvature `τ` of the Killing submersion.
    pub fn tau(&self) -> f64 {
        match self {
            Self::Berger(b) => b.tau(),
            Self::Heisenberg(h) => h.tau(),
            Self::Product(_) => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PinchingRatio {
    pub kappa_minus: f64,
    pub kappa_plus: f64,
    pub ratio: f64,
}

/// Extreme Gaussian curvatures of a base surface over `samples` meridian
/// stations strictly inside the chart.
pub fn pinching_ratio(surface: &Surface2D, samples: usize) -> Result<PinchingRatio> {
    if samples < 2 {
        return Err(GeomError::InvalidParameter(
            "pinching needs at least two samples",
        ));
    }
    let (lo, hi) = surface.meridian_range().unwrap_or((-1.0, 1.0));
    let values: Vec<f64> = (0..samples)
        .map(|i| {
            let s = lo + (hi - lo) * (i as f64 + 0.5) / samples as f64;
            surface.gaussian_curvature(&[s, 0.0])
        })
        .collect();
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, k)| !(**k > 0.0)) {
        return Err(GeomError::NonPositiveCurvature { index, value });
    }
    let kappa_minus = values.iter().copied().fold(f64::INFINITY, f64::min);
    let kappa_plus = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(PinchingRatio {
        kappa_minus,
        kappa_plus,
        ratio: kappa_minus / kappa_plus,
    })
}
