//! Numerical kernel for Riemannian 3-manifolds fibred by a unit Killing field
//! (Berger spheres, Heisenberg space, products `M² × ℝ`), curvature of immersed
//! surfaces in them, and a level-set sweep that certifies embeddedness and
//! topology of triangulated convex surfaces.
//!
//! The crate is `no_std` and only needs `alloc`. All file formats, the command
//! line front end and threading live in the companion `convexa` crate.
#![no_std]
// `num_traits::Float` supplies float math under no_std; builds that pull in
// num-traits/std (dev-dependencies) resolve the same calls inherently.
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod fixtures;
pub mod immersion;
pub mod kernel;
pub mod linalg;
pub mod spaces;
pub mod sweep;
pub mod verify;

pub use error::GeomError;
pub use kernel::RiemannianChart;
pub use spaces::{
    AmbientSpace, BergerSphere, CappedProfile, Fiber, Heisenberg, KillingSubmersion, ProductSpace,
    Surface2D,
};
