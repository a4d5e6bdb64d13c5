//! Mesh-free plane elasticity and fracture with holomorphic networks.
//!
//! Two complex-valued networks approximate the Kolosov-Muskhelishvili
//! potentials `phi` and `psi`. Fields built from them satisfy equilibrium
//! and compatibility exactly; training minimizes the total potential
//! energy estimated by Monte-Carlo quadrature. Cracks are handled by a
//! square-root ansatz that keeps the faces traction-free, and stress
//! intensity factors come from contour interaction integrals.

pub mod bench;
pub mod cases;
pub mod crack;
pub mod cvnn;
pub mod elasticity;
pub mod energy;
pub mod error;
pub mod fracture;
pub mod geometry;
pub mod grad;
pub mod jet;
pub mod metrics;
pub mod oracles;

pub use error::{Error, Result};
pub use jet::{Cplx, HoloJet2};
