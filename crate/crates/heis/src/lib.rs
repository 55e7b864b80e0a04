//! Numerical sub-Riemannian geometry of the Heisenberg group H^n.
//!
//! The crate models H^n = R^(2n+1) with its left-invariant orthonormal
//! frame, computes the closed-form horizontal geodesics and the
//! rotationally symmetric constant-mean-curvature spheres, and verifies the
//! isoperimetric inequality at desk scale: every admissible candidate set
//! squeezed between a horizontal disk and the vertical cylinder over it has
//! perimeter at least that of the sphere of equal volume.
//!
//! Module map:
//!
//! * [`group`] - points, frame vectors, group law, dilations, J rotation;
//! * [`geodesic`] - closed-form geodesics plus an RK4 oracle;
//! * [`sphere`] - sphere profile, perimeter/volume quadrature, normals,
//!   characteristic curves, stationarity checks;
//! * [`radial`] - rotationally symmetric candidate sets with validation;
//! * [`calibration`] - hemisphere foliation fields, the measured divergence
//!   constant, disk and boundary fluxes, the flux identity;
//! * [`isoperimetry`] - the estimate chain, the convex family `f(rho)`, the
//!   matched-volume curvature `mu`, and deficit reports;
//! * [`families`] - builtin and seeded random candidate families;
//! * [`quad`], [`interp`] - adaptive Gauss-Kronrod quadrature and monotone
//!   cubic interpolation underpinning the above.
//!
//! Everything is pure and deterministic: no global state, fixed summation
//! orders, seeded randomness only.

// Validation sites use `!(x > 0.0)` so that NaN arguments are rejected
// along with non-positive ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod error;
pub mod families;
pub mod geodesic;
pub mod group;
pub mod interp;
pub mod isoperimetry;
pub mod quad;
pub mod radial;
pub mod sphere;

pub use error::{Error, Result};
pub use group::{Dimension, FrameVector, Point};
