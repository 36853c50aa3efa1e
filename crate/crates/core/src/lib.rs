//! N-body choreographies on the lemniscate of Bernoulli.
//!
//! The crate is `no_std` (it needs `alloc`). It covers the Jacobi elliptic
//! machinery, the parametrized curve, the center-of-mass modulus solver,
//! the conserved quantities along a choreography, recovery of the pairwise
//! potential by least squares, and forward integration of the equations of
//! motion as an independent check.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod choreography;
pub mod dynamics;
pub mod elliptic;
mod error;
pub mod invariants;
pub mod lemniscate;
mod linalg;
pub mod potential;
mod roots;
mod vec;

pub use choreography::{BodyState, Choreography};
pub use dynamics::{DriftReport, SystemState, Trajectory};
pub use elliptic::{complete_k, jacobi, jacobi_derivatives, EllipticModulus, JacobiTriple};
pub use error::{Error, Result};
pub use invariants::{ConservationReport, DistanceExtrema, PairSet, Quantity};
pub use lemniscate::{Kinematics, LemniscateCurve};
pub use potential::{FitResult, PotentialParams};
pub use roots::brent;
pub use vec::PlaneVec;
