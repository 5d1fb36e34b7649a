//! Small sub-Riemannian balls on 3D contact manifolds.
//!
//! Polynomial frames go in; structure constants, the invariants χ and κ, the
//! geodesic flow and Popp-volume quadrature of small balls come out.

pub mod cli;
pub mod connection;
pub mod contact;
pub mod cutdomain;
pub mod dilation;
pub mod error;
pub mod families;
pub mod geodesic;
pub mod heisenberg;
pub mod ode;
pub mod parallel;
pub mod polyexpr;
pub mod quadrature;
pub mod report;
pub mod verify;
pub mod volume;

pub use error::{Error, Point, Result};
