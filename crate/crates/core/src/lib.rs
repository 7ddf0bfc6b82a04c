//! Symbolic powers, generic initial ideals and the limiting shapes
//! `Δ(I)` / `Γ(I)` of radical ideals of points and linear flats, with
//! asymptotic Hilbert functions and exact polytope volumes.
//!
//! All algebra and geometry is carried out over ℚ with arbitrary-precision
//! rationals.

pub mod asymptotics;
pub mod configurations;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod poly;
pub mod polyhedra;
pub mod rational;
pub mod staircase;

pub use error::{Error, Result};
