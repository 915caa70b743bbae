//! Gauss, anti-Gauss and averaged cubature on the square `[-1, 1]²` for
//! integrands carrying a product Jacobi weight, and a weighted Nyström solver
//! for second-kind Fredholm equations built on those rules.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled. Module map:
//!
//! * [`orthopoly`]: Jacobi recurrence coefficients and orthonormal polynomials.
//! * [`tridiag`]: symmetric tridiagonal eigensolver (values + first components).
//! * [`rules`]: univariate Gauss–Jacobi and anti-Gauss rules.
//! * [`cubature`]: tensor-product rules, error estimates, bracketing diagnostics.
//! * [`fredholm`]: problem model, Nyström systems, interpolants, error grids.
//! * [`linsolve`]: dense LU, GMRES, structured operators and the Stein solver.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cubature;
pub mod error;
pub mod fredholm;
pub mod linsolve;
mod math;
pub mod orthopoly;
pub mod rules;
pub mod tridiag;

pub use error::{Error, Result};
