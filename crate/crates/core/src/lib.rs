//! Exact-arithmetic calculator for moduli of one-dimensional sheaves on
//! the quadric surface P1 x P1.
//!
//! The crate mechanizes the finite computations behind the space
//! M(3m + 2n + 1): Hilbert-polynomial and slope calculus over K-theory
//! classes of line bundles, semistability case tables, kernel
//! classification of matrices of bihomogeneous forms via maximal minors
//! and gcd, wall finding for alpha-semistable pairs, and
//! Poincare-polynomial bookkeeping for bundles, blow-ups, flips and
//! Hilbert schemes of points. Every computation is exact: coefficients
//! are arbitrary-precision rationals or integers throughout.

pub mod bihom;
pub mod error;
pub mod exactpoly;
pub mod pairs;
pub mod sheafcalc;
pub mod stability;
pub mod topology;

pub use error::{Error, Result};
