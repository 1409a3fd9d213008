#![cfg_attr(not(test), no_std)]
//! Exact convex geometry of Weyl group orbits in the Cartan subalgebra of a
//! Kac–Moody root datum, and floating-point Iwasawa models for the special
//! linear groups.
//!
//! Indices are 0-based throughout the API. Cartan points are rational
//! coordinate vectors in the basis of simple coroots followed by the
//! extension vectors of the root datum.

extern crate alloc;

pub mod coxeter;
pub mod datum;
pub mod fm;
pub mod gcm;
pub mod hull;
pub mod iwasawa;
pub mod linalg;
pub mod tits;

pub type Rational = num_rational::BigRational;
