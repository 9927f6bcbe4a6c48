//! Waring decompositions of ternary sextics: apolarity, point configurations,
//! plane-curve intersections, the Young flattening invariant and the
//! Terracini nonic.
//!
//! Every algorithm is generic over [`Field`]: exact [`Rational`] input runs
//! with exact linear algebra, [`Complex64`] input with relative tolerances.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod apolarity;
pub mod pointsets;
pub mod roots;
pub mod intersect;
pub mod flattening;
pub mod terracini;
pub mod engine;

pub use error::{Error, Result};
pub use field::{Complex64, Field, Rational};
pub use linalg::Matrix;
pub use poly::{apply_operator, monomials, Exponent, TernaryForm};
