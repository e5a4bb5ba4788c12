//! Finite-scale computations for fundamental pro-groupoids of commutative 2-rings:
//! finite groupoid calculus, (2,1)-limits, torsors in cartesian 2-rings and their
//! descent, enveloping groupoids, and Galois/Pierce data over finite fields.

#![allow(clippy::needless_range_loop)]
pub mod acceptance;
pub mod corpus;
pub mod envgpd;
pub mod error;
pub mod fieldgalois;
pub mod fincat;
pub mod limits;
pub mod progpd;
pub mod schema;
pub mod topos;
pub mod torsors;

pub use error::{Error, Result};
pub use fincat::{FinCategory, FinGroup, FinGroupoid, Functor, NatTransform};
