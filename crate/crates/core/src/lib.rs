//! Exact tools for toric exponential sums over finite fields.
//!
//! The crate covers three connected jobs:
//!
//! * polyhedral invariants of Newton polyhedra at infinity: weights,
//!   denominators, Hodge numbers and the Hodge polygon ([`geometry`]);
//! * brute-force L-functions of toric exponential sums and their exact
//!   q-adic Newton polygons ([`field`], [`cyclotomic`], [`lfunction`]);
//! * the (A,B)-polynomial family, its polytope and an explicit complete
//!   regular integral triangulation of the face that does not lie on
//!   `x_0 = A`, together with an exact verifier ([`family`], [`triangulation`]).
//!
//! Every geometric quantity is an exact [`Rational`]; nothing in the crate
//! uses floating point.

pub mod cyclotomic;
pub mod error;
pub mod family;
pub mod feasibility;
pub mod field;
pub mod geometry;
pub mod lattice;
pub mod lfunction;
pub mod rational;
pub mod triangulation;

pub use error::{Error, Result};
pub use rational::{Extended, Rational};
