//! Exact-computation laboratory for the geometry of the first covering of
//! Drinfel'd upper half plane: Bruhat-Tits tree combinatorics, the dual graph
//! of the semi-stable special fibre, mod-p Hecke operators on induced
//! representations, crystalline Frobenius on Artin-Schreier curves, Gauss
//! sums, and rank-2 filtered phi-modules.
//!
//! Everything is computed exactly: finite fields, truncated Witt vectors,
//! and cyclotomic integers. No floating point.

pub mod arith;
pub mod curve;
pub mod error;
pub mod linalg;
pub mod phimod;
pub mod rep;
pub mod theta;
pub mod tree;

pub use error::{Error, Result};
