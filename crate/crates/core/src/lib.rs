//! Generalized Heisenberg algebras H(f) over polynomial maps `f`.
//!
//! H(f) is generated by `x`, `h`, `y` subject to
//! `hx = x f(h)`, `yh = f(h) y` and `yx - xy = f(h) - h`. This crate provides
//! exact normal-form arithmetic in the basis `x^i h^j y^k`, the center and the
//! isomorphism problem, and the finite-dimensional simple modules as explicit
//! matrices.

pub mod algebra;
pub mod modtheory;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod structure;

pub use poly::Poly;
pub use scalar::{Backend, Field, Scalar};
