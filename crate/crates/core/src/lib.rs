//! Bernstein-function Helmholtz multipliers: evaluation of Bernstein
//! functions through their Lévy triples, periodic Fourier multipliers
//! `f(−Δ)`, Herglotz waves on the sphere with their weighted `B*` norm, and
//! Phillips subordination of matrix generators.

pub mod bernstein;
pub mod cli;
pub mod error;
pub mod findiff;
pub mod multiplier;
pub mod quadrature;
pub mod special;
pub mod sphere;
pub mod subordination;
pub mod testfn;

pub use bernstein::{catalogue, parse_id, BernsteinFn, LevyTriple, MeasureSpec};
pub use error::{Error, Result};
