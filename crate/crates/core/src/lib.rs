//! Exact computations in the free field over the rationals: linear systems
//! for noncommutative rational functions, minimization and rank, and
//! factorization into atoms.

pub mod als;
pub mod error;
pub mod eval;
pub mod expr;
pub mod factor;
pub mod groebner;
pub mod minimize;
pub mod ncpoly;
pub mod qlinalg;

pub use als::{Als, ElementType, LinearPencil};
pub use error::{Error, Result};
pub use expr::Expr;
pub use qlinalg::{MatQ, Rational};
