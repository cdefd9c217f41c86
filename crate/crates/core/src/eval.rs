//! Turning expressions into linear systems.

use num_traits::One;

use crate::als::{als_add, als_inverse_general, als_mul_general, als_scalar_mul, Als};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::minimize::{invert, minimize};
use crate::qlinalg::Rational;

/// Builds a system for `e` over `d` letters with the rational operations.
/// With `minimize_each_step` every intermediate result is minimized and
/// inverses use the minimal construction.
pub fn eval_to_als(e: &Expr, d: usize, minimize_each_step: bool) -> Result<Als> {
    let r = match e {
        Expr::Const(c) => Als::scalar(d, c.clone()),
        Expr::Letter(i) => {
            if *i >= d {
                return Err(Error::DimensionMismatch(format!("letter index {i} outside alphabet")));
            }
            Als::letter(d, *i)
        }
        Expr::Neg(a) => als_scalar_mul(&eval_to_als(a, d, minimize_each_step)?, &-Rational::one()),
        Expr::Sum(a, b) => als_add(
            &eval_to_als(a, d, minimize_each_step)?,
            &eval_to_als(b, d, minimize_each_step)?,
        )?,
        Expr::Product(a, b) => als_mul_general(
            &eval_to_als(a, d, minimize_each_step)?,
            &eval_to_als(b, d, minimize_each_step)?,
        )?,
        Expr::Inverse(a) => {
            let inner = eval_to_als(a, d, minimize_each_step)?;
            let m = minimize(&inner)?;
            if m.dim() == 0 {
                return Err(Error::ZeroInverse);
            }
            if minimize_each_step {
                invert(&m)?
            } else {
                als_inverse_general(&inner)?
            }
        }
    };
    if minimize_each_step {
        minimize(&r)
    } else {
        Ok(r)
    }
}

/// Parses and evaluates without intermediate minimization.
pub fn eval_str(text: &str, letters: &[&str]) -> Result<Als> {
    let letters: Vec<String> = letters.iter().map(|s| s.to_string()).collect();
    let e = Expr::parse(text, &letters)?;
    eval_to_als(&e, letters.len(), false)
}
