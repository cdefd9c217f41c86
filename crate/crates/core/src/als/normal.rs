//! Admissible transformations bringing a minimal system into the shape needed
//! by the typed products and inverses.

use num_traits::{One, Zero};

use super::ops::{concentrate_rhs, first_col_form, last_row_form};
use super::{apply_transformation, Als};
use crate::error::{Error, Result};
use crate::minimize::{kappa_left, kappa_right};
use crate::qlinalg::{MatQ, Rational};

/// Last row `[0, ..., 0, 1]` and `v = lambda e_n`. Needs `1` in the left
/// family span. Returns the system with the `(P, Q)` used.
pub fn normalize_type_star1(f: &Als) -> Result<(Als, MatQ, MatQ)> {
    let n = f.dim();
    if n >= 1 && last_row_form(f).is_ok() {
        return Ok((f.clone(), MatQ::identity(n), MatQ::identity(n)));
    }
    if n < 2 {
        return Err(Error::TypeMismatch("needs dimension at least 2".into()));
    }
    let kappa = kappa_left(f)?.ok_or_else(|| Error::TypeMismatch("1 is not in the left family span".into()))?;

    // Q^{-1} has rows e_1, unit completions, kappa; then s_n = 1
    let e1 = MatQ::unit_row(n, 0);
    let extra = MatQ::complete_rows(&[e1.clone(), kappa.clone()], n);
    let mut rows = vec![e1];
    rows.extend(extra.iter().map(|&i| MatQ::unit_row(n, i)));
    rows.push(kappa);
    let refs: Vec<&MatQ> = rows.iter().collect();
    let qinv = MatQ::vstack(&refs)?;
    let q0 = qinv.inverse().ok_or(Error::NotInvertible)?;

    let (_, mut p0, lambda) = concentrate_rhs(f);
    for j in 0..n {
        let x = &p0[(n - 1, j)] / &lambda;
        p0[(n - 1, j)] = x;
    }
    let f1 = apply_transformation(f, &p0, &q0)?;

    // T A = B with B = last row - e_n^T, solved on all coefficients at once
    let mut a_parts = Vec::new();
    let mut b_parts = Vec::new();
    for (l, a) in f1.pencil.coeffs.iter().enumerate() {
        a_parts.push(a.clone());
        let mut b = a.row(n - 1);
        if l == 0 {
            b[(0, n - 1)] -= Rational::one();
        }
        b_parts.push(b);
    }
    let a = MatQ::hstack(&a_parts.iter().collect::<Vec<_>>())?;
    let b = MatQ::hstack(&b_parts.iter().collect::<Vec<_>>())?;
    let t = a
        .solve_left(&b)?
        .ok_or_else(|| Error::FormViolation("no row transformation for the last row".into()))?;
    let mut p1 = MatQ::identity(n);
    for j in 0..n {
        let x = if j == n - 1 { Rational::one() } else { Rational::zero() };
        p1[(n - 1, j)] = x - &t[(0, j)];
    }
    let f2 = apply_transformation(&f1, &p1, &MatQ::identity(n))?;
    last_row_form(&f2)?;
    Ok((f2, &p1 * &p0, q0))
}

/// First column `[1, 0, ..., 0]^T` and `v = lambda e_n`. Needs `1` in the
/// right family span.
pub fn normalize_type_1star(f: &Als) -> Result<(Als, MatQ, MatQ)> {
    let n = f.dim();
    if n >= 1 && first_col_form(f).is_ok() {
        return Ok((f.clone(), MatQ::identity(n), MatQ::identity(n)));
    }
    if n < 2 {
        return Err(Error::TypeMismatch("needs dimension at least 2".into()));
    }
    let kappa = kappa_right(f)?.ok_or_else(|| Error::TypeMismatch("1 is not in the right family span".into()))?;

    // P^{-1} has columns kappa, unit completions, v; then t_1 = 1 and P v = e_n
    let fixed = [kappa.transpose(), f.v.transpose()];
    let extra = MatQ::complete_rows(&fixed, n);
    let mut cols = vec![kappa];
    cols.extend(extra.iter().map(|&i| MatQ::unit_col(n, i)));
    cols.push(f.v.clone());
    let refs: Vec<&MatQ> = cols.iter().collect();
    let pinv = MatQ::hstack(&refs)?;
    let p0 = pinv.inverse().ok_or(Error::NotInvertible)?;
    let f1 = apply_transformation(f, &p0, &MatQ::identity(n))?;

    // A U = B with B = first column - e_1
    let mut a_parts = Vec::new();
    let mut b_parts = Vec::new();
    for (l, a) in f1.pencil.coeffs.iter().enumerate() {
        a_parts.push(a.clone());
        let mut b = a.col(0);
        if l == 0 {
            b[(0, 0)] -= Rational::one();
        }
        b_parts.push(b);
    }
    let a = MatQ::vstack(&a_parts.iter().collect::<Vec<_>>())?;
    let b = MatQ::vstack(&b_parts.iter().collect::<Vec<_>>())?;
    let u = a
        .solve_right(&b)?
        .ok_or_else(|| Error::FormViolation("no column transformation for the first column".into()))?;
    let mut q1 = MatQ::identity(n);
    for i in 0..n {
        let x = if i == 0 { Rational::one() } else { Rational::zero() };
        q1[(i, 0)] = x - &u[(i, 0)];
    }
    let f2 = apply_transformation(&f1, &MatQ::identity(n), &q1)?;
    first_col_form(&f2)?;
    Ok((f2, p0, q1))
}

/// Both forms at once, as needed by the inverse of a type (1,1) element.
pub fn normalize_type_11(f: &Als) -> Result<(Als, MatQ, MatQ)> {
    let n = f.dim();
    let both = |g: &Als| first_col_form(g).is_ok() && last_row_form(g).is_ok();
    if n >= 1 && both(f) {
        return Ok((f.clone(), MatQ::identity(n), MatQ::identity(n)));
    }
    let attempt = |first_cols: bool| -> Result<(Als, MatQ, MatQ)> {
        let (g, p1, q1) = if first_cols { normalize_type_1star(f)? } else { normalize_type_star1(f)? };
        let (h, p2, q2) = if first_cols { normalize_type_star1(&g)? } else { normalize_type_1star(&g)? };
        if !both(&h) {
            return Err(Error::FormViolation("could not reach the combined form".into()));
        }
        Ok((h, &p2 * &p1, &q1 * &q2))
    };
    attempt(true).or_else(|_| attempt(false))
}
