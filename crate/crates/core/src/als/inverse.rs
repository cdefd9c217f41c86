use num_traits::{One, Zero};

use super::ops::{first_col_form, last_row_form};
use super::{Als, ElementType, LinearPencil};
use crate::error::{Error, Result};
use crate::qlinalg::{MatQ, Rational};

fn rev(r: std::ops::Range<usize>) -> Vec<usize> {
    r.rev().collect()
}

/// `Sigma X Sigma` restricted to rows `r` and columns `c` of `m`.
fn flip(m: &MatQ, r: std::ops::Range<usize>, c: std::ops::Range<usize>) -> MatQ {
    m.select(&rev(r), &rev(c))
}

/// Inverse of a minimal system already brought into the normal form of its
/// type `t`. Dimensions: `n - 1` for (1,1), `n` for (1,0) and (0,1), `n + 1`
/// for (0,0).
pub fn als_inverse(f: &Als, t: ElementType) -> Result<Als> {
    let n = f.dim();
    let d = f.d();
    if n == 0 {
        return Err(Error::ZeroInverse);
    }
    if n == 1 && f.pencil.entry_is_scalar(0, 0) {
        let a = f.a(0)[(0, 0)].clone();
        let lambda = f.v[(0, 0)].clone();
        if lambda.is_zero() {
            return Err(Error::ZeroInverse);
        }
        return Ok(Als::scalar(d, a / lambda));
    }
    let minus = |m: MatQ| -&m;
    match (t.right_flag, t.left_flag) {
        (true, true) => {
            if n < 2 {
                return Err(Error::TypeMismatch("type (1,1) needs dimension at least 2".into()));
            }
            first_col_form(f)?;
            let lambda = last_row_form(f)?;
            let m = n - 1;
            let mut p = LinearPencil::zeros(m, d);
            for (l, out) in p.coeffs.iter_mut().enumerate() {
                let a = f.a(l);
                out.set_block(0, 0, &minus(a.select(&rev(1..n - 1), &[n - 1]).scale(&lambda)));
                out.set_block(m - 1, 0, &minus(a.select(&[0], &[n - 1]).scale(&lambda)));
                out.set_block(0, 1, &minus(flip(a, 1..n - 1, 1..n - 1)));
                out.set_block(m - 1, 1, &minus(a.select(&[0], &rev(1..n - 1))));
            }
            Als::new(p, MatQ::unit_col(m, m - 1))
        }
        (true, false) => {
            let lambda = first_col_form(f)?;
            if n < 2 {
                return Err(Error::TypeMismatch("type (1,0) needs dimension at least 2".into()));
            }
            let inv = lambda.recip();
            let mut p = LinearPencil::zeros(n, d);
            for (l, out) in p.coeffs.iter_mut().enumerate() {
                let a = f.a(l);
                if l == 0 {
                    out[(0, 0)] = Rational::one();
                }
                out.set_block(0, 1, &minus(a.select(&[n - 1], &[n - 1]).scale(&inv)));
                out.set_block(0, 2, &minus(a.select(&[n - 1], &rev(1..n - 1)).scale(&inv)));
                out.set_block(1, 1, &minus(a.select(&rev(1..n - 1), &[n - 1])));
                out.set_block(1, 2, &minus(flip(a, 1..n - 1, 1..n - 1)));
                out.set_block(n - 1, 1, &minus(a.select(&[0], &[n - 1])));
                out.set_block(n - 1, 2, &minus(a.select(&[0], &rev(1..n - 1))));
            }
            Als::new(p, MatQ::unit_col(n, n - 1))
        }
        (false, true) => {
            let lambda = last_row_form(f)?;
            if n < 2 {
                return Err(Error::TypeMismatch("type (0,1) needs dimension at least 2".into()));
            }
            let mut p = LinearPencil::zeros(n, d);
            for (l, out) in p.coeffs.iter_mut().enumerate() {
                let a = f.a(l);
                out.set_block(0, 0, &minus(a.select(&rev(1..n - 1), &[n - 1]).scale(&lambda)));
                out.set_block(0, 1, &minus(flip(a, 1..n - 1, 1..n - 1)));
                out.set_block(0, n - 1, &minus(a.select(&rev(1..n - 1), &[0])));
                out.set_block(n - 2, 0, &minus(a.select(&[0], &[n - 1]).scale(&lambda)));
                out.set_block(n - 2, 1, &minus(a.select(&[0], &rev(1..n - 1))));
                out.set_block(n - 2, n - 1, &minus(a.select(&[0], &[0])));
                if l == 0 {
                    out[(n - 1, n - 1)] = Rational::one();
                }
            }
            Als::new(p, MatQ::unit_col(n, n - 1))
        }
        (false, false) => {
            let mut p = LinearPencil::zeros(n + 1, d);
            for (l, out) in p.coeffs.iter_mut().enumerate() {
                let a = f.a(l);
                out.set_block(0, 1, &minus(flip(a, 0..n, 0..n)));
                if l == 0 {
                    out.set_block(0, 0, &f.v.select(&rev(0..n), &[0]));
                    out.set_block(n, 1, &f.u.select(&[0], &rev(0..n)));
                }
            }
            Als::new(p, MatQ::unit_col(n + 1, n))
        }
    }
}

/// Inverse by the generic construction `[[-v, A], [0, u]]`; valid for any
/// nonzero element, dimension `n + 1`.
pub fn als_inverse_general(f: &Als) -> Result<Als> {
    let n = f.dim();
    if n == 0 {
        return Err(Error::ZeroInverse);
    }
    let mut p = LinearPencil::zeros(n + 1, f.d());
    for (l, out) in p.coeffs.iter_mut().enumerate() {
        out.set_block(0, 1, f.a(l));
        if l == 0 {
            out.set_block(0, 0, &-&f.v);
            out.set_block(n, 1, &f.u);
        }
    }
    Als::new(p, MatQ::unit_col(n + 1, n))
}
