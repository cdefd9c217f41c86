use num_traits::{One, Zero};

use super::{Als, LinearPencil};
use crate::error::{Error, Result};
use crate::qlinalg::{MatQ, Rational};

fn check_alphabet(f: &Als, g: &Als) -> Result<()> {
    if f.d() != g.d() {
        return Err(Error::DimensionMismatch(format!(
            "alphabets of size {} and {}",
            f.d(),
            g.d()
        )));
    }
    Ok(())
}

pub fn als_scalar_mul(f: &Als, mu: &Rational) -> Als {
    if mu.is_zero() || f.is_empty() {
        return Als::zero(f.d());
    }
    Als { u: f.u.clone(), pencil: f.pencil.clone(), v: f.v.scale(mu) }
}

/// `[[A_f, -A_f e_1 e_1^T], [0, A_g]]`, `v = [v_f; v_g]`.
pub fn als_add(f: &Als, g: &Als) -> Result<Als> {
    check_alphabet(f, g)?;
    if f.is_empty() {
        return Ok(g.clone());
    }
    if g.is_empty() {
        return Ok(f.clone());
    }
    let (nf, ng) = (f.dim(), g.dim());
    let mut p = LinearPencil::zeros(nf + ng, f.d());
    for (l, m) in p.coeffs.iter_mut().enumerate() {
        m.set_block(0, 0, f.a(l));
        m.set_block(nf, nf, g.a(l));
        m.set_block(0, nf, &-&f.a(l).col(0));
    }
    Als::new(p, MatQ::vstack(&[&f.v, &g.v])?)
}

/// Same construction as [`als_add`]; minimal when `f` and `g` are minimal and
/// the ranks add up.
pub fn als_add_disjoint(f: &Als, g: &Als) -> Result<Als> {
    als_add(f, g)
}

/// `[[A_f, -v_f u_g], [0, A_g]]`, `v = [0; v_g]`.
pub fn als_mul_general(f: &Als, g: &Als) -> Result<Als> {
    check_alphabet(f, g)?;
    if f.is_empty() || g.is_empty() {
        return Ok(Als::zero(f.d()));
    }
    let (nf, ng) = (f.dim(), g.dim());
    let mut p = LinearPencil::zeros(nf + ng, f.d());
    for (l, m) in p.coeffs.iter_mut().enumerate() {
        m.set_block(0, 0, f.a(l));
        m.set_block(nf, nf, g.a(l));
    }
    p.coeffs[0].set_block(0, nf, &-&f.v);
    Als::new(p, MatQ::vstack(&[&MatQ::zeros(nf, 1), &g.v])?)
}

/// Checks that the last row of the pencil is `[0, ..., 0, 1]` and
/// `v = lambda e_n`; returns `lambda`.
pub(crate) fn last_row_form(f: &Als) -> Result<Rational> {
    let n = f.dim();
    for j in 0..n {
        let want = if j == n - 1 { Rational::one() } else { Rational::zero() };
        if f.a(0)[(n - 1, j)] != want || !f.pencil.entry_is_scalar(n - 1, j) {
            return Err(Error::FormViolation("last row is not [0, ..., 0, 1]".into()));
        }
    }
    rhs_last(f)
}

/// Checks that the first column of the pencil is `[1, 0, ..., 0]^T` and
/// `v = lambda e_n`; returns `lambda`.
pub(crate) fn first_col_form(f: &Als) -> Result<Rational> {
    let n = f.dim();
    for i in 0..n {
        let want = if i == 0 { Rational::one() } else { Rational::zero() };
        if f.a(0)[(i, 0)] != want || !f.pencil.entry_is_scalar(i, 0) {
            return Err(Error::FormViolation("first column is not [1, 0, ..., 0]^T".into()));
        }
    }
    rhs_last(f)
}

pub(crate) fn rhs_last(f: &Als) -> Result<Rational> {
    let n = f.dim();
    if (0..n - 1).any(|i| !f.v[(i, 0)].is_zero()) {
        return Err(Error::FormViolation("right hand side is not concentrated in the last entry".into()));
    }
    Ok(f.v[(n - 1, 0)].clone())
}

/// Product for `f` with last row `[0, ..., 0, 1]`; dimension `n_f + n_g - 1`.
pub fn als_mul_type_1star(f: &Als, g: &Als) -> Result<Als> {
    check_alphabet(f, g)?;
    if f.is_empty() || g.is_empty() {
        return Ok(Als::zero(f.d()));
    }
    let lf = last_row_form(f)?;
    let nf = f.dim();
    if nf == 1 {
        return Ok(als_scalar_mul(g, &lf));
    }
    let ng = g.dim();
    let n = nf + ng - 1;
    let mut p = LinearPencil::zeros(n, f.d());
    for (l, m) in p.coeffs.iter_mut().enumerate() {
        m.set_block(0, 0, &f.a(l).submatrix(0..nf - 1, 0..nf - 1));
        m.set_block(0, nf - 1, &f.a(l).submatrix(0..nf - 1, nf - 1..nf).scale(&lf));
        m.set_block(nf - 1, nf - 1, g.a(l));
    }
    Als::new(p, MatQ::vstack(&[&MatQ::zeros(nf - 1, 1), &g.v])?)
}

/// Product for `g` with first column `[1, 0, ..., 0]^T`; dimension
/// `n_f + n_g - 1`. The right hand side of `f` is concentrated first.
pub fn als_mul_type_star1(f: &Als, g: &Als) -> Result<Als> {
    check_alphabet(f, g)?;
    if f.is_empty() || g.is_empty() {
        return Ok(Als::zero(f.d()));
    }
    let lg = first_col_form(g)?;
    let ng = g.dim();
    if ng == 1 {
        return Ok(als_scalar_mul(f, &lg));
    }
    let (f, _, lf) = concentrate_rhs(f);
    let nf = f.dim();
    let n = nf + ng - 1;
    let mut p = LinearPencil::zeros(n, f.d());
    for (l, m) in p.coeffs.iter_mut().enumerate() {
        m.set_block(0, 0, f.a(l));
        m.set_block(nf - 1, nf, &g.a(l).submatrix(0..1, 1..ng).scale(&lf));
        m.set_block(nf, nf, &g.a(l).submatrix(1..ng, 1..ng));
    }
    Als::new(p, MatQ::vstack(&[&MatQ::zeros(nf, 1), &g.v.submatrix(1..ng, 0..1)])?)
}

/// Row operations `P` with `P v = lambda e_n`; returns the transformed system,
/// `P` and `lambda`.
pub fn concentrate_rhs(f: &Als) -> (Als, MatQ, Rational) {
    let n = f.dim();
    if n == 0 {
        return (f.clone(), MatQ::identity(0), Rational::zero());
    }
    let mut p = MatQ::identity(n);
    let Some(k) = (0..n).rev().find(|&i| !f.v[(i, 0)].is_zero()) else {
        return (f.clone(), p, Rational::zero());
    };
    p.swap_rows(k, n - 1);
    let sv = &p * &f.v;
    let lambda = sv[(n - 1, 0)].clone();
    let mut e = MatQ::identity(n);
    for i in 0..n - 1 {
        e[(i, n - 1)] = -(&sv[(i, 0)] / &lambda);
    }
    let p = &e * &p;
    let g = Als {
        u: f.u.clone(),
        pencil: f.pencil.map(|m| &p * m),
        v: &p * &f.v,
    };
    (g, p, lambda)
}

/// `(u Q, P A Q, P v)`; `Q` must have first row `e_1`.
pub fn apply_transformation(f: &Als, p: &MatQ, q: &MatQ) -> Result<Als> {
    let n = f.dim();
    if p.rows() != n || p.cols() != n || q.rows() != n || q.cols() != n {
        return Err(Error::DimensionMismatch("transformation size".into()));
    }
    if n == 0 {
        return Ok(f.clone());
    }
    if q.row(0) != MatQ::unit_row(n, 0) {
        return Err(Error::NotAdmissible("first row of Q must be e_1".into()));
    }
    if p.det()?.is_zero() || q.det()?.is_zero() {
        return Err(Error::NotInvertible);
    }
    Ok(Als {
        u: &f.u * q,
        pencil: f.pencil.map(|m| &(p * m) * q),
        v: p * &f.v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::ncpoly::{series_eval, TruncatedSeries};
    use crate::qlinalg::q;

    fn xyz() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    fn oracle(s: &str, order: usize) -> TruncatedSeries {
        series_eval(&Expr::parse(s, &xyz()).unwrap(), 3, order).unwrap()
    }

    fn x() -> Als {
        Als::letter(3, 0)
    }

    fn y() -> Als {
        Als::letter(3, 1)
    }

    fn one_minus(i: usize) -> Als {
        als_add(&Als::scalar(3, q(1)), &als_scalar_mul(&Als::letter(3, i), &q(-1))).unwrap()
    }

    #[test]
    fn scalar_multiples() {
        assert_eq!(als_scalar_mul(&x(), &q(2)).series_expand(3).unwrap(), oracle("2*x", 3));
        assert_eq!(als_scalar_mul(&x(), &q(1)), x());
        assert_eq!(als_scalar_mul(&one_minus(0), &q(-3)).series_expand(4).unwrap(), oracle("-3*(1-x)", 4));
        assert!(als_scalar_mul(&x(), &q(0)).is_empty());
    }

    #[test]
    fn sums() {
        let s = als_add(&x(), &y()).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.series_expand(4).unwrap(), oracle("x+y", 4));
        assert_eq!(als_add(&x(), &Als::zero(3)).unwrap(), x());
    }

    #[test]
    fn general_product() {
        let p = als_mul_general(&x(), &y()).unwrap();
        assert_eq!(p.dim(), 4);
        assert_eq!(p.series_expand(4).unwrap(), oracle("x*y", 4));
        let f = one_minus(0);
        let one = Als::scalar(3, q(1));
        assert_eq!(als_mul_general(&f, &one).unwrap().series_expand(4).unwrap(), f.series_expand(4).unwrap());
    }

    #[test]
    fn product_type_1star() {
        // 1 - x as [[1, x - 1], [0, 1]], v = e_2
        let f = Als::from_entries(3, &[vec![vec![q(1)], vec![q(-1), q(1)]], vec![vec![], vec![q(1)]]], vec![q(0), q(1)]).unwrap();
        let g = Als::from_entries(3, &[vec![vec![q(1)], vec![q(-1), q(0), q(1)]], vec![vec![], vec![q(1)]]], vec![q(0), q(1)]).unwrap();
        let p = als_mul_type_1star(&f, &g).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.series_expand(5).unwrap(), oracle("(1-x)*(1-y)", 5));
        let one = Als::scalar(3, q(1));
        let fo = als_mul_type_1star(&f, &one).unwrap();
        assert_eq!(fo.dim(), 2);
        assert_eq!(fo.series_expand(4).unwrap(), f.series_expand(4).unwrap());
        assert!(matches!(als_mul_type_1star(&als_add(&x(), &y()).unwrap(), &g), Err(Error::FormViolation(_))));
    }

    #[test]
    fn product_type_star1() {
        let f = one_minus(0);
        // (1 - y)^{-1}: first column [1]... use 1 - y in polynomial form
        let g = Als::from_entries(3, &[vec![vec![q(1)], vec![q(-1), q(0), q(1)]], vec![vec![], vec![q(1)]]], vec![q(0), q(1)]).unwrap();
        let p = als_mul_type_star1(&f, &g).unwrap();
        assert_eq!(p.dim(), f.dim() + 1);
        assert_eq!(p.series_expand(5).unwrap(), oracle("(1-x)*(1-y)", 5));
        let one = Als::scalar(3, q(1));
        assert_eq!(als_mul_type_star1(&one, &g).unwrap().dim(), 2);
    }

    #[test]
    fn concentrate() {
        let f = als_add(&x(), &y()).unwrap();
        let (g, p, lambda) = concentrate_rhs(&f);
        assert_eq!(&p * &f.v, MatQ::unit_col(4, 3).scale(&lambda));
        assert_eq!(g.series_expand(4).unwrap(), f.series_expand(4).unwrap());
    }

    #[test]
    fn transformations() {
        let f = als_add(&x(), &y()).unwrap();
        let i = MatQ::identity(4);
        assert_eq!(apply_transformation(&f, &i, &i).unwrap(), f);
        let p = MatQ::from_i64(&[&[1, 2, 0, 0], &[0, 1, 0, 3], &[1, 0, 1, 0], &[0, 0, -1, 1]]);
        let qm = MatQ::from_i64(&[&[1, 0, 0, 0], &[2, 1, 0, 0], &[0, 1, 1, 0], &[-1, 0, 5, 1]]);
        let g = apply_transformation(&f, &p, &qm).unwrap();
        assert_eq!(g.series_expand(6).unwrap(), f.series_expand(6).unwrap());
        assert!(matches!(apply_transformation(&f, &p, &p), Err(Error::NotAdmissible(_))));
        assert!(matches!(apply_transformation(&f, &MatQ::zeros(4, 4), &i), Err(Error::NotInvertible)));
    }
}
