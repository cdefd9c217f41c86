//! Admissible linear systems `A s = v` with `u = e_1`; the represented element
//! is `s_1 = u A^{-1} v`.

mod inverse;
mod json;
mod normal;
mod ops;
mod poly;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ncpoly::{TruncatedSeries, Word};
use crate::qlinalg::{MatQ, Rational};

pub use inverse::{als_inverse, als_inverse_general};
pub use json::AlsJson;
pub use normal::{normalize_type_11, normalize_type_1star, normalize_type_star1};
pub use ops::{
    als_add, als_add_disjoint, als_mul_general, als_mul_type_1star, als_mul_type_star1,
    als_scalar_mul, apply_transformation, concentrate_rhs,
};
pub use poly::{als_from_polynomial, is_polynomial_form, polynomial_of};

/// `A_0 + A_1 x_1 + ... + A_d x_d`, all coefficients `n x n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearPencil {
    pub coeffs: Vec<MatQ>,
}

impl LinearPencil {
    pub fn zeros(n: usize, d: usize) -> Self {
        LinearPencil { coeffs: vec![MatQ::zeros(n, n); d + 1] }
    }

    pub fn n(&self) -> usize {
        self.coeffs[0].rows()
    }

    pub fn d(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient list (constant first) of entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> Vec<Rational> {
        self.coeffs.iter().map(|m| m[(i, j)].clone()).collect()
    }

    pub fn set_entry(&mut self, i: usize, j: usize, e: &[Rational]) {
        for (m, c) in self.coeffs.iter_mut().zip(e) {
            m[(i, j)] = c.clone();
        }
    }

    pub fn entry_is_zero(&self, i: usize, j: usize) -> bool {
        self.coeffs.iter().all(|m| m[(i, j)].is_zero())
    }

    /// True if entry `(i, j)` has no letter part.
    pub fn entry_is_scalar(&self, i: usize, j: usize) -> bool {
        self.coeffs[1..].iter().all(|m| m[(i, j)].is_zero())
    }

    pub fn map(&self, f: impl Fn(&MatQ) -> MatQ) -> Self {
        LinearPencil { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        self.map(|m| m.submatrix(rows.clone(), cols.clone()))
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        self.map(|m| m.select(rows, cols))
    }

    /// `A_0 + sum eps_i A_i`.
    pub fn evaluate(&self, eps: &[Rational]) -> MatQ {
        let mut m = self.coeffs[0].clone();
        for (a, e) in self.coeffs[1..].iter().zip(eps) {
            if !e.is_zero() {
                m = &m + &a.scale(e);
            }
        }
        m
    }

    pub fn entry_string(&self, i: usize, j: usize, letters: &[String]) -> String {
        linear_form_string(&self.entry(i, j), letters)
    }
}

/// `c_0 + c_1 x_1 + ...` in the same text style as polynomials; "." for zero.
pub fn linear_form_string(e: &[Rational], letters: &[String]) -> String {
    let mut parts = Vec::new();
    for (k, c) in e.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if k == 0 {
            parts.push(c.to_string());
            continue;
        }
        let name = letters.get(k - 1).cloned().unwrap_or_else(|| format!("x{k}"));
        if c.is_one() {
            parts.push(name);
        } else if *c == -Rational::one() {
            parts.push(format!("-{name}"));
        } else {
            parts.push(format!("{c}{name}"));
        }
    }
    if parts.is_empty() {
        return ".".into();
    }
    let mut s = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => {
                s.push('-');
                s.push_str(rest);
            }
            None => {
                s.push('+');
                s.push_str(p);
            }
        }
    }
    s
}

/// Whether `1` lies in the right family span (first flag) and the left family
/// span (second flag).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct ElementType {
    pub right_flag: bool,
    pub left_flag: bool,
}

impl ElementType {
    pub fn new(right_flag: bool, left_flag: bool) -> Self {
        ElementType { right_flag, left_flag }
    }
}

impl fmt::Display for ElementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.right_flag as u8, self.left_flag as u8)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// Coefficient vectors of a family: columns `S(w)` (left) or rows `T(w)` (right).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FamilyCoefficients {
    pub side: Side,
    pub coeffs: BTreeMap<Word, MatQ>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Als {
    pub u: MatQ,
    pub pencil: LinearPencil,
    pub v: MatQ,
}

impl Als {
    /// Builds and checks shapes and admissibility.
    pub fn new(pencil: LinearPencil, v: MatQ) -> Result<Self> {
        let n = pencil.n();
        if pencil.coeffs.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch("pencil coefficients must be n x n".into()));
        }
        if v.rows() != n || v.cols() != 1 {
            return Err(Error::DimensionMismatch("right hand side must be n x 1".into()));
        }
        let u = if n == 0 { MatQ::zeros(1, 0) } else { MatQ::unit_row(n, 0) };
        Ok(Als { u, pencil, v })
    }

    pub fn zero(d: usize) -> Self {
        Als::new(LinearPencil::zeros(0, d), MatQ::zeros(0, 1)).expect("empty system")
    }

    pub fn scalar(d: usize, c: Rational) -> Self {
        if c.is_zero() {
            return Als::zero(d);
        }
        let mut p = LinearPencil::zeros(1, d);
        p.coeffs[0] = MatQ::identity(1);
        Als::new(p, MatQ::from_rows(vec![vec![c]]).unwrap()).unwrap()
    }

    /// Two-dimensional system for the letter `x_i`.
    pub fn letter(d: usize, i: usize) -> Self {
        let mut p = LinearPencil::zeros(2, d);
        p.coeffs[0] = MatQ::identity(2);
        p.coeffs[i + 1][(0, 1)] = -Rational::one();
        Als::new(p, MatQ::unit_col(2, 1)).unwrap()
    }

    /// From rows of entry coefficient lists `[c0, c_x, c_y, ...]`.
    pub fn from_entries(d: usize, rows: &[Vec<Vec<Rational>>], v: Vec<Rational>) -> Result<Self> {
        let n = rows.len();
        let mut p = LinearPencil::zeros(n, d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch("system matrix must be square".into()));
            }
            for (j, e) in row.iter().enumerate() {
                if e.len() > d + 1 {
                    return Err(Error::DimensionMismatch("entry has too many coefficients".into()));
                }
                for (k, c) in e.iter().enumerate() {
                    p.coeffs[k][(i, j)] = c.clone();
                }
            }
        }
        let v = MatQ::from_vec(n, 1, v)?;
        Als::new(p, v)
    }

    pub fn dim(&self) -> usize {
        self.pencil.n()
    }

    pub fn d(&self) -> usize {
        self.pencil.d()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn a(&self, l: usize) -> &MatQ {
        &self.pencil.coeffs[l]
    }

    /// `A_0` invertible, so the element is a power series.
    pub fn is_regular_at_zero(&self) -> bool {
        self.dim() == 0 || !self.a(0).det().map(|d| d.is_zero()).unwrap_or(true)
    }

    /// Letter maps `N_x = -A_0^{-1} A_x`, `b = A_0^{-1} v`.
    pub fn series_representation(&self) -> Result<(Vec<MatQ>, MatQ)> {
        let m = self.a(0).inverse().ok_or(Error::NotRegularAtZero)?;
        let ns = self.pencil.coeffs[1..].iter().map(|a| -&(&m * a)).collect();
        Ok((ns, &m * &self.v))
    }

    /// Power series coefficients `u S(w)` up to words of length `order`.
    pub fn series_expand(&self, order: usize) -> Result<TruncatedSeries> {
        let d = self.d();
        if self.dim() == 0 {
            return Ok(TruncatedSeries::zero(d, order));
        }
        let fam = self.family_coefficients(Side::Left, order)?;
        Ok(TruncatedSeries::from_terms(
            d,
            order,
            fam.coeffs.iter().map(|(w, s)| (w.clone(), (&self.u * s)[(0, 0)].clone())),
        ))
    }

    /// `S(1) = A_0^{-1} v`, `S(xw) = -A_0^{-1} A_x S(w)` (left side) or
    /// `T(1) = u A_0^{-1}`, `T(wx) = -T(w) A_x A_0^{-1}` (right side).
    pub fn family_coefficients(&self, side: Side, order: usize) -> Result<FamilyCoefficients> {
        let m = self.a(0).inverse().ok_or(Error::NotRegularAtZero)?;
        let mut coeffs = BTreeMap::new();
        match side {
            Side::Left => {
                let ns: Vec<MatQ> = self.pencil.coeffs[1..].iter().map(|a| -&(&m * a)).collect();
                coeffs.insert(Word::empty(), &m * &self.v);
                let mut frontier = vec![Word::empty()];
                for _ in 0..order {
                    let mut next = Vec::new();
                    for w in &frontier {
                        let s = coeffs[w].clone();
                        for (x, n) in ns.iter().enumerate() {
                            let mut nw = vec![x];
                            nw.extend_from_slice(&w.0);
                            coeffs.insert(Word(nw.clone()), n * &s);
                            next.push(Word(nw));
                        }
                    }
                    frontier = next;
                }
            }
            Side::Right => {
                let ms: Vec<MatQ> = self.pencil.coeffs[1..].iter().map(|a| -&(a * &m)).collect();
                coeffs.insert(Word::empty(), &self.u * &m);
                let mut frontier = vec![Word::empty()];
                for _ in 0..order {
                    let mut next = Vec::new();
                    for w in &frontier {
                        let t = coeffs[w].clone();
                        for (x, mx) in ms.iter().enumerate() {
                            let mut nw = w.0.clone();
                            nw.push(x);
                            coeffs.insert(Word(nw.clone()), &t * mx);
                            next.push(Word(nw));
                        }
                    }
                    frontier = next;
                }
            }
        }
        Ok(FamilyCoefficients { side, coeffs })
    }

    /// Bracketed matrix display with "." for zero entries.
    pub fn display(&self, letters: &[String]) -> String {
        let n = self.dim();
        if n == 0 {
            return "zero system (dimension 0)\n".into();
        }
        let cells: Vec<Vec<String>> = (0..n)
            .map(|i| (0..n).map(|j| self.pencil.entry_string(i, j, letters)).collect())
            .collect();
        let vcells: Vec<String> = (0..n)
            .map(|i| {
                let c = &self.v[(i, 0)];
                if c.is_zero() { ".".into() } else { c.to_string() }
            })
            .collect();
        let widths: Vec<usize> = (0..n)
            .map(|j| cells.iter().map(|r| r[j].len()).max().unwrap_or(1))
            .collect();
        let vw = vcells.iter().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| format!("{:>w$}", cells[i][j], w = widths[j])).collect();
            let u = if i == 0 { "1" } else { "." };
            out.push_str(&format!("u {u} | [ {} ] s = [ {:>vw$} ]\n", row.join("  "), vcells[i]));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::ncpoly::series_eval;
    use crate::qlinalg::q;

    fn xyz() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    #[test]
    fn letter_series_is_exactly_the_letter() {
        let s = Als::letter(3, 0).series_expand(3).unwrap();
        assert_eq!(s, TruncatedSeries::from_terms(3, 3, [(Word(vec![0]), q(1))]));
    }

    #[test]
    fn geometric() {
        // (1 - x) s = 1
        let f = Als::from_entries(3, &[vec![vec![q(1), q(-1)]]], vec![q(1)]).unwrap();
        let want = series_eval(&Expr::parse("(1-x)^-1", &xyz()).unwrap(), 3, 5).unwrap();
        assert_eq!(f.series_expand(5).unwrap(), want);
    }

    #[test]
    fn not_regular() {
        let f = Als::from_entries(3, &[vec![vec![q(0), q(1)]]], vec![q(1)]).unwrap();
        assert_eq!(f.series_expand(2), Err(Error::NotRegularAtZero));
    }

    #[test]
    fn left_family_of_letter() {
        let fam = Als::letter(3, 0).family_coefficients(Side::Left, 1).unwrap();
        // s = [x, 1]: constant part (0, 1), x part (1, 0)
        assert_eq!(fam.coeffs[&Word::empty()], MatQ::from_i64(&[&[0], &[1]]));
        assert_eq!(fam.coeffs[&Word(vec![0])], MatQ::from_i64(&[&[1], &[0]]));
        assert!(fam.coeffs[&Word(vec![1])].is_zero());
    }

    #[test]
    fn right_family_reproduces_series() {
        let f = Als::from_entries(
            3,
            &[
                vec![vec![q(1)], vec![q(0), q(0), q(-1)]],
                vec![vec![q(0), q(1)], vec![q(1)]],
            ],
            vec![q(0), q(1)],
        )
        .unwrap();
        let s = f.series_expand(4).unwrap();
        let fam = f.family_coefficients(Side::Right, 4).unwrap();
        for (w, t) in &fam.coeffs {
            let c = (t * &f.v)[(0, 0)].clone();
            assert_eq!(c, s.coeff(w), "{w:?}");
        }
    }

    #[test]
    fn linear_forms() {
        let l = xyz();
        assert_eq!(linear_form_string(&[q(1), q(-1)], &l), "1-x");
        assert_eq!(linear_form_string(&[q(0), q(2), q(1)], &l), "2x+y");
        assert_eq!(linear_form_string(&[q(0)], &l), ".");
    }
}
