//! Exact linear algebra over the rationals.
//!
//! Every value is an exact fraction; there is no floating point anywhere in
//! this crate. Matrices are small and dense, stored row-major.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The ground field: arbitrary precision fractions, always gcd-reduced with a
/// positive denominator.
pub type Rational = BigRational;

/// Integer as a rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `n / d`.
pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` (optional sign on `p`, surrounding whitespace ignored).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("invalid rational literal {s:?}"),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// `"p/q"` or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Serde adapter writing a rational as its `"p/q"` string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Dense rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatQ {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl MatQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatQ {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Row vector `e_i` of length `n` (0-based `i`).
    pub fn unit_row(n: usize, i: usize) -> Self {
        let mut m = Self::zeros(1, n);
        m[(0, i)] = Rational::one();
        m
    }

    /// Column vector `e_i` of length `n` (0-based `i`).
    pub fn unit_col(n: usize, i: usize) -> Self {
        let mut m = Self::zeros(n, 1);
        m[(i, 0)] = Rational::one();
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(MatQ { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(MatQ {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from integer rows; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
            .expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> MatQ {
        self.submatrix(i..i + 1, 0..self.cols)
    }

    pub fn col(&self, j: usize) -> MatQ {
        self.submatrix(0..self.rows, j..j + 1)
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> MatQ {
        let mut t = MatQ::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Rational) -> MatQ {
        MatQ {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> MatQ {
        let mut m = MatQ::zeros(rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    /// Picks the given rows and columns (in the given order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> MatQ {
        let mut m = MatQ::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    /// Writes `block` with its upper left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &MatQ) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r + i, c + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn hstack(parts: &[&MatQ]) -> Result<MatQ> {
        let rows = parts.first().map_or(0, |m| m.rows);
        if parts.iter().any(|m| m.rows != rows) {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = MatQ::zeros(rows, cols);
        let mut c = 0;
        for m in parts {
            out.set_block(0, c, m);
            c += m.cols;
        }
        Ok(out)
    }

    pub fn vstack(parts: &[&MatQ]) -> Result<MatQ> {
        let cols = parts.first().map_or(0, |m| m.cols);
        if parts.iter().any(|m| m.cols != cols) {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = MatQ::zeros(rows, cols);
        let mut r = 0;
        for m in parts {
            out.set_block(r, 0, m);
            r += m.rows;
        }
        Ok(out)
    }

    pub fn checked_mul(&self, rhs: &MatQ) -> Result<MatQ> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = MatQ::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &MatQ) -> Result<MatQ> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        Ok(MatQ {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (MatQ, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(i, j)] - &f * &m[(r, j)];
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Some `X` with `self * X = b`, or `None` if the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve_right(&self, b: &MatQ) -> Result<Option<MatQ>> {
        if self.rows != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve_right: {}x{} against {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let aug = MatQ::hstack(&[self, b])?;
        let (red, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = MatQ::zeros(self.cols, b.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = red[(r, self.cols + j)].clone();
            }
        }
        Ok(Some(x))
    }

    /// Some `T` with `T * self = b`, or `None` if inconsistent.
    pub fn solve_left(&self, b: &MatQ) -> Result<Option<MatQ>> {
        if self.cols != b.cols {
            return Err(Error::DimensionMismatch(format!(
                "solve_left: {}x{} against {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        Ok(self
            .transpose()
            .solve_right(&b.transpose())?
            .map(|x| x.transpose()))
    }

    /// Basis of the right kernel, one column vector per free variable.
    pub fn nullspace(&self) -> Vec<MatQ> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = MatQ::zeros(self.cols, 1);
                v[(f, 0)] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[(p, 0)] = -red[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("det of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut m = self.clone();
        let mut sign = Rational::one();
        let mut prev = Rational::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return Ok(Rational::zero());
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
                m[(i, k)] = Rational::zero();
            }
            prev = m[(k, k)].clone();
        }
        Ok(sign * &m[(n - 1, n - 1)])
    }

    pub fn inverse(&self) -> Option<MatQ> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = MatQ::hstack(&[self, &MatQ::identity(n)]).ok()?;
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(red.submatrix(0..n, n..2 * n))
    }

    /// Extends the given independent row vectors to a basis of `K^n` with unit
    /// rows, returning the chosen unit indices.
    pub fn complete_rows(rows: &[MatQ], n: usize) -> Vec<usize> {
        let mut current: Vec<MatQ> = rows.to_vec();
        let mut chosen = Vec::new();
        for i in 0..n {
            if current.len() == n {
                break;
            }
            let mut trial = current.clone();
            trial.push(MatQ::unit_row(n, i));
            let refs: Vec<&MatQ> = trial.iter().collect();
            if MatQ::vstack(&refs).map(|m| m.rank()).unwrap_or(0) == trial.len() {
                current = trial;
                chosen.push(i);
            }
        }
        chosen
    }
}

/// Row-echelon store for growing a basis one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct IncrementalBasis {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl IncrementalBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut r = v.to_vec();
        for (p, row) in &self.rows {
            if r[*p].is_zero() {
                continue;
            }
            let f = r[*p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` if it is independent of the current span; returns whether it was added.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        let r: Vec<Rational> = r.iter().map(|x| x * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

/// `Σ_n`, the permutation matrix reversing the order of `n` coordinates.
pub fn reversal_matrix(n: usize) -> MatQ {
    let mut m = MatQ::zeros(n, n);
    for i in 0..n {
        m[(i, n - 1 - i)] = Rational::one();
    }
    m
}

impl Index<(usize, usize)> for MatQ {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for MatQ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &MatQ {
    type Output = MatQ;
    fn mul(self, rhs: &MatQ) -> MatQ {
        self.checked_mul(rhs).expect("matrix product dimensions")
    }
}

impl Add for &MatQ {
    type Output = MatQ;
    fn add(self, rhs: &MatQ) -> MatQ {
        self.checked_add(rhs).expect("matrix sum dimensions")
    }
}

impl Sub for &MatQ {
    type Output = MatQ;
    fn sub(self, rhs: &MatQ) -> MatQ {
        self + &(-rhs)
    }
}

impl Neg for &MatQ {
    type Output = MatQ;
    fn neg(self) -> MatQ {
        MatQ {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Debug for MatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatQ{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for MatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .to_rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| if x.is_zero() { ".".to_string() } else { x.to_string() })
                    .collect()
            })
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", padded.join("  "))?;
        }
        Ok(())
    }
}

impl Serialize for MatQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .to_rows()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        MatQ::from_rows(parsed).map_err(D::Error::custom)
    }
}

/// True if `r` is an integer with absolute value at most `bound`.
pub fn is_small_integer(r: &Rational, bound: i64) -> bool {
    r.is_integer() && r.numer().abs() <= BigInt::from(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat_strategy(rows: usize, cols: usize) -> impl Strategy<Value = MatQ> {
        proptest::collection::vec(-4i64..=4, rows * cols)
            .prop_map(move |v| MatQ::from_vec(rows, cols, v.into_iter().map(q).collect()).unwrap())
    }

    /// Cofactor expansion; exponential, only for tiny matrices.
    fn det_by_expansion(m: &MatQ) -> Rational {
        let n = m.rows();
        if n == 0 {
            return Rational::one();
        }
        let mut total = Rational::zero();
        for j in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = m.select(&(1..n).collect::<Vec<_>>(), &rest);
            let term = &m[(0, j)] * det_by_expansion(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn rref_identity() {
        let (r, p) = MatQ::identity(2).rref();
        assert_eq!(r, MatQ::identity(2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one() {
        let (r, p) = MatQ::from_i64(&[&[2, 4], &[1, 2]]).rref();
        assert_eq!(r, MatQ::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_invertible_is_identity() {
        let m = MatQ::from_i64(&[&[2, 1, 0, 3], &[1, -1, 2, 0], &[0, 4, 1, 1], &[3, 0, 0, 2]]);
        assert!(!det_by_expansion(&m).is_zero());
        assert_eq!(m.rref().0, MatQ::identity(4));
    }

    #[test]
    fn solve_left_identity_and_inconsistent() {
        let b = MatQ::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(MatQ::identity(2).solve_left(&b).unwrap(), Some(b));
        let z = MatQ::zeros(2, 2);
        assert_eq!(z.solve_left(&MatQ::identity(2)).unwrap(), None);
        assert!(z.solve_left(&MatQ::zeros(1, 3)).is_err());
    }

    #[test]
    fn reversal_small() {
        assert_eq!(reversal_matrix(1), MatQ::identity(1));
        assert_eq!(reversal_matrix(2), MatQ::from_i64(&[&[0, 1], &[1, 0]]));
        let s = reversal_matrix(3);
        assert_eq!(&s * &s, MatQ::identity(3));
    }

    #[test]
    fn nullspace_vectors_are_in_kernel() {
        let m = MatQ::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((&m * &v).is_zero());
        }
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&qf(-6, 4)), "-3/2");
        assert_eq!(format_rational(&q(5)), "5");
        assert_eq!(parse_rational(" -3/2 ").unwrap(), qf(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    proptest! {
        #[test]
        fn rref_idempotent(m in mat_strategy(3, 4)) {
            let (r, _) = m.rref();
            prop_assert_eq!(r.rref().0, r);
        }

        #[test]
        fn det_multiplicative(a in mat_strategy(4, 4), b in mat_strategy(4, 4)) {
            let lhs = a.det().unwrap() * b.det().unwrap();
            prop_assert_eq!(lhs, (&a * &b).det().unwrap());
        }

        #[test]
        fn det_matches_expansion(a in mat_strategy(4, 4)) {
            prop_assert_eq!(a.det().unwrap(), det_by_expansion(&a));
        }

        #[test]
        fn solve_left_exact(a in mat_strategy(3, 4), t in mat_strategy(2, 3)) {
            let b = &t * &a;
            let sol = a.solve_left(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(&sol * &a, b);
        }

        #[test]
        fn inverse_roundtrip(a in mat_strategy(3, 3)) {
            match a.inverse() {
                Some(inv) => prop_assert_eq!(&a * &inv, MatQ::identity(3)),
                None => prop_assert!(a.det().unwrap().is_zero()),
            }
        }
    }
}
