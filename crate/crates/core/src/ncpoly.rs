//! Words over a finite alphabet, noncommutative polynomials and truncated
//! power series.
//!
//! Letters are 0-based indices internally; the alphabet only matters for
//! printing.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::qlinalg::Rational;

/// A word in the free monoid. Ordered length-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    /// All words of exactly length `len` over `d` letters, in order.
    pub fn all_of_length(d: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| (0..d).map(move |x| word_concat(&w, &Word::letter(x))))
                .collect();
        }
        out
    }

    /// All words of length at most `len`, in order.
    pub fn all_up_to(d: usize, len: usize) -> Vec<Word> {
        (0..=len).flat_map(|l| Word::all_of_length(d, l)).collect()
    }

    pub fn display(&self, letters: &[String]) -> String {
        if self.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&i| letters.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1)))
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

pub fn word_concat(a: &Word, b: &Word) -> Word {
    let mut v = a.0.clone();
    v.extend_from_slice(&b.0);
    Word(v)
}

fn add_term(terms: &mut BTreeMap<Word, Rational>, w: Word, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn format_terms(terms: &BTreeMap<Word, Rational>, letters: &[String]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(w, c)| {
            if w.is_empty() {
                c.to_string()
            } else if c.is_one() {
                w.display(letters)
            } else if *c == -Rational::one() {
                format!("-{}", w.display(letters))
            } else {
                format!("{}*{}", c, w.display(letters))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Element of the free associative algebra over `d` letters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NCPolynomial {
    d: usize,
    terms: BTreeMap<Word, Rational>,
}

impl NCPolynomial {
    pub fn zero(d: usize) -> Self {
        NCPolynomial { d, terms: BTreeMap::new() }
    }

    pub fn constant(d: usize, c: Rational) -> Self {
        Self::monomial(d, Word::empty(), c)
    }

    pub fn letter(d: usize, i: usize) -> Self {
        Self::monomial(d, Word::letter(i), Rational::one())
    }

    pub fn monomial(d: usize, w: Word, c: Rational) -> Self {
        let mut p = Self::zero(d);
        add_term(&mut p.terms, w, c);
        p
    }

    pub fn from_terms(d: usize, terms: impl IntoIterator<Item = (Word, Rational)>) -> Self {
        let mut p = Self::zero(d);
        for (w, c) in terms {
            add_term(&mut p.terms, w, c);
        }
        p
    }

    pub fn alphabet_size(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> &BTreeMap<Word, Rational> {
        &self.terms
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    /// Largest word in length-lex order together with its coefficient.
    pub fn leading(&self) -> Option<(&Word, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (w, c) in &other.terms {
            add_term(&mut p.terms, w.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.d, self.terms.iter().map(|(w, x)| (w.clone(), x * c)))
    }

    pub fn to_series(&self, order: usize) -> TruncatedSeries {
        TruncatedSeries::from_terms(
            self.d,
            order,
            self.terms.iter().map(|(w, c)| (w.clone(), c.clone())),
        )
    }

    pub fn display(&self, letters: &[String]) -> String {
        format_terms(&self.terms, letters)
    }
}

/// Bilinear extension of concatenation.
pub fn poly_mul(p: &NCPolynomial, q: &NCPolynomial) -> NCPolynomial {
    let mut out = NCPolynomial::zero(p.d.max(q.d));
    for (u, a) in &p.terms {
        for (v, b) in &q.terms {
            add_term(&mut out.terms, word_concat(u, v), a * b);
        }
    }
    out
}

/// Finds `h` with `q = p * h`.
///
/// Length-lex order is multiplicative, so the leading word of `p * h` is the
/// concatenation of the leading words; peeling off leading terms recovers `h`
/// or shows that no such polynomial exists.
pub fn poly_left_divide(p: &NCPolynomial, q: &NCPolynomial) -> Option<NCPolynomial> {
    let (lw, lc) = p.leading()?;
    let (lw, lc) = (lw.clone(), lc.clone());
    let mut rest = q.clone();
    let mut h = NCPolynomial::zero(p.d.max(q.d));
    while let Some((w, c)) = rest.leading() {
        if !w.0.starts_with(&lw.0) {
            return None;
        }
        let tail = Word(w.0[lw.len()..].to_vec());
        let coef = c / &lc;
        let step = NCPolynomial::monomial(h.d, tail, coef);
        rest = rest.sub(&poly_mul(p, &step));
        h = h.add(&step);
    }
    Some(h)
}

/// Power series truncated after words of length `order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    d: usize,
    order: usize,
    terms: BTreeMap<Word, Rational>,
}

impl TruncatedSeries {
    pub fn zero(d: usize, order: usize) -> Self {
        TruncatedSeries { d, order, terms: BTreeMap::new() }
    }

    pub fn from_terms(
        d: usize,
        order: usize,
        terms: impl IntoIterator<Item = (Word, Rational)>,
    ) -> Self {
        let mut s = Self::zero(d, order);
        for (w, c) in terms {
            if w.len() <= order {
                add_term(&mut s.terms, w, c);
            }
        }
        s
    }

    pub fn constant(d: usize, order: usize, c: Rational) -> Self {
        Self::from_terms(d, order, [(Word::empty(), c)])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet_size(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> &BTreeMap<Word, Rational> {
        &self.terms
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// First nonzero coefficient in length-lex order.
    pub fn first_nonzero(&self) -> Option<(&Word, &Rational)> {
        self.terms.iter().next()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_terms(
            self.d,
            order.min(self.order),
            self.terms.iter().map(|(w, c)| (w.clone(), c.clone())),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut s = self.truncate(order);
        for (w, c) in &other.terms {
            if w.len() <= order {
                add_term(&mut s.terms, w.clone(), c.clone());
            }
        }
        s
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.d, self.order, self.terms.iter().map(|(w, x)| (w.clone(), x * c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut s = Self::zero(self.d.max(other.d), order);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() <= order {
                    add_term(&mut s.terms, word_concat(u, v), a * b);
                }
            }
        }
        s
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(&Word::empty());
        if c0.is_zero() {
            return Err(Error::InversionAtZero);
        }
        let inv0 = c0.recip();
        let mut g: BTreeMap<Word, Rational> = BTreeMap::new();
        g.insert(Word::empty(), inv0.clone());
        for w in Word::all_up_to(self.d, self.order).into_iter().skip(1) {
            // g(w) = -(1/c0) * sum over w = u v with u nonempty of f(u) g(v)
            let mut acc = Rational::zero();
            for split in 1..=w.len() {
                let u = Word(w.0[..split].to_vec());
                if let Some(fu) = self.terms.get(&u) {
                    let v = Word(w.0[split..].to_vec());
                    if let Some(gv) = g.get(&v) {
                        acc += fu * gv;
                    }
                }
            }
            if !acc.is_zero() {
                g.insert(w, -acc * &inv0);
            }
        }
        Ok(Self::from_terms(self.d, self.order, g))
    }

    pub fn display(&self, letters: &[String]) -> String {
        format_terms(&self.terms, letters)
    }
}

/// Power series expansion of an expression up to words of length `order`.
pub fn series_eval(expr: &Expr, d: usize, order: usize) -> Result<TruncatedSeries> {
    Ok(match expr {
        Expr::Const(c) => TruncatedSeries::constant(d, order, c.clone()),
        Expr::Letter(i) => TruncatedSeries::from_terms(d, order, [(Word::letter(*i), Rational::one())]),
        Expr::Neg(a) => series_eval(a, d, order)?.scale(&-Rational::one()),
        Expr::Sum(a, b) => series_eval(a, d, order)?.add(&series_eval(b, d, order)?),
        Expr::Product(a, b) => series_eval(a, d, order)?.mul(&series_eval(b, d, order)?),
        Expr::Inverse(a) => series_eval(a, d, order)?.inverse()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{q, MatQ};
    use proptest::prelude::*;

    fn p(terms: &[(&[usize], i64)]) -> NCPolynomial {
        NCPolynomial::from_terms(3, terms.iter().map(|(w, c)| (Word(w.to_vec()), q(*c))))
    }

    fn letters() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    /// Division oracle through an explicit linear system on coefficient vectors.
    fn divide_by_linear_system(p: &NCPolynomial, q: &NCPolynomial) -> Option<NCPolynomial> {
        let d = 3;
        let dq = q.degree().unwrap_or(0);
        let dp = p.degree()?;
        if q.is_zero() {
            return Some(NCPolynomial::zero(d));
        }
        if dq < dp {
            return None;
        }
        let unknowns = Word::all_up_to(d, dq - dp);
        let rows = Word::all_up_to(d, dq);
        let idx: BTreeMap<Word, usize> = rows.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut a = MatQ::zeros(rows.len(), unknowns.len());
        for (j, u) in unknowns.iter().enumerate() {
            for (w, c) in p.terms() {
                a[(idx[&word_concat(w, u)], j)] += c.clone();
            }
        }
        let mut b = MatQ::zeros(rows.len(), 1);
        for (w, c) in q.terms() {
            b[(idx[w], 0)] = c.clone();
        }
        let x = a.solve_right(&b).unwrap()?;
        Some(NCPolynomial::from_terms(
            d,
            unknowns.iter().enumerate().map(|(j, u)| (u.clone(), x[(j, 0)].clone())),
        ))
    }

    fn poly_strategy() -> impl Strategy<Value = NCPolynomial> {
        proptest::collection::vec((proptest::collection::vec(0usize..3, 0..=3), -3i64..=3), 1..=4)
            .prop_map(|ts| NCPolynomial::from_terms(3, ts.into_iter().map(|(w, c)| (Word(w), q(c)))))
    }

    #[test]
    fn concat() {
        assert_eq!(word_concat(&Word(vec![0, 1]), &Word(vec![2])), Word(vec![0, 1, 2]));
        assert_eq!(word_concat(&Word::empty(), &Word(vec![1])), Word(vec![1]));
    }

    #[test]
    fn word_order_is_length_lex() {
        assert!(Word(vec![2]) < Word(vec![0, 0]));
        assert!(Word(vec![0, 1]) < Word(vec![1, 0]));
        assert_eq!(Word::all_up_to(3, 2).len(), 13);
    }

    #[test]
    fn telescoping() {
        let a = p(&[(&[], 1), (&[0], -1)]);
        let b = p(&[(&[], 1), (&[0], 1), (&[0, 0], 1)]);
        assert_eq!(poly_mul(&a, &b), p(&[(&[], 1), (&[0, 0, 0], -1)]));
    }

    #[test]
    fn noncommutative() {
        let x = NCPolynomial::letter(3, 0);
        let y = NCPolynomial::letter(3, 1);
        assert_ne!(poly_mul(&x, &y), poly_mul(&y, &x));
        let xyz = poly_mul(&poly_mul(&x, &y), &NCPolynomial::letter(3, 2));
        assert_eq!(xyz.coeff(&Word(vec![0, 1, 2])), q(1));
        assert_eq!(xyz.terms().len(), 1);
    }

    #[test]
    fn geometric_series() {
        let e = Expr::parse("(1-x)^-1", &letters()).unwrap();
        let s = series_eval(&e, 3, 3).unwrap();
        let want = TruncatedSeries::from_terms(3, 3, (0..=3).map(|k| (Word(vec![0; k]), q(1))));
        assert_eq!(s, want);
        let e = Expr::parse("x^-1", &letters()).unwrap();
        assert_eq!(series_eval(&e, 3, 3), Err(Error::InversionAtZero));
    }

    #[test]
    fn product_of_inverses_matches_convolution() {
        let e = Expr::parse("(1-x*y)^-1*(1-z*y)^-1", &letters()).unwrap();
        let s = series_eval(&e, 3, 4).unwrap();
        // (xy)^i (zy)^j for 2i + 2j <= 4, each with coefficient one
        let mut want = TruncatedSeries::zero(3, 4);
        for i in 0..=2usize {
            for j in 0..=(2 - i) {
                let mut w = Vec::new();
                for _ in 0..i {
                    w.extend([0, 1]);
                }
                for _ in 0..j {
                    w.extend([2, 1]);
                }
                want = want.add(&TruncatedSeries::from_terms(3, 4, [(Word(w), q(1))]));
            }
        }
        assert_eq!(s, want);
    }

    #[test]
    fn left_divide_examples() {
        let x = p(&[(&[0], 1)]);
        assert_eq!(poly_left_divide(&x, &p(&[(&[0, 1], 1)])), Some(p(&[(&[1], 1)])));
        assert_eq!(poly_left_divide(&x, &p(&[(&[], 1), (&[0], -1)])), None);
        let a = p(&[(&[], 1), (&[0, 1], -1)]);
        let h = p(&[(&[], 1), (&[2], 1)]);
        let prod = poly_mul(&a, &h);
        let got = poly_left_divide(&a, &prod).unwrap();
        assert_eq!(poly_mul(&a, &got), prod);
        assert_eq!(got, h);
    }

    #[test]
    fn text_form() {
        let a = p(&[(&[], 1), (&[0, 1], -1), (&[2], 3)]);
        assert_eq!(a.display(&letters()), "1 + 3*z + -x*y");
    }

    proptest! {
        #[test]
        fn mul_associative_distributive(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
            prop_assert_eq!(poly_mul(&poly_mul(&a, &b), &c), poly_mul(&a, &poly_mul(&b, &c)));
            prop_assert_eq!(poly_mul(&a, &b.add(&c)), poly_mul(&a, &b).add(&poly_mul(&a, &c)));
        }

        #[test]
        fn series_of_product(a in poly_strategy(), b in poly_strategy()) {
            let order = 5;
            let prod = poly_mul(&a, &b).to_series(order);
            prop_assert_eq!(a.to_series(order).mul(&b.to_series(order)), prod);
        }

        #[test]
        fn divide_recovers_cofactor(a in poly_strategy(), h in poly_strategy()) {
            prop_assume!(!a.is_zero());
            let prod = poly_mul(&a, &h);
            prop_assert_eq!(poly_left_divide(&a, &prod), Some(h));
        }

        #[test]
        fn divide_agrees_with_linear_system(a in poly_strategy(), b in poly_strategy()) {
            prop_assert_eq!(poly_left_divide(&a, &b), divide_by_linear_system(&a, &b));
        }

        #[test]
        fn inverse_times_self(a in poly_strategy(), c in 1i64..4) {
            let s = a.add(&NCPolynomial::constant(3, q(c) - a.coeff(&Word::empty()))).to_series(4);
            let inv = s.inverse().unwrap();
            prop_assert_eq!(s.mul(&inv), TruncatedSeries::constant(3, 4, q(1)));
        }
    }
}
