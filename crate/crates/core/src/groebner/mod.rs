//! Commutative polynomials over the rationals, Gröbner bases and rational
//! solutions of the (small) systems arising from block-zeroing
//! transformations.

mod buchberger;
mod packed;
mod solve;

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::qlinalg::{format_rational, Rational};

pub use buchberger::{buchberger, interreduce, is_trivial_ideal, normal_form, s_polynomial, GroebnerBasis, GroebnerBudget};
pub use solve::{extract_rational_solution, rational_roots, univariate_gcd, SolveBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &CommMonomial, b: &CommMonomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::DegRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// Exponent vector; variable 0 is the largest in lex order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CommMonomial(pub Vec<u32>);

impl CommMonomial {
    pub fn one(nvars: usize) -> Self {
        CommMonomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        CommMonomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        CommMonomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient(&self, other: &Self) -> Self {
        CommMonomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, other: &Self) -> Self {
        CommMonomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Single variable of degree one.
    pub fn as_variable(&self) -> Option<usize> {
        if self.degree() != 1 {
            return None;
        }
        self.0.iter().position(|&e| e == 1)
    }

    pub fn variables(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }

    pub fn display(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| if *e == 1 { vars[i].clone() } else { format!("{}^{}", vars[i], e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommPolynomial {
    nvars: usize,
    terms: BTreeMap<CommMonomial, Rational>,
}

impl CommPolynomial {
    pub fn zero(nvars: usize) -> Self {
        CommPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_terms(nvars, [(CommMonomial::one(nvars), c)])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_terms(nvars, [(CommMonomial::var(nvars, i), Rational::one())])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (CommMonomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: CommMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<CommMonomial, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.iter().next().filter(|(m, _)| m.is_one()).map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(CommMonomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.variables().collect::<Vec<_>>()).collect()
    }

    pub fn leading(&self, order: MonomialOrder) -> Option<(&CommMonomial, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        CommPolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }

    /// Substitutes the assigned variables; unassigned ones stay symbolic.
    pub fn substitute(&self, values: &[Option<Rational>]) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut e = m.0.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    if e[i] > 0 {
                        coef *= num_traits::pow(v.clone(), e[i] as usize);
                        e[i] = 0;
                    }
                }
            }
            p.add_term(CommMonomial(e), coef);
        }
        p
    }

    pub fn evaluate(&self, values: &[Rational]) -> Rational {
        let vals: Vec<Option<Rational>> = values.iter().cloned().map(Some).collect();
        self.substitute(&vals).as_constant().expect("all variables assigned")
    }

    /// Coefficients of a polynomial in the single variable `i`, lowest degree
    /// first, or `None` if other variables occur.
    pub fn univariate_coeffs(&self, i: usize) -> Option<Vec<Rational>> {
        let mut out: Vec<Rational> = Vec::new();
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(j, e)| j != i && *e > 0) {
                return None;
            }
            let k = m.0[i] as usize;
            if out.len() <= k {
                out.resize(k + 1, Rational::zero());
            }
            out[k] += c;
        }
        Some(out)
    }

    pub fn display(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut ts: Vec<(&CommMonomial, &Rational)> = self.terms.iter().collect();
        ts.sort_by(|a, b| MonomialOrder::Lex.cmp(b.0, a.0));
        let parts: Vec<String> = ts
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    format_rational(c)
                } else if c.is_one() {
                    m.display(vars)
                } else if **c == -Rational::one() {
                    format!("-{}", m.display(vars))
                } else {
                    format!("{}*{}", format_rational(c), m.display(vars))
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// `[{"monomial": {var: exp}, "coefficient": "p/q"}, ...]`.
    pub fn to_json(&self, vars: &[String]) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: BTreeMap<&str, u32> =
                    m.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, e)| (vars[i].as_str(), *e)).collect();
                json!({"monomial": mono, "coefficient": format_rational(c)})
            })
            .collect();
        serde_json::Value::Array(terms)
    }
}

impl fmt::Display for CommPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i + 1)).collect();
        write!(f, "{}", self.display(&vars))
    }
}

/// Debug dump of a system: variable list and one term list per polynomial.
pub fn system_to_json(polys: &[CommPolynomial], vars: &[String]) -> serde_json::Value {
    json!({
        "variables": vars,
        "polynomials": polys.iter().map(|p| p.to_json(vars)).collect::<Vec<_>>(),
    })
}
