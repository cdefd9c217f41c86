use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{buchberger, CommPolynomial, GroebnerBasis, GroebnerBudget, MonomialOrder};
use crate::error::Result;
use crate::qlinalg::{q, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveBudget {
    /// Maximum number of tentative variable assignments.
    pub max_specializations: usize,
}

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget { max_specializations: 50_000 }
    }
}

const FREE_CANDIDATES: [i64; 5] = [1, -1, 2, 0, -2];
const DIVISOR_SEARCH_LIMIT: u64 = 2_000_000;

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / lb;
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        r = trim(r);
    }
    r
}

/// Monic gcd of univariate polynomials (coefficients lowest degree first);
/// empty for the zero polynomial.
pub fn univariate_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        for c in &mut x {
            *c = &*c / &l;
        }
    }
    x
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return None;
    }
    if let Some(small) = n.to_u64() {
        let mut out = Vec::new();
        let mut d = 1u64;
        while d.saturating_mul(d) <= small {
            if d > DIVISOR_SEARCH_LIMIT {
                return None;
            }
            if small % d == 0 {
                out.push(BigInt::from(d));
                if d != small / d {
                    out.push(BigInt::from(small / d));
                }
            }
            d += 1;
        }
        out.sort();
        return Some(out);
    }
    None
}

fn eval_uni(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Rational roots via the rational root theorem, ascending. Gives up (returns
/// what it has) when the coefficients are too large to factor.
pub fn rational_roots(p: &[Rational]) -> Vec<Rational> {
    let mut p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let mut roots = BTreeSet::new();
    if p[0].is_zero() {
        roots.insert(Rational::zero());
        while p.first().is_some_and(Zero::is_zero) {
            p.remove(0);
        }
    }
    if p.len() > 1 {
        let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        if let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) {
            for a in &ps {
                for b in &qs {
                    for s in [1, -1] {
                        let r = Rational::new(a * s, b.clone());
                        if eval_uni(&p, &r).is_zero() {
                            roots.insert(r);
                        }
                    }
                }
            }
        }
    }
    roots.into_iter().collect()
}

struct Search<'a> {
    n: usize,
    // basis elements grouped by their leading (largest) variable
    levels: Vec<Vec<&'a CommPolynomial>>,
    level_vars: Vec<BTreeSet<usize>>,
    values: Vec<Option<Rational>>,
    steps: usize,
    budget: usize,
}

enum Outcome {
    Found,
    Conflict(BTreeSet<usize>),
    OutOfBudget,
}

impl Search<'_> {
    fn candidates(&self, i: usize) -> std::result::Result<Vec<Rational>, ()> {
        let mut g: Vec<Rational> = Vec::new();
        for p in &self.levels[i] {
            let s = p.substitute(&self.values);
            let u = s.univariate_coeffs(i).expect("only the current variable is left");
            g = univariate_gcd(&g, &u);
            if g.len() == 1 {
                return Err(());
            }
        }
        if g.is_empty() {
            return Ok(FREE_CANDIDATES.iter().map(|&c| q(c)).collect());
        }
        Ok(rational_roots(&g))
    }

    // assigns variables i, i-1, ..., 0
    fn run(&mut self, i: Option<usize>) -> Outcome {
        let Some(i) = i else { return Outcome::Found };
        let next = i.checked_sub(1);
        let own: BTreeSet<usize> = self.level_vars[i].iter().copied().filter(|&v| v != i).collect();
        let cands = match self.candidates(i) {
            Ok(c) => c,
            Err(()) => return Outcome::Conflict(own),
        };
        let mut conflict = own;
        for c in cands {
            self.steps += 1;
            if self.steps > self.budget {
                return Outcome::OutOfBudget;
            }
            self.values[i] = Some(c);
            match self.run(next) {
                Outcome::Found => return Outcome::Found,
                Outcome::OutOfBudget => return Outcome::OutOfBudget,
                Outcome::Conflict(cs) => {
                    if !cs.contains(&i) {
                        self.values[i] = None;
                        return Outcome::Conflict(cs);
                    }
                    conflict.extend(cs.into_iter().filter(|&v| v != i));
                }
            }
        }
        self.values[i] = None;
        Outcome::Conflict(conflict)
    }
}

/// A rational point of the ideal, searched by back substitution in a lex
/// basis: free variables try `0, 1, -1, 2, -2`, constrained ones the rational
/// roots of the gcd of their univariate specializations. `None` means nothing
/// was found within the budget, not that no point exists.
pub fn extract_rational_solution(basis: &GroebnerBasis, budget: SolveBudget) -> Result<Option<Vec<Rational>>> {
    if basis.is_trivial() {
        return Ok(None);
    }
    let lex;
    let basis = if basis.order == MonomialOrder::Lex {
        basis
    } else {
        lex = buchberger(&basis.generators, &basis.vars, MonomialOrder::Lex, GroebnerBudget::default())?;
        &lex
    };
    let n = basis.nvars();
    let mut levels: Vec<Vec<&CommPolynomial>> = vec![Vec::new(); n];
    let mut level_vars = vec![BTreeSet::new(); n];
    for g in &basis.generators {
        if let Some(lead) = g.variables().into_iter().next() {
            levels[lead].push(g);
            level_vars[lead].extend(g.variables());
        }
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut s =
        Search { n, levels, level_vars, values: vec![None; n], steps: 0, budget: budget.max_specializations };
    match s.run(Some(n - 1)) {
        Outcome::Found => {
            let sol: Vec<Rational> = s.values.into_iter().map(|v| v.expect("assigned")).collect();
            debug_assert!(basis.generators.iter().all(|g| g.evaluate(&sol).is_zero()));
            debug_assert_eq!(sol.len(), s.n);
            Ok(Some(sol))
        }
        _ => Ok(None),
    }
}
