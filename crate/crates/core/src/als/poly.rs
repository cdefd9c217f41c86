use num_traits::{One, Zero};

use super::ops::{als_add, als_mul_type_1star, als_scalar_mul};
use super::{apply_transformation, Als};
use crate::error::Result;
use crate::minimize::{minimize, KrylovSpace};
use crate::ncpoly::{NCPolynomial, Word};
use crate::qlinalg::{IncrementalBasis, MatQ, Rational};

use super::Side;

fn word_als(d: usize, w: &Word) -> Result<Als> {
    let mut acc = Als::scalar(d, Rational::one());
    for &x in w.letters().iter().rev() {
        acc = als_mul_type_1star(&Als::letter(d, x), &acc)?;
    }
    Ok(acc)
}

/// Upper unitriangular system with right hand side `lambda e_n`.
pub fn is_polynomial_form(f: &Als) -> bool {
    let n = f.dim();
    for i in 0..n {
        for j in 0..=i {
            let want = if i == j { Rational::one() } else { Rational::zero() };
            if f.a(0)[(i, j)] != want || !f.pencil.entry_is_scalar(i, j) {
                return false;
            }
        }
    }
    (0..n.saturating_sub(1)).all(|i| f.v[(i, 0)].is_zero())
}

/// Minimal polynomial-form system for `p`.
pub fn als_from_polynomial(p: &NCPolynomial) -> Result<Als> {
    let d = p.alphabet_size();
    let mut acc = Als::zero(d);
    for (w, c) in p.terms().iter().rev() {
        acc = als_add(&acc, &als_scalar_mul(&word_als(d, w)?, c))?;
    }
    let m = minimize(&acc)?;
    to_polynomial_form(&m)
}

/// Rewrites a minimal system with `A_0 = I` and nilpotent letter maps in the
/// basis adapted to `W_k = span{N_w b : |w| >= k}`.
fn to_polynomial_form(m: &Als) -> Result<Als> {
    let n = m.dim();
    if n == 0 || is_polynomial_form(m) {
        return Ok(m.clone());
    }
    let (ns, b) = m.series_representation()?;
    let mut levels: Vec<Vec<MatQ>> = Vec::new();
    let mut frontier = vec![b.clone()];
    while !frontier.is_empty() {
        let space = KrylovSpace::closure(&frontier, &ns, Side::Left);
        if space.dim() == 0 {
            break;
        }
        levels.push(space.basis);
        let mut span = IncrementalBasis::new();
        frontier = frontier
            .iter()
            .flat_map(|v| ns.iter().map(move |x| x * v))
            .filter(|w| span.insert(w.entries()))
            .collect();
        if levels.len() > n + 1 {
            break;
        }
    }
    let mut ech = IncrementalBasis::new();
    let mut basis: Vec<MatQ> = Vec::new();
    for (k, level) in levels.iter().enumerate().rev() {
        let mut cands = level.clone();
        if k + 1 == levels.len() {
            // deepest level first, starting with a vector that u sees
            if let Some(pos) = cands.iter().position(|v| !v[(0, 0)].is_zero()) {
                cands.swap(0, pos);
            }
        }
        if k == 0 {
            cands = vec![b.clone()];
        }
        for v in cands {
            if ech.insert(v.entries()) {
                basis.push(v);
            }
        }
    }
    let refs: Vec<&MatQ> = basis.iter().collect();
    let bm = MatQ::hstack(&refs)?;
    let binv = bm.inverse().expect("adapted basis");
    let u1 = bm[(0, 0)].clone();
    let mut qfix = MatQ::identity(n);
    qfix[(0, 0)] = u1.recip();
    for j in 1..n {
        qfix[(0, j)] = -(&bm[(0, j)] / &u1);
    }
    let mut pfix = MatQ::identity(n);
    pfix[(0, 0)] = u1;
    apply_transformation(m, &(&pfix * &binv), &(&bm * &qfix))
}

/// The polynomial represented by `f`, if `f` represents one.
pub fn polynomial_of(f: &Als) -> Result<Option<NCPolynomial>> {
    let d = f.d();
    let m = minimize(f)?;
    let n = m.dim();
    if n == 0 {
        return Ok(Some(NCPolynomial::zero(d)));
    }
    if !m.is_regular_at_zero() {
        return Ok(None);
    }
    // minimal and observable: all length-n coefficients vanish iff the letter
    // maps are jointly nilpotent
    let s = m.series_expand(n)?;
    if s.terms().keys().any(|w| w.len() == n) {
        return Ok(None);
    }
    Ok(Some(NCPolynomial::from_terms(d, s.terms().iter().map(|(w, c)| (w.clone(), c.clone())))))
}
