//! Minimization, rank and element types for elements that are regular at some
//! rational point.
//!
//! The system is shifted to a point `eps` where `A(eps)` is invertible, turned
//! into the series form `c (I - sum N_x x)^{-1} b`, reduced to its reachable
//! and then observable part, and turned back into a pencil.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::als::{
    als_add, als_inverse, als_scalar_mul, normalize_type_11, normalize_type_1star,
    normalize_type_star1, Als, ElementType, LinearPencil, Side,
};
use crate::error::{Error, Result};
use crate::qlinalg::{q, IncrementalBasis, MatQ, Rational};

pub const DEFAULT_SEED: u64 = 0x5eed_f1e1d;

const RANDOM_SAMPLES: usize = 200;

/// Substitution point `x_i -> x_i + eps_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShiftPoint {
    pub epsilon: Vec<Rational>,
}

impl ShiftPoint {
    pub fn zero(d: usize) -> Self {
        ShiftPoint { epsilon: vec![Rational::zero(); d] }
    }

    pub fn is_zero(&self) -> bool {
        self.epsilon.iter().all(Zero::is_zero)
    }
}

/// Span of family coefficient vectors, closed under the letter maps.
#[derive(Clone, Debug)]
pub struct KrylovSpace {
    pub basis: Vec<MatQ>,
    pub side: Side,
}

impl KrylovSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Closure of `start` under `v -> M v` (left, columns) or `v -> v M`
    /// (right, rows). Basis vectors are kept in discovery order.
    pub fn closure(start: &[MatQ], maps: &[MatQ], side: Side) -> Self {
        let mut ech = IncrementalBasis::new();
        let mut basis: Vec<MatQ> = Vec::new();
        for s in start {
            if ech.insert(s.entries()) {
                basis.push(s.clone());
            }
        }
        let mut next = 0;
        while next < basis.len() {
            let v = basis[next].clone();
            next += 1;
            for m in maps {
                let w = match side {
                    Side::Left => m * &v,
                    Side::Right => &v * m,
                };
                if ech.insert(w.entries()) {
                    basis.push(w);
                }
            }
        }
        KrylovSpace { basis, side }
    }

    /// Basis as a matrix: columns for the left side, rows for the right side.
    pub fn matrix(&self, n: usize) -> MatQ {
        let refs: Vec<&MatQ> = self.basis.iter().collect();
        match self.side {
            Side::Left if refs.is_empty() => MatQ::zeros(n, 0),
            Side::Right if refs.is_empty() => MatQ::zeros(0, n),
            Side::Left => MatQ::hstack(&refs).expect("columns of equal length"),
            Side::Right => MatQ::vstack(&refs).expect("rows of equal length"),
        }
    }
}

/// Search order: the origin, then `+e_i, -e_i`, then seeded samples from
/// `{-3, ..., 3}^d`.
pub fn find_regular_point(f: &Als, seed: u64) -> Option<ShiftPoint> {
    let d = f.d();
    if f.dim() == 0 {
        return Some(ShiftPoint::zero(d));
    }
    let regular = |e: &[Rational]| !f.pencil.evaluate(e).det().map(|x| x.is_zero()).unwrap_or(true);
    let mut cands = vec![ShiftPoint::zero(d)];
    for i in 0..d {
        for s in [1, -1] {
            let mut e = ShiftPoint::zero(d);
            e.epsilon[i] = q(s);
            cands.push(e);
        }
    }
    if let Some(p) = cands.into_iter().find(|p| regular(&p.epsilon)) {
        return Some(p);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_SAMPLES {
        let e: Vec<Rational> = (0..d).map(|_| q(rng.gen_range(-3..=3))).collect();
        if regular(&e) {
            return Some(ShiftPoint { epsilon: e });
        }
    }
    None
}

/// `A_0 <- A_0 + sum eps_i A_i`.
pub fn shift(f: &Als, e: &ShiftPoint) -> Als {
    let mut g = f.clone();
    g.pencil.coeffs[0] = f.pencil.evaluate(&e.epsilon);
    g
}

/// Inverse of [`shift`].
pub fn unshift(f: &Als, e: &ShiftPoint) -> Als {
    let neg: Vec<Rational> = e.epsilon.iter().map(|x| -x).collect();
    let mut g = f.clone();
    g.pencil.coeffs[0] = f.pencil.evaluate(&neg);
    g
}

fn regular_point(f: &Als, seed: u64) -> Result<ShiftPoint> {
    find_regular_point(f, seed)
        .ok_or_else(|| Error::Unsupported("no rational point where the system matrix is invertible".into()))
}

pub fn minimize(f: &Als) -> Result<Als> {
    minimize_seeded(f, DEFAULT_SEED)
}

pub fn minimize_seeded(f: &Als, seed: u64) -> Result<Als> {
    let d = f.d();
    if f.dim() == 0 {
        return Ok(Als::zero(d));
    }
    let eps = regular_point(f, seed)?;
    let g = shift(f, &eps);
    let (ns, b) = g.series_representation()?;
    let n = g.dim();

    let reach = KrylovSpace::closure(&[b], &ns, Side::Left);
    if reach.dim() == 0 {
        return Ok(Als::zero(d));
    }
    let r = reach.matrix(n);
    let ns_r: Vec<MatQ> = ns
        .iter()
        .map(|m| r.solve_right(&(m * &r)).ok().flatten().expect("reachable space is invariant"))
        .collect();
    let c_r = &g.u * &r;

    let obs = KrylovSpace::closure(&[c_r], &ns_r, Side::Right);
    if obs.dim() == 0 {
        return Ok(Als::zero(d));
    }
    let o = obs.matrix(r.cols());
    let ns_m: Vec<MatQ> = ns_r
        .iter()
        .map(|m| o.solve_left(&(&o * m)).ok().flatten().expect("unobservable space is invariant"))
        .collect();
    let m = o.rows();
    // b maps to the first reachable basis vector
    let b_m = o.col(0);

    let mut coeffs = vec![MatQ::identity(m)];
    coeffs.extend(ns_m.iter().map(|x| -x));
    let min = Als::new(LinearPencil { coeffs }, b_m)?;
    Ok(unshift(&min, &eps))
}

/// Dimension of a minimal system.
pub fn rank(f: &Als) -> Result<usize> {
    Ok(minimize(f)?.dim())
}

/// Dimensions of the left and right Krylov spaces of `f` at a regular point;
/// both equal `dim f` exactly when `f` is minimal.
pub fn krylov_dimensions(f: &Als) -> Result<(usize, usize)> {
    if f.dim() == 0 {
        return Ok((0, 0));
    }
    let eps = regular_point(f, DEFAULT_SEED)?;
    let g = shift(f, &eps);
    let (ns, b) = g.series_representation()?;
    let m = g.a(0).inverse().ok_or(Error::NotRegularAtZero)?;
    let ms: Vec<MatQ> = g.pencil.coeffs[1..].iter().map(|a| -&(a * &m)).collect();
    let left = KrylovSpace::closure(&[b], &ns, Side::Left).dim();
    let right = KrylovSpace::closure(&[&g.u * &m], &ms, Side::Right).dim();
    Ok((left, right))
}

/// Row vector `kappa` with `kappa s = 1` for the left family `s`, if any.
/// `f` should be minimal.
pub fn kappa_left(f: &Als) -> Result<Option<MatQ>> {
    let n = f.dim();
    if n == 0 {
        return Ok(None);
    }
    let eps = regular_point(f, DEFAULT_SEED)?;
    let g = shift(f, &eps);
    let (ns, b) = g.series_representation()?;
    let starts: Vec<MatQ> = ns.iter().map(|m| m * &b).collect();
    let rest = KrylovSpace::closure(&starts, &ns, Side::Left);
    let mut cols = vec![b];
    cols.extend(rest.basis);
    let refs: Vec<&MatQ> = cols.iter().collect();
    let a = MatQ::hstack(&refs)?;
    a.solve_left(&MatQ::unit_row(cols.len(), 0))
}

/// Column vector `kappa` with `t kappa = 1` for the right family `t`, if any.
pub fn kappa_right(f: &Als) -> Result<Option<MatQ>> {
    let n = f.dim();
    if n == 0 {
        return Ok(None);
    }
    let eps = regular_point(f, DEFAULT_SEED)?;
    let g = shift(f, &eps);
    let m = g.a(0).inverse().ok_or(Error::NotRegularAtZero)?;
    let ms: Vec<MatQ> = g.pencil.coeffs[1..].iter().map(|a| -&(a * &m)).collect();
    let t1 = &g.u * &m;
    let starts: Vec<MatQ> = ms.iter().map(|x| &t1 * x).collect();
    let rest = KrylovSpace::closure(&starts, &ms, Side::Right);
    let mut rows = vec![t1];
    rows.extend(rest.basis);
    let refs: Vec<&MatQ> = rows.iter().collect();
    let a = MatQ::vstack(&refs)?;
    a.solve_right(&MatQ::unit_col(rows.len(), 0))
}

/// Type of a system assumed minimal.
pub fn type_of_minimal(f: &Als) -> Result<ElementType> {
    Ok(ElementType::new(kappa_right(f)?.is_some(), kappa_left(f)?.is_some()))
}

/// Type of the element; minimizes first.
pub fn type_of(f: &Als) -> Result<ElementType> {
    type_of_minimal(&minimize(f)?)
}

pub fn is_zero(f: &Als) -> Result<bool> {
    Ok(rank(f)? == 0)
}

/// Nonzero scalar: rank one for the element and its inverse.
pub fn is_scalar(f: &Als) -> Result<bool> {
    let m = minimize(f)?;
    if m.dim() != 1 {
        return Ok(false);
    }
    Ok(rank(&crate::als::als_inverse_general(&m)?)? == 1)
}

/// Value of a scalar element, if it is one.
pub fn scalar_value(f: &Als) -> Result<Option<Rational>> {
    if !is_scalar(f)? {
        return Ok(None);
    }
    let m = minimize(f)?;
    // a 1x1 system a s = lambda with a scalar after minimization
    Ok(Some(&m.v[(0, 0)] / &m.a(0)[(0, 0)]))
}

/// Scales `f` so that the first nonzero coefficient (length-lex) of its
/// series at the regular point of a minimal system is 1. Returns the
/// minimal normalized system and the factor `c` with `f = c * result`.
pub fn scalar_normalize(f: &Als) -> Result<(Als, Rational)> {
    let m = minimize(f)?;
    let n = m.dim();
    if n == 0 {
        return Err(Error::ZeroInverse);
    }
    let eps = regular_point(&m, DEFAULT_SEED)?;
    let s = shift(&m, &eps).series_expand(n)?;
    let c = s.first_nonzero().map(|(_, c)| c.clone()).expect("nonzero element of rank n has a coefficient below length n");
    Ok((als_scalar_mul(&m, &c.recip()), c))
}

/// `f = g` as elements.
pub fn equal(f: &Als, g: &Als) -> Result<bool> {
    is_zero(&als_add(f, &als_scalar_mul(g, &q(-1)))?)
}

/// Minimal system for `f^{-1}`: minimize, detect the type, bring into normal
/// form and apply the matching inverse construction.
pub fn invert(f: &Als) -> Result<Als> {
    let m = minimize(f)?;
    if m.dim() == 0 {
        return Err(Error::ZeroInverse);
    }
    if m.dim() == 1 {
        return als_inverse(&m, ElementType::new(false, false));
    }
    let t = type_of_minimal(&m)?;
    if t.right_flag && t.left_flag {
        // 1 in both families does not guarantee a system with both forms
        if let Ok((g, _, _)) = normalize_type_11(&m) {
            return als_inverse(&g, t);
        }
        let g = normalize_type_1star(&m)?.0;
        return minimize(&als_inverse(&g, ElementType::new(true, false))?);
    }
    let normal = match (t.right_flag, t.left_flag) {
        (true, false) => normalize_type_1star(&m)?.0,
        (false, true) => normalize_type_star1(&m)?.0,
        _ => m,
    };
    als_inverse(&normal, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::als::{als_mul_general, Als};
    use crate::eval::eval_str;

    fn e(s: &str) -> Als {
        eval_str(s, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn normalization_removes_units() {
        let (f, c) = scalar_normalize(&e("-3*(1 - x*y)^-1")).unwrap();
        assert_eq!(c, q(-3));
        assert!(equal(&f, &e("(1 - x*y)^-1")).unwrap());
        let (g, c) = scalar_normalize(&e("2*x^-1")).unwrap();
        let (h, _) = scalar_normalize(&e("x^-1*(1/5)")).unwrap();
        assert!(equal(&g, &h).unwrap());
        assert!(!c.is_zero());
        assert!(scalar_normalize(&e("x - x")).is_err());
    }

    #[test]
    fn regular_point_order() {
        assert_eq!(find_regular_point(&e("1 - x*y"), 1), Some(ShiftPoint::zero(3)));
        let xi = Als::from_entries(3, &[vec![vec![q(0), q(1)]]], vec![q(1)]).unwrap();
        assert_eq!(find_regular_point(&xi, 1).unwrap().epsilon, vec![q(1), q(0), q(0)]);
    }

    #[test]
    fn skew_pencil_has_no_regular_point() {
        // odd-size skew-symmetric pencil: determinant vanishes identically
        let z = vec![q(0)];
        let l = |i: usize, s: i64| {
            let mut v = vec![q(0); i + 2];
            v[i + 1] = q(s);
            v
        };
        let rows = vec![
            vec![z.clone(), l(0, 1), l(1, 1)],
            vec![l(0, -1), z.clone(), l(2, 1)],
            vec![l(1, -1), l(2, -1), z.clone()],
        ];
        let f = Als::from_entries(3, &rows, vec![q(0), q(0), q(1)]).unwrap();
        assert_eq!(find_regular_point(&f, 7), None);
        // independent check over every point of the sample box
        for a in -3..=3 {
            for b in -3..=3 {
                for c in -3..=3 {
                    assert!(f.pencil.evaluate(&[q(a), q(b), q(c)]).det().unwrap().is_zero());
                }
            }
        }
        assert!(matches!(minimize(&f), Err(Error::Unsupported(_))));
    }

    #[test]
    fn shift_roundtrip() {
        let f = e("(1 - x)^-1 + y");
        let p = ShiftPoint { epsilon: vec![q(2), q(-1), q(0)] };
        assert_eq!(unshift(&shift(&f, &p), &p), f);
        assert_eq!(shift(&f, &ShiftPoint::zero(3)), f);
        // x shifted by 1 is the series 1 + x
        let s = shift(&Als::letter(3, 0), &ShiftPoint { epsilon: vec![q(1), q(0), q(0)] });
        assert_eq!(s.series_expand(3).unwrap(), e("1 + x").series_expand(3).unwrap());
    }

    #[test]
    fn ranks() {
        assert_eq!(minimize(&als_mul_general(&Als::letter(3, 0), &Als::letter(3, 1)).unwrap()).unwrap().dim(), 3);
        assert_eq!(rank(&e("x*y*z")).unwrap(), 4);
        assert_eq!(rank(&e("3")).unwrap(), 1);
        assert_eq!(rank(&e("x - x")).unwrap(), 0);
        assert_eq!(rank(&e("(1-z*y)^-1 * (1-x*y)")).unwrap(), 4);
    }

    #[test]
    fn minimal_systems_have_full_krylov_spaces() {
        let f = e("(1-x)^-1 + x^-1 + y*z");
        let m = minimize(&f).unwrap();
        assert_eq!(krylov_dimensions(&m).unwrap(), (m.dim(), m.dim()));
        assert_eq!(minimize(&m).unwrap().dim(), m.dim());
    }

    #[test]
    fn types() {
        assert_eq!(type_of(&e("1 - x*y")).unwrap(), ElementType::new(true, true));
        assert_eq!(type_of(&e("z * x^-1")).unwrap(), ElementType::new(true, false));
        assert_eq!(type_of(&e("x^-1 * z")).unwrap(), ElementType::new(false, true));
        assert_eq!(type_of(&e("x^-1")).unwrap(), ElementType::new(false, false));
        assert!(type_of(&e("x^-1 * (1 - x*z)")).unwrap().right_flag);
    }

    #[test]
    fn units() {
        assert!(is_scalar(&e("x * x^-1")).unwrap());
        assert_eq!(scalar_value(&e("2 * x * x^-1")).unwrap(), Some(q(2)));
        assert!(!is_scalar(&e("x^-1")).unwrap());
        assert_eq!(rank(&e("x^-1")).unwrap(), 1);
        assert_eq!(rank(&invert(&e("x^-1")).unwrap()).unwrap(), 2);
        assert!(is_zero(&e("x - x")).unwrap());
        assert!(equal(&e("(x*y)^-1"), &e("y^-1 * x^-1")).unwrap());
    }
}
