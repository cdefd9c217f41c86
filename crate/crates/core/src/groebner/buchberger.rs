use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::packed::{Mono, MAX_EXP, MAX_VARS};
use super::{CommPolynomial, MonomialOrder};
use crate::error::{Error, Result};
use crate::qlinalg::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroebnerBudget {
    /// Maximum number of S-pairs reduced.
    pub max_pairs: usize,
    /// Maximum number of single reduction steps over the whole run.
    pub max_steps: usize,
    /// Largest numerator or denominator allowed in a basis element, in bits.
    pub max_coeff_bits: u64,
}

impl Default for GroebnerBudget {
    fn default() -> Self {
        GroebnerBudget { max_pairs: 20_000, max_steps: 20_000_000, max_coeff_bits: 4096 }
    }
}

/// Reduced Gröbner basis, sorted by decreasing leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub generators: Vec<CommPolynomial>,
    pub order: MonomialOrder,
    pub vars: Vec<String>,
}

impl GroebnerBasis {
    /// Contains a nonzero constant, i.e. the ideal is the whole ring.
    pub fn is_trivial(&self) -> bool {
        self.generators.iter().any(|g| g.as_constant().is_some_and(|c| !c.is_zero()))
    }

    pub fn reduce(&self, p: &CommPolynomial) -> Result<CommPolynomial> {
        normal_form(p, &self.generators, self.order)
    }

    pub fn contains(&self, p: &CommPolynomial) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
}

pub fn is_trivial_ideal(basis: &GroebnerBasis) -> bool {
    basis.is_trivial()
}

// terms in increasing order, leading term last
#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly {
    terms: Vec<(Mono, Rational)>,
}

fn too_large() -> Error {
    Error::BudgetExceeded(format!("more than {MAX_VARS} variables or an exponent above {MAX_EXP}"))
}

impl Poly {
    fn from_ext(p: &CommPolynomial, order: MonomialOrder) -> Result<Self> {
        let mut terms = p
            .terms()
            .iter()
            .map(|(m, c)| Ok((Mono::pack(m).ok_or_else(too_large)?, c.clone())))
            .collect::<Result<Vec<_>>>()?;
        terms.sort_by(|a, b| a.0.cmp_in(&b.0, order));
        Ok(Poly { terms })
    }

    fn to_ext(&self, nvars: usize) -> CommPolynomial {
        CommPolynomial::from_terms(nvars, self.terms.iter().map(|(m, c)| (m.unpack(nvars), c.clone())))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Mono {
        &self.terms.last().expect("nonzero").0
    }

    fn lc(&self) -> &Rational {
        &self.terms.last().expect("nonzero").1
    }

    fn monic(mut self) -> Self {
        if let Some((_, c)) = self.terms.last() {
            if !c.is_one() {
                let inv = c.recip();
                for t in &mut self.terms {
                    t.1 = &t.1 * &inv;
                }
            }
        }
        self
    }

    fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }
}

/// `p - c * m * g`, both sorted increasingly.
fn merge_sub(
    p: &[(Mono, Rational)],
    c: &Rational,
    m: &Mono,
    g: &Poly,
    order: MonomialOrder,
) -> Result<Vec<(Mono, Rational)>> {
    let mut out = Vec::with_capacity(p.len() + g.terms.len());
    let mut i = 0;
    let gt = &g.terms;
    for (gm, gc) in gt {
        let gm = m.mul(gm).ok_or_else(too_large)?;
        while i < p.len() && p[i].0.cmp_in(&gm, order) == Ordering::Less {
            out.push(p[i].clone());
            i += 1;
        }
        if i < p.len() && p[i].0 == gm {
            let v = &p[i].1 - c * gc;
            if !v.is_zero() {
                out.push((gm, v));
            }
            i += 1;
        } else {
            out.push((gm, -(c * gc)));
        }
    }
    out.extend_from_slice(&p[i..]);
    Ok(out)
}

fn find_divisor<'a>(basis: &[&'a Poly], m: &Mono) -> Option<&'a Poly> {
    basis.iter().copied().find(|g| g.lm().divides(m))
}

/// Full reduction of `p` by `basis` (all monic).
fn reduce(p: Poly, basis: &[&Poly], order: MonomialOrder, steps: &mut usize) -> Result<Poly> {
    let mut cur = p.terms;
    let mut rem: Vec<(Mono, Rational)> = Vec::new();
    while let Some((lm, lc)) = cur.last() {
        match find_divisor(basis, lm) {
            Some(g) => {
                if *steps == 0 {
                    return Err(Error::BudgetExceeded("reduction step limit reached".into()));
                }
                *steps -= 1;
                let m = g.lm().quotient(lm);
                let c = lc / g.lc();
                // the leading terms cancel exactly
                let n = cur.len() - 1;
                cur.truncate(n);
                let gtail = Poly { terms: g.terms[..g.terms.len() - 1].to_vec() };
                cur = merge_sub(&cur, &c, &m, &gtail, order)?;
            }
            None => rem.push(cur.pop().unwrap()),
        }
    }
    rem.reverse();
    Ok(Poly { terms: rem })
}

fn spoly(f: &Poly, g: &Poly, order: MonomialOrder) -> Result<Poly> {
    let l = f.lm().lcm(g.lm());
    let mf = f.lm().quotient(&l);
    let mg = g.lm().quotient(&l);
    let (ft, gt) = (&f.terms[..f.terms.len() - 1], &g.terms[..g.terms.len() - 1]);
    let fi = f.lc().recip();
    let fm = ft.iter().map(|(m, c)| Ok((mf.mul(m).ok_or_else(too_large)?, c * &fi))).collect::<Result<Vec<_>>>()?;
    let gtail = Poly { terms: gt.to_vec() };
    Ok(Poly { terms: merge_sub(&fm, &g.lc().recip(), &mg, &gtail, order)? })
}

pub fn normal_form(p: &CommPolynomial, basis: &[CommPolynomial], order: MonomialOrder) -> Result<CommPolynomial> {
    let gs = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| Ok(Poly::from_ext(g, order)?.monic()))
        .collect::<Result<Vec<Poly>>>()?;
    let refs: Vec<&Poly> = gs.iter().collect();
    let mut unlimited = usize::MAX;
    Ok(reduce(Poly::from_ext(p, order)?, &refs, order, &mut unlimited)?.to_ext(p.nvars()))
}

pub fn s_polynomial(f: &CommPolynomial, g: &CommPolynomial, order: MonomialOrder) -> Result<CommPolynomial> {
    Ok(spoly(&Poly::from_ext(f, order)?, &Poly::from_ext(g, order)?, order)?.to_ext(f.nvars()))
}

fn interreduce_int(ps: Vec<Poly>, order: MonomialOrder, steps: &mut usize) -> Result<Vec<Poly>> {
    let mut g: Vec<Poly> = ps.into_iter().filter(|p| !p.is_zero()).map(Poly::monic).collect();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < g.len() {
            let others: Vec<&Poly> = g.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p).collect();
            let r = reduce(g[i].clone(), &others, order, steps)?;
            if r != g[i] {
                changed = true;
                if r.is_zero() {
                    g.remove(i);
                    continue;
                }
                g[i] = r.monic();
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    g.sort_by(|a, b| b.lm().cmp_in(a.lm(), order));
    Ok(g)
}

/// Mutually reduced, monic, without zeros.
pub fn interreduce(ps: &[CommPolynomial], order: MonomialOrder) -> Result<Vec<CommPolynomial>> {
    let nvars = ps.first().map(|p| p.nvars()).unwrap_or(0);
    let int = ps.iter().map(|p| Poly::from_ext(p, order)).collect::<Result<Vec<_>>>()?;
    let mut unlimited = usize::MAX;
    Ok(interreduce_int(int, order, &mut unlimited)?.iter().map(|p| p.to_ext(nvars)).collect())
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
}

struct State {
    order: MonomialOrder,
    g: Vec<Poly>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl State {
    fn active_refs(&self) -> Vec<&Poly> {
        self.active.iter().map(|&i| &self.g[i]).collect()
    }

    // Gebauer-Moeller installation of a new basis element
    fn update(&mut self, h: Poly) {
        let order = self.order;
        let hlm = *h.lm();
        let t = self.g.len();
        // new pairs: keep one pair per minimal lcm, preferring coprime
        // leading monomials and then newer elements, then drop the coprime ones
        let mut cands: Vec<(usize, Mono, bool)> = self
            .active
            .iter()
            .map(|&j| (j, hlm.lcm(self.g[j].lm()), hlm.coprime(self.g[j].lm())))
            .collect();
        cands.sort_by(|a, b| a.1.degree().cmp(&b.1.degree()).then(b.2.cmp(&a.2)).then(b.0.cmp(&a.0)));
        let mut minimal: Vec<(usize, Mono, bool)> = Vec::new();
        for c in cands {
            if !minimal.iter().any(|m| m.1.divides(&c.1)) {
                minimal.push(c);
            }
        }
        let g = &self.g;
        self.pairs.retain(|p| {
            !(hlm.divides(&p.lcm) && g[p.i].lm().lcm(&hlm) != p.lcm && g[p.j].lm().lcm(&hlm) != p.lcm)
        });
        let mut fresh: Vec<Pair> =
            minimal.into_iter().filter(|m| !m.2).map(|(j, lcm, _)| Pair { i: j, j: t, lcm }).collect();
        fresh.sort_by(|a, b| pair_cmp(b, a, order));
        let old = std::mem::take(&mut self.pairs);
        self.pairs = merge_desc(old, fresh, order);
        let g = &self.g;
        self.active.retain(|&j| !hlm.divides(g[j].lm()));
        self.g.push(h);
        self.active.push(t);
    }

    /// Smallest lcm degree first; pairs are kept in decreasing order.
    fn next_pair(&mut self) -> Option<Pair> {
        self.pairs.pop()
    }
}

fn pair_cmp(a: &Pair, b: &Pair, order: MonomialOrder) -> Ordering {
    a.lcm.degree().cmp(&b.lcm.degree()).then_with(|| a.lcm.cmp_in(&b.lcm, order))
}

fn merge_desc(a: Vec<Pair>, b: Vec<Pair>, order: MonomialOrder) -> Vec<Pair> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut a, mut b) = (a.into_iter().peekable(), b.into_iter().peekable());
    loop {
        let take_a = match (a.peek(), b.peek()) {
            (Some(x), Some(y)) => pair_cmp(x, y, order) == Ordering::Greater,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        out.push(if take_a { a.next() } else { b.next() }.unwrap());
    }
    out
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(
    gens: &[CommPolynomial],
    vars: &[String],
    order: MonomialOrder,
    budget: GroebnerBudget,
) -> Result<GroebnerBasis> {
    let nvars = vars.len();
    if let Some(p) = gens.iter().find(|p| p.nvars() != nvars) {
        return Err(Error::DimensionMismatch(format!("polynomial in {} variables, ring has {nvars}", p.nvars())));
    }
    if order == MonomialOrder::Lex {
        // lex directly is prone to coefficient blowup; going through a
        // degrevlex basis first is far more stable
        let drl = run(gens, vars, MonomialOrder::DegRevLex, budget)?;
        if drl.is_trivial() {
            return Ok(GroebnerBasis { order, ..drl });
        }
        return run(&drl.generators, vars, order, budget);
    }
    run(gens, vars, order, budget)
}

fn run(gens: &[CommPolynomial], vars: &[String], order: MonomialOrder, budget: GroebnerBudget) -> Result<GroebnerBasis> {
    let nvars = vars.len();
    let mut steps = budget.max_steps;
    let steps = &mut steps;
    let trivial = || GroebnerBasis {
        generators: vec![CommPolynomial::constant(nvars, Rational::one())],
        order,
        vars: vars.to_vec(),
    };

    // pull out generators with a single-variable leading term; reducing by
    // them removes that variable everywhere else
    let int = gens.iter().map(|p| Poly::from_ext(p, order)).collect::<Result<Vec<_>>>()?;
    let mut rest = interreduce_int(int, order, steps)?;
    let mut linear: Vec<Poly> = Vec::new();
    while let Some(pos) = rest.iter().position(|p| p.lm().as_variable().is_some()) {
        let l = rest.remove(pos);
        let reduced = rest.into_iter().map(|p| reduce(p, &[&l], order, steps)).collect::<Result<Vec<_>>>()?;
        rest = interreduce_int(reduced, order, steps)?;
        linear = linear.into_iter().map(|p| Ok(reduce(p, &[&l], order, steps)?.monic())).collect::<Result<Vec<_>>>()?;
        linear.push(l);
    }
    if rest.iter().chain(&linear).any(Poly::is_constant) {
        return Ok(trivial());
    }

    let mut st = State { order, g: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    let mut init = rest;
    init.sort_by(|a, b| a.lm().cmp_in(b.lm(), order));
    for p in init {
        st.update(p);
    }
    let mut count = 0usize;
    while let Some(pair) = st.next_pair() {
        count += 1;
        if count > budget.max_pairs {
            return Err(Error::BudgetExceeded(format!("more than {} S-pairs", budget.max_pairs)));
        }
        let s = spoly(&st.g[pair.i], &st.g[pair.j], order)?;
        let r = reduce(s, &st.active_refs(), order, steps)?;
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        if r.terms.iter().any(|(_, c)| c.numer().bits().max(c.denom().bits()) > budget.max_coeff_bits) {
            return Err(Error::BudgetExceeded(format!("coefficients above {} bits", budget.max_coeff_bits)));
        }
        if r.is_constant() {
            return Ok(trivial());
        }
        st.update(r);
    }
    let mut all: Vec<Poly> = st.active_refs().into_iter().cloned().collect();
    all.extend(linear);
    let reduced = interreduce_int(all, order, steps)?;
    Ok(GroebnerBasis { generators: reduced.iter().map(|p| p.to_ext(nvars)).collect(), order, vars: vars.to_vec() })
}
