use serde::{Deserialize, Serialize};

use super::{certificate, prepare, search_slot, slots, FactorConfig, SlotStatus};
use crate::als::{als_mul_general, als_scalar_mul, polynomial_of, Als};
use crate::error::{Error, Result};
use crate::minimize::{equal, invert, minimize, rank, scalar_value};

fn mul(f: &Als, g: &Als) -> Result<Als> {
    minimize(&als_mul_general(f, g)?)
}

/// `f` is an outer left factor of `h`: `h = f g` with ranks adding up to
/// `rank(h) + 1`, also after inversion.
pub fn is_left_factor(f: &Als, h: &Als) -> Result<bool> {
    let (f, h) = (minimize(f)?, minimize(h)?);
    if f.dim() == 0 || h.dim() == 0 {
        return Err(Error::ZeroInverse);
    }
    let (fi, hi) = (invert(&f)?, invert(&h)?);
    if f.dim() + rank(&als_mul_general(&fi, &h)?)? > h.dim() + 1 {
        return Ok(false);
    }
    Ok(rank(&als_mul_general(&hi, &f)?)? + fi.dim() <= hi.dim() + 1)
}

/// Mirror image: `f` is an outer left factor of `h` after inverting both.
pub fn is_right_factor(f: &Als, h: &Als) -> Result<bool> {
    is_left_factor(&invert(f)?, &invert(h)?)
}

/// Binary tree over leaf indices; each inner node's left subtree multiplies
/// to an outer left factor of the node's product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessTree {
    Leaf(usize),
    Node(Box<WitnessTree>, Box<WitnessTree>),
}

impl WitnessTree {
    fn node(a: WitnessTree, b: WitnessTree) -> Self {
        WitnessTree::Node(Box::new(a), Box::new(b))
    }

    fn shifted(&self, by: usize) -> Self {
        match self {
            WitnessTree::Leaf(i) => WitnessTree::Leaf(i + by),
            WitnessTree::Node(a, b) => WitnessTree::node(a.shifted(by), b.shifted(by)),
        }
    }

    fn mirrored(&self, len: usize) -> Self {
        match self {
            WitnessTree::Leaf(i) => WitnessTree::Leaf(len - 1 - i),
            WitnessTree::Node(a, b) => WitnessTree::node(b.mirrored(len), a.mirrored(len)),
        }
    }

    /// Leaf index range `[lo, hi)`.
    fn span(&self) -> (usize, usize) {
        match self {
            WitnessTree::Leaf(i) => (*i, i + 1),
            WitnessTree::Node(a, b) => (a.span().0, b.span().1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisionSide {
    Left,
    Right,
}

/// `f = leaves[0] * ... * leaves[m-1]`; the divisor is the product of the
/// first `count` leaves (left) or the last `count` (right).
#[derive(Clone, Debug)]
pub struct DivisibilityWitness {
    pub side: DivisionSide,
    pub leaves: Vec<Als>,
    pub tree: WitnessTree,
    pub count: usize,
}

#[derive(Clone, Debug)]
pub struct DivisibilityResult {
    pub witness: Option<DivisibilityWitness>,
    /// The search was cut short, so a missing witness proves nothing.
    pub incomplete: bool,
}

fn product(leaves: &[Als], d: usize) -> Result<Als> {
    let mut acc = Als::scalar(d, crate::qlinalg::Rational::from_integer(1.into()));
    for l in leaves {
        acc = mul(&acc, l)?;
    }
    Ok(acc)
}

fn check_tree(t: &WitnessTree, leaves: &[Als], d: usize, side: DivisionSide) -> Result<bool> {
    let WitnessTree::Node(a, b) = t else { return Ok(true) };
    let (lo, mid) = a.span();
    let (mid2, hi) = b.span();
    if mid != mid2 {
        return Ok(false);
    }
    let whole = product(&leaves[lo..hi], d)?;
    let ok = match side {
        DivisionSide::Left => is_left_factor(&product(&leaves[lo..mid], d)?, &whole)?,
        DivisionSide::Right => is_right_factor(&product(&leaves[mid..hi], d)?, &whole)?,
    };
    Ok(ok && check_tree(a, leaves, d, side)? && check_tree(b, leaves, d, side)?)
}

/// Recomputes every condition of a witness for `g | f`.
pub fn verify_witness(w: &DivisibilityWitness, g: &Als, f: &Als) -> Result<bool> {
    let d = f.d();
    let m = w.leaves.len();
    if w.count > m || w.tree.span() != (0, m) {
        return Ok(false);
    }
    let part = match w.side {
        DivisionSide::Left => &w.leaves[..w.count],
        DivisionSide::Right => &w.leaves[m - w.count..],
    };
    Ok(equal(&product(&w.leaves, d)?, f)? && equal(&product(part, d)?, g)? && check_tree(&w.tree, &w.leaves, d, w.side)?)
}

type Found = (Vec<Als>, WitnessTree, usize);

fn direct(g: &Als, f: &Als) -> Result<Option<Found>> {
    if !is_left_factor(g, f)? {
        return Ok(None);
    }
    let rest = mul(&invert(g)?, f)?;
    Ok(Some((vec![minimize(g)?, rest], WitnessTree::node(WitnessTree::Leaf(0), WitnessTree::Leaf(1)), 1)))
}

fn search(g: &Als, f: &Als, depth: usize, cfg: &FactorConfig, incomplete: &mut bool) -> Result<Option<Found>> {
    if let Some(hit) = direct(g, f)? {
        return Ok(Some(hit));
    }
    if depth == 0 {
        *incomplete = true;
        return Ok(None);
    }
    let m = minimize(f)?;
    if m.dim() < 2 {
        return Ok(None);
    }
    let c = prepare(&m, cfg.seed)?;
    for slot in slots(c.dim()) {
        let (status, hit) = search_slot(&c, slot, cfg)?;
        if matches!(status, SlotStatus::NotFound | SlotStatus::BudgetExceeded) {
            *incomplete = true;
        }
        let Some(hit) = hit else { continue };
        let cert = certificate(&c, slot, hit)?;
        // tree nodes need outer factors, which the block form alone does not guarantee
        if !cert.outer {
            continue;
        }
        let (f1, f2) = (als_scalar_mul(&cert.left, &cert.unit), cert.right);
        let rest = mul(&invert(&f1)?, g)?;
        if let Some(c) = scalar_value(&rest)? {
            let leaves = vec![als_scalar_mul(&f1, &c), als_scalar_mul(&f2, &c.recip())];
            return Ok(Some((leaves, WitnessTree::node(WitnessTree::Leaf(0), WitnessTree::Leaf(1)), 1)));
        }
        // g divides the left part
        if let Some((mut leaves, tree, count)) = search(g, &f1, depth - 1, cfg, incomplete)? {
            let n = leaves.len();
            leaves.push(f2);
            return Ok(Some((leaves, WitnessTree::node(tree, WitnessTree::Leaf(n)), count)));
        }
        // the left part divides g
        if let Some((leaves, tree, count)) = search(&rest, &f2, depth - 1, cfg, incomplete)? {
            let mut all = vec![f1];
            all.extend(leaves);
            return Ok(Some((all, WitnessTree::node(WitnessTree::Leaf(0), tree.shifted(1)), count + 1)));
        }
    }
    Ok(None)
}

fn both_polynomials(g: &Als, f: &Als) -> Result<bool> {
    Ok(polynomial_of(&minimize(g)?)?.is_some() && polynomial_of(&minimize(f)?)?.is_some())
}

/// `g` left divides `f` in the free field: a witness tree whose leaves
/// multiply to `f` and start with a product equal to `g`. For polynomials
/// the outer factor test alone decides.
pub fn left_divides(g: &Als, f: &Als, cfg: &FactorConfig) -> Result<DivisibilityResult> {
    if minimize(g)?.dim() == 0 || minimize(f)?.dim() == 0 {
        return Err(Error::ZeroInverse);
    }
    let mut incomplete = false;
    let found =
        if both_polynomials(g, f)? { direct(g, f)? } else { search(g, f, cfg.depth, cfg, &mut incomplete)? };
    Ok(DivisibilityResult {
        witness: found.map(|(leaves, tree, count)| DivisibilityWitness { side: DivisionSide::Left, leaves, tree, count }),
        incomplete,
    })
}

/// `g` right divides `f`; searched as left division of the inverses.
pub fn right_divides(g: &Als, f: &Als, cfg: &FactorConfig) -> Result<DivisibilityResult> {
    if minimize(g)?.dim() == 0 || minimize(f)?.dim() == 0 {
        return Err(Error::ZeroInverse);
    }
    if both_polynomials(g, f)? {
        let witness = if is_right_factor(g, f)? {
            let rest = mul(f, &invert(g)?)?;
            let tree = WitnessTree::node(WitnessTree::Leaf(0), WitnessTree::Leaf(1));
            Some(DivisibilityWitness { side: DivisionSide::Right, leaves: vec![rest, minimize(g)?], tree, count: 1 })
        } else {
            None
        };
        return Ok(DivisibilityResult { witness, incomplete: false });
    }
    let r = left_divides(&invert(g)?, &invert(f)?, cfg)?;
    let witness = match r.witness {
        Some(w) => {
            let m = w.leaves.len();
            let leaves = w.leaves.iter().rev().map(invert).collect::<Result<Vec<_>>>()?;
            Some(DivisibilityWitness { side: DivisionSide::Right, leaves, tree: w.tree.mirrored(m), count: w.count })
        }
        None => None,
    };
    Ok(DivisibilityResult { witness, incomplete: r.incomplete })
}
