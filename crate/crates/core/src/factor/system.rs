use num_traits::{One, Zero};

use super::{FactorSlot, SlotType};
use crate::als::Als;
use crate::error::{Error, Result};
use crate::groebner::CommPolynomial;
use crate::qlinalg::{MatQ, Rational};

/// How invertibility of `P` and `Q` enters the system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetMode {
    /// `det P = det Q = 1`.
    Unit,
    /// `det P * t_1 = det Q * t_2 = 1` with two extra unknowns.
    Rabinowitsch,
}

/// Unknown transformation: `P` with last column `e_n` and free entries
/// `alpha_{i,j}` (`j < n`), `Q` with first row `e_1` and free entries
/// `beta_{i,j}` (`i >= 2`). Variables are ordered alpha row by row, then beta
/// row by row, then auxiliary ones.
#[derive(Clone, Debug)]
pub struct TransformationShape {
    pub n: usize,
    pub vars: Vec<String>,
    pub p: Vec<Vec<CommPolynomial>>,
    pub q: Vec<Vec<CommPolynomial>>,
}

impl TransformationShape {
    pub fn new(n: usize, aux: &[&str]) -> Self {
        let mut vars = Vec::new();
        for i in 1..=n {
            for j in 1..n {
                vars.push(format!("a_{i}_{j}"));
            }
        }
        for i in 2..=n {
            for j in 1..=n {
                vars.push(format!("b_{i}_{j}"));
            }
        }
        vars.extend(aux.iter().map(|s| s.to_string()));
        let nv = vars.len();
        let zero = CommPolynomial::zero(nv);
        let one = CommPolynomial::constant(nv, Rational::one());
        let mut p = vec![vec![zero.clone(); n]; n];
        let mut q = vec![vec![zero.clone(); n]; n];
        for i in 0..n {
            for j in 0..n - 1 {
                p[i][j] = CommPolynomial::var(nv, Self::alpha_index(n, i, j));
            }
        }
        p[n - 1][n - 1] = one.clone();
        q[0][0] = one;
        for i in 1..n {
            for j in 0..n {
                q[i][j] = CommPolynomial::var(nv, Self::beta_index(n, i, j));
            }
        }
        TransformationShape { n, vars, p, q }
    }

    /// 0-based row `i`, column `j < n - 1`.
    pub fn alpha_index(n: usize, i: usize, j: usize) -> usize {
        i * (n - 1) + j
    }

    /// 0-based row `i >= 1`, column `j`.
    pub fn beta_index(n: usize, i: usize, j: usize) -> usize {
        n * (n - 1) + (i - 1) * n + j
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn instantiate(&self, sol: &[Rational]) -> (MatQ, MatQ) {
        let n = self.n;
        let ev = |m: &Vec<Vec<CommPolynomial>>| {
            let mut out = MatQ::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] = m[i][j].evaluate(sol);
                }
            }
            out
        };
        (ev(&self.p), ev(&self.q))
    }

    /// Entry `(i, j)` of `P A Q` as a polynomial in the unknowns.
    pub fn entry(&self, a: &MatQ, i: usize, j: usize) -> CommPolynomial {
        let nv = self.nvars();
        let mut out = CommPolynomial::zero(nv);
        for k in 0..self.n {
            if self.p[i][k].is_zero() {
                continue;
            }
            let mut w = CommPolynomial::zero(nv);
            for m in 0..self.n {
                if !a[(k, m)].is_zero() {
                    w = w.add(&self.q[m][j].scale(&a[(k, m)]));
                }
            }
            if !w.is_zero() {
                out = out.add(&self.p[i][k].mul(&w));
            }
        }
        out
    }
}

/// Equations of one slot, grouped by origin.
#[derive(Clone, Debug)]
pub struct BlockSystem {
    pub shape: TransformationShape,
    pub slot: FactorSlot,
    /// One per (zero cell, pencil coefficient).
    pub zero_block: Vec<CommPolynomial>,
    /// Letter coefficients of the coupling entries that must vanish.
    pub coupling: Vec<CommPolynomial>,
    pub determinant: Vec<CommPolynomial>,
    pub extra: Vec<CommPolynomial>,
}

impl BlockSystem {
    pub fn equations(&self) -> Vec<CommPolynomial> {
        self.zero_block.iter().chain(&self.coupling).chain(&self.determinant).chain(&self.extra).cloned().collect()
    }
}

fn det(m: &[Vec<CommPolynomial>], nv: usize) -> CommPolynomial {
    let k = m.len();
    if k == 0 {
        return CommPolynomial::constant(nv, Rational::one());
    }
    if k == 1 {
        return m[0][0].clone();
    }
    let mut out = CommPolynomial::zero(nv);
    for c in 0..k {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<CommPolynomial>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, e)| e.clone()).collect()).collect();
        let term = m[0][c].mul(&det(&minor, nv));
        out = if c % 2 == 0 { out.add(&term) } else { out.sub(&term) };
    }
    out
}

/// Zero cells `(i, j)` of the slot.
pub fn zero_cells(n: usize, slot: &FactorSlot) -> Vec<(usize, usize)> {
    let k = slot.k;
    let mut cells = Vec::new();
    let mut block = |rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| {
        for i in rows {
            for j in cols.clone() {
                cells.push((i, j));
            }
        }
    };
    match slot.ftype {
        SlotType::ZeroZero => {
            block(k..n, 0..k);
            block(0..k, k + 1..n);
        }
        SlotType::OneStar => {
            block(k - 1..n, 0..k - 1);
            block(0..k - 1, k..n);
        }
        SlotType::StarOne => {
            block(k..n, 0..k);
            block(0..k - 1, k..n);
        }
    }
    cells
}

/// Cells joining the two diagonal blocks.
pub fn coupling_cells(n: usize, slot: &FactorSlot) -> Vec<(usize, usize)> {
    let k = slot.k;
    match slot.ftype {
        SlotType::ZeroZero => (0..k).map(|i| (i, k)).collect(),
        SlotType::OneStar => (0..k - 1).map(|i| (i, k - 1)).collect(),
        SlotType::StarOne => (k..n).map(|j| (k - 1, j)).collect(),
    }
}

/// The diagonal cell that is a factor on its own when one side has rank one.
pub fn lone_cell(n: usize, slot: &FactorSlot) -> Option<(usize, usize)> {
    match slot.ftype {
        SlotType::StarOne if slot.k == 1 => Some((0, 0)),
        SlotType::OneStar if slot.k == n => Some((n - 1, n - 1)),
        _ => None,
    }
}

/// Options for [`build_block_system`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SystemOptions {
    pub det: DetMode,
    /// Also force the coupling entries of types (1,*) and (*,1) to be scalar.
    pub scalar_coupling: bool,
    /// Letter whose coefficient in the lone diagonal cell must be nonzero.
    pub lone_letter: Option<usize>,
}

impl Default for SystemOptions {
    fn default() -> Self {
        SystemOptions { det: DetMode::Unit, scalar_coupling: false, lone_letter: None }
    }
}

/// Polynomial system whose solutions are the transformations of the fixed
/// shape producing the zero blocks (and coupling) of `slot`. `f` must have its
/// right hand side concentrated in the last entry.
pub fn build_block_system(f: &Als, slot: FactorSlot, opts: SystemOptions) -> Result<BlockSystem> {
    let n = f.dim();
    if n < 2 {
        return Err(Error::DimensionMismatch("factor slots need dimension at least 2".into()));
    }
    if !slot.is_valid(n) {
        return Err(Error::DimensionMismatch(format!("slot {slot} is not valid for dimension {n}")));
    }
    if (0..n - 1).any(|i| !f.v[(i, 0)].is_zero()) {
        return Err(Error::FormViolation("right hand side must be concentrated in the last entry".into()));
    }
    let mut aux: Vec<&str> = Vec::new();
    if opts.det == DetMode::Rabinowitsch {
        aux.extend(["t_1", "t_2"]);
    }
    if opts.lone_letter.is_some() {
        aux.push("t_3");
    }
    let shape = TransformationShape::new(n, &aux);
    let nv = shape.nvars();
    let one = CommPolynomial::constant(nv, Rational::one());

    let mut zero_block = Vec::new();
    for (i, j) in zero_cells(n, &slot) {
        for a in &f.pencil.coeffs {
            zero_block.push(shape.entry(a, i, j));
        }
    }
    let mut coupling = Vec::new();
    if slot.ftype == SlotType::ZeroZero || opts.scalar_coupling {
        for (i, j) in coupling_cells(n, &slot) {
            for a in &f.pencil.coeffs[1..] {
                coupling.push(shape.entry(a, i, j));
            }
        }
    }
    let pblock: Vec<Vec<CommPolynomial>> = shape.p[..n - 1].iter().map(|r| r[..n - 1].to_vec()).collect();
    let qblock: Vec<Vec<CommPolynomial>> = shape.q[1..].iter().map(|r| r[1..].to_vec()).collect();
    let (dp, dq) = (det(&pblock, nv), det(&qblock, nv));
    let determinant = match opts.det {
        DetMode::Unit => vec![dp.sub(&one), dq.sub(&one)],
        DetMode::Rabinowitsch => {
            let t1 = CommPolynomial::var(nv, shape.var_index("t_1").unwrap());
            let t2 = CommPolynomial::var(nv, shape.var_index("t_2").unwrap());
            vec![dp.mul(&t1).sub(&one), dq.mul(&t2).sub(&one)]
        }
    };
    let mut extra = Vec::new();
    if let Some(x) = opts.lone_letter {
        let (i, j) = lone_cell(n, &slot).ok_or_else(|| Error::FormViolation("slot has no lone cell".into()))?;
        let t3 = CommPolynomial::var(nv, shape.var_index("t_3").unwrap());
        extra.push(shape.entry(&f.pencil.coeffs[x + 1], i, j).mul(&t3).sub(&one));
    }
    Ok(BlockSystem { shape, slot, zero_block, coupling, determinant, extra })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::q;

    #[test]
    fn polynomial_determinant_matches_numeric() {
        let shape = TransformationShape::new(3, &[]);
        let nv = shape.nvars();
        let sol: Vec<Rational> = (0..nv).map(|i| q((i as i64 * 7 + 3) % 5 - 2)).collect();
        let (p, qq) = shape.instantiate(&sol);
        let pblock: Vec<Vec<CommPolynomial>> = shape.p[..2].iter().map(|r| r[..2].to_vec()).collect();
        assert_eq!(det(&pblock, nv).evaluate(&sol), p.det().unwrap());
        let qblock: Vec<Vec<CommPolynomial>> = shape.q[1..].iter().map(|r| r[1..].to_vec()).collect();
        assert_eq!(det(&qblock, nv).evaluate(&sol), qq.det().unwrap());
    }

    #[test]
    fn entries_match_numeric_product() {
        let shape = TransformationShape::new(3, &[]);
        let nv = shape.nvars();
        let sol: Vec<Rational> = (0..nv).map(|i| q((i as i64 * 5 + 1) % 7 - 3)).collect();
        let (p, qq) = shape.instantiate(&sol);
        let a = MatQ::from_i64(&[&[1, -2, 0], &[3, 1, 4], &[0, 5, -1]]);
        let paq = &(&p * &a) * &qq;
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(shape.entry(&a, i, j).evaluate(&sol), paq[(i, j)]);
            }
        }
    }

    #[test]
    fn cell_layout() {
        let s = FactorSlot { k: 2, ftype: SlotType::ZeroZero };
        assert_eq!(zero_cells(4, &s), vec![(2, 0), (2, 1), (3, 0), (3, 1), (0, 3), (1, 3)]);
        assert_eq!(coupling_cells(4, &s), vec![(0, 2), (1, 2)]);
        let s = FactorSlot { k: 2, ftype: SlotType::OneStar };
        assert_eq!(zero_cells(3, &s), vec![(1, 0), (2, 0), (0, 2)]);
        let s = FactorSlot { k: 1, ftype: SlotType::StarOne };
        assert_eq!(zero_cells(3, &s), vec![(1, 0), (2, 0)]);
        assert_eq!(lone_cell(3, &s), Some((0, 0)));
    }
}
