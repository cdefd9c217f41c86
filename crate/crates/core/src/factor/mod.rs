//! Factorization into atoms. A left factor of rank `k` shows up as a block
//! upper triangular form `P A Q` of a minimal system; the unknown entries of
//! `P` and `Q` are found through a Gröbner basis of the block conditions.

mod divides;
mod system;

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use divides::{
    is_left_factor, is_right_factor, left_divides, right_divides, verify_witness, DivisibilityResult, DivisionSide,
    DivisibilityWitness, WitnessTree,
};
pub use system::{
    build_block_system, coupling_cells, lone_cell, zero_cells, BlockSystem, DetMode, SystemOptions,
    TransformationShape,
};

use crate::als::{als_mul_general, als_scalar_mul, apply_transformation, concentrate_rhs, Als, AlsJson, LinearPencil};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, extract_rational_solution, GroebnerBasis, GroebnerBudget, MonomialOrder, SolveBudget};
use crate::minimize::{equal, is_scalar, minimize, minimize_seeded, scalar_normalize, scalar_value, DEFAULT_SEED};
use crate::qlinalg::{format_rational, MatQ, Rational};

/// Shape of the coupling between the two diagonal blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SlotType {
    /// Scalar coupling column, square blocks of sizes `k` and `n - k`.
    #[serde(rename = "(0,0)")]
    ZeroZero,
    /// Blocks overlap in row/column `k`; coupling in column `k`.
    #[serde(rename = "(1,*)")]
    OneStar,
    /// Blocks overlap in row/column `k`; coupling in row `k`.
    #[serde(rename = "(*,1)")]
    StarOne,
}

impl fmt::Display for SlotType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlotType::ZeroZero => "(0,0)",
            SlotType::OneStar => "(1,*)",
            SlotType::StarOne => "(*,1)",
        })
    }
}

/// A candidate left factor of rank `k` (1-based block size).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorSlot {
    pub k: usize,
    #[serde(rename = "type")]
    pub ftype: SlotType,
}

impl FactorSlot {
    pub fn new(k: usize, ftype: SlotType) -> Self {
        FactorSlot { k, ftype }
    }

    pub fn is_valid(&self, n: usize) -> bool {
        match self.ftype {
            SlotType::ZeroZero | SlotType::StarOne => self.k >= 1 && self.k < n,
            SlotType::OneStar => self.k > 1 && self.k <= n,
        }
    }
}

impl fmt::Display for FactorSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} {}", self.k, self.ftype)
    }
}

/// Slots for dimension `n` in search order.
pub fn slots(n: usize) -> Vec<FactorSlot> {
    (1..=n).flat_map(|k| slots_of_rank(n, k)).collect()
}

pub fn slots_of_rank(n: usize, k: usize) -> Vec<FactorSlot> {
    [SlotType::ZeroZero, SlotType::StarOne, SlotType::OneStar]
        .into_iter()
        .map(|t| FactorSlot::new(k, t))
        .filter(|s| s.is_valid(n))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorConfig {
    pub groebner: GroebnerBudget,
    pub solve: SolveBudget,
    /// Recursion depth for divisibility witnesses.
    pub depth: usize,
    /// Seed for the regular point used by minimization.
    pub seed: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig { groebner: GroebnerBudget::default(), solve: SolveBudget::default(), depth: 3, seed: DEFAULT_SEED }
    }
}

/// `P A Q` of `system` has the zero blocks of `slot`; the element equals
/// `unit * left * right` with both factors minimal and scalar normalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorCertificate {
    pub slot: FactorSlot,
    pub system: Als,
    pub p: MatQ,
    pub q: MatQ,
    pub left: Als,
    pub right: Als,
    pub unit: Rational,
    /// `left` also satisfies both rank inequalities of an outer left factor.
    pub outer: bool,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    slot: FactorSlot,
    system: AlsJson,
    p: MatQ,
    q: MatQ,
    left: AlsJson,
    right: AlsJson,
    unit: String,
    outer: bool,
}

impl FactorCertificate {
    pub fn to_json(&self, letters: &[String]) -> Result<serde_json::Value> {
        let c = CertificateJson {
            slot: self.slot,
            system: AlsJson::from_als(&self.system, letters)?,
            p: self.p.clone(),
            q: self.q.clone(),
            left: AlsJson::from_als(&self.left, letters)?,
            right: AlsJson::from_als(&self.right, letters)?,
            unit: format_rational(&self.unit),
            outer: self.outer,
        };
        serde_json::to_value(c).map_err(|e| Error::Json(e.to_string()))
    }

    /// Rechecks the block structure and the product.
    pub fn verify(&self) -> Result<bool> {
        let (l, r) = match split(&self.system, self.slot, &self.p, &self.q) {
            Ok(x) => x,
            Err(Error::CouplingViolated(_)) | Err(Error::FormViolation(_)) => return Ok(false),
            Err(e) => return Err(e),
        };
        let prod = als_mul_general(&als_scalar_mul(&self.left, &self.unit), &self.right)?;
        if self.system.is_regular_at_zero() && prod.is_regular_at_zero() {
            if prod.series_expand(6)? != self.system.series_expand(6)? {
                return Ok(false);
            }
        }
        Ok(equal(&als_mul_general(&l, &r)?, &self.system)? && equal(&prod, &self.system)?)
    }
}

/// What the search established for one slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotStatus {
    Found,
    /// The ideal is trivial: no transformation exists, even over `C`.
    Absent,
    /// Solutions exist over `C` but no rational one was found.
    NotFound,
    BudgetExceeded,
}

#[derive(Clone, Debug)]
pub struct LeftFactorSearch {
    pub certificate: Option<FactorCertificate>,
    pub slots: Vec<(FactorSlot, SlotStatus)>,
}

impl LeftFactorSearch {
    /// Some slot was neither found nor ruled out.
    pub fn incomplete(&self) -> bool {
        self.slots.iter().any(|(_, s)| matches!(s, SlotStatus::NotFound | SlotStatus::BudgetExceeded))
    }
}

fn groebner_of(sys: &BlockSystem, cfg: &FactorConfig) -> Result<GroebnerBasis> {
    buchberger(&sys.equations(), &sys.shape.vars, MonomialOrder::DegRevLex, cfg.groebner)
}

/// Splits `P A Q` of `f` (right hand side concentrated) into the two factor
/// systems; their product is `f`.
pub fn split(f: &Als, slot: FactorSlot, p: &MatQ, q: &MatQ) -> Result<(Als, Als)> {
    let n = f.dim();
    if !slot.is_valid(n) {
        return Err(Error::DimensionMismatch(format!("slot {slot} is not valid for dimension {n}")));
    }
    let g = apply_transformation(f, p, q)?;
    if (0..n - 1).any(|i| !g.v[(i, 0)].is_zero()) {
        return Err(Error::FormViolation("transformed right hand side is not concentrated".into()));
    }
    if zero_cells(n, &slot).into_iter().any(|(i, j)| !g.pencil.entry_is_zero(i, j)) {
        return Err(Error::FormViolation(format!("zero blocks of {slot} missing")));
    }
    let cells = coupling_cells(n, &slot);
    let d = f.d();
    let k = slot.k;
    match slot.ftype {
        SlotType::ZeroZero => {
            if cells.iter().any(|&(i, j)| !g.pencil.entry_is_scalar(i, j)) {
                return Err(Error::CouplingViolated("coupling column is not scalar".into()));
            }
            let vf = -&g.a(0).submatrix(0..k, k..k + 1);
            let left = Als::new(g.pencil.submatrix(0..k, 0..k), vf)?;
            let right = Als::new(g.pencil.submatrix(k..n, k..n), g.v.submatrix(k..n, 0..1))?;
            Ok((left, right))
        }
        SlotType::OneStar | SlotType::StarOne => {
            if cells.iter().all(|&(i, j)| g.pencil.entry_is_scalar(i, j)) {
                return Err(Error::CouplingViolated("coupling is scalar".into()));
            }
            if slot.ftype == SlotType::OneStar {
                let mut lp = LinearPencil::zeros(k, d);
                for (l, m) in lp.coeffs.iter_mut().enumerate() {
                    m.set_block(0, 0, &g.a(l).submatrix(0..k - 1, 0..k));
                }
                lp.coeffs[0][(k - 1, k - 1)] = Rational::one();
                let left = Als::new(lp, MatQ::unit_col(k, k - 1))?;
                let right = Als::new(g.pencil.submatrix(k - 1..n, k - 1..n), g.v.submatrix(k - 1..n, 0..1))?;
                Ok((left, right))
            } else {
                let left = Als::new(g.pencil.submatrix(0..k, 0..k), MatQ::unit_col(k, k - 1))?;
                let m = n - k + 1;
                let mut rp = LinearPencil::zeros(m, d);
                for (l, c) in rp.coeffs.iter_mut().enumerate() {
                    c.set_block(0, 1, &g.a(l).submatrix(k - 1..k, k..n));
                    c.set_block(1, 1, &g.a(l).submatrix(k..n, k..n));
                }
                rp.coeffs[0][(0, 0)] = Rational::one();
                let v = MatQ::vstack(&[&MatQ::zeros(1, 1), &g.v.submatrix(k..n, 0..1)])?;
                Ok((left, Als::new(rp, v)?))
            }
        }
    }
}

fn try_solution(
    c: &Als,
    sys: &BlockSystem,
    basis: &GroebnerBasis,
    cfg: &FactorConfig,
) -> Result<Option<(MatQ, MatQ, Als, Als)>> {
    let Some(sol) = extract_rational_solution(basis, cfg.solve)? else { return Ok(None) };
    let (p, q) = sys.shape.instantiate(&sol);
    match split(c, sys.slot, &p, &q) {
        Ok((l, r)) => Ok(Some((p, q, l, r))),
        Err(Error::CouplingViolated(_)) | Err(Error::FormViolation(_)) | Err(Error::NotInvertible) => Ok(None),
        Err(e) => Err(e),
    }
}

type SlotHit = (MatQ, MatQ, Als, Als);

/// Searches one slot of a minimal system with concentrated right hand side.
fn search_slot(c: &Als, slot: FactorSlot, cfg: &FactorConfig) -> Result<(SlotStatus, Option<SlotHit>)> {
    let run = || -> Result<(SlotStatus, Option<SlotHit>)> {
        if slot.ftype != SlotType::ZeroZero {
            let opts = SystemOptions { scalar_coupling: true, ..Default::default() };
            // a scalar coupling anywhere contradicts minimality of the left block
            if !groebner_of(&build_block_system(c, slot, opts)?, cfg)?.is_trivial() {
                return Ok((SlotStatus::Absent, None));
            }
        }
        let letters: Vec<Option<usize>> =
            if lone_cell(c.dim(), &slot).is_some() { (0..c.d()).map(Some).collect() } else { vec![None] };
        let mut solvable = false;
        for lone_letter in letters {
            let unit = build_block_system(c, slot, SystemOptions { lone_letter, ..Default::default() })?;
            let basis = groebner_of(&unit, cfg)?;
            // det = 1 loses nothing over C, so a trivial ideal settles the slot
            if basis.is_trivial() {
                continue;
            }
            solvable = true;
            if let Some(hit) = try_solution(c, &unit, &basis, cfg)? {
                return Ok((SlotStatus::Found, Some(hit)));
            }
            let opts = SystemOptions { det: DetMode::Rabinowitsch, lone_letter, ..Default::default() };
            let rab = build_block_system(c, slot, opts)?;
            let basis = groebner_of(&rab, cfg)?;
            if let Some(hit) = try_solution(c, &rab, &basis, cfg)? {
                return Ok((SlotStatus::Found, Some(hit)));
            }
        }
        Ok((if solvable { SlotStatus::NotFound } else { SlotStatus::Absent }, None))
    };
    match run() {
        Err(Error::BudgetExceeded(_)) => Ok((SlotStatus::BudgetExceeded, None)),
        r => r,
    }
}

fn prepare(f: &Als, seed: u64) -> Result<Als> {
    let m = minimize_seeded(f, seed)?;
    if m.dim() < 2 {
        return Err(Error::DimensionMismatch("left factors need rank at least 2".into()));
    }
    Ok(concentrate_rhs(&m).0)
}

fn certificate(c: &Als, slot: FactorSlot, hit: SlotHit) -> Result<FactorCertificate> {
    let (p, q, l, r) = hit;
    let (left, c1) = scalar_normalize(&l)?;
    let (right, c2) = scalar_normalize(&r)?;
    let outer = is_left_factor(&left, c)?;
    let cert = FactorCertificate { slot, system: c.clone(), p, q, left, right, unit: c1 * c2, outer };
    let prod = als_mul_general(&als_scalar_mul(&cert.left, &cert.unit), &cert.right)?;
    if !equal(&prod, c)? {
        return Err(Error::FormViolation("factors do not reproduce the element".into()));
    }
    Ok(cert)
}

/// Searches the given slots in order and stops at the first certificate.
pub fn search_slots(f: &Als, wanted: &[FactorSlot], cfg: &FactorConfig) -> Result<LeftFactorSearch> {
    let c = prepare(f, cfg.seed)?;
    let mut out = LeftFactorSearch { certificate: None, slots: Vec::new() };
    for &slot in wanted {
        if !slot.is_valid(c.dim()) {
            return Err(Error::DimensionMismatch(format!("slot {slot} is not valid for dimension {}", c.dim())));
        }
        let (status, hit) = search_slot(&c, slot, cfg)?;
        out.slots.push((slot, status));
        if let Some(hit) = hit {
            out.certificate = Some(certificate(&c, slot, hit)?);
            break;
        }
    }
    Ok(out)
}

/// Left factor of rank `k`, if one is found within the budgets.
pub fn find_left_factor(f: &Als, k: usize, cfg: &FactorConfig) -> Result<LeftFactorSearch> {
    let n = minimize_seeded(f, cfg.seed)?.dim();
    search_slots(f, &slots_of_rank(n, k), cfg)
}

/// Any proper left factor, smallest rank first.
pub fn find_any_left_factor(f: &Als, cfg: &FactorConfig) -> Result<LeftFactorSearch> {
    let n = minimize_seeded(f, cfg.seed)?.dim();
    search_slots(f, &slots(n), cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomReport {
    pub atom: bool,
    /// Some slot could not be ruled out, so `atom` is not a proof.
    pub incomplete: bool,
}

/// Nonzero non-scalar elements without proper factorization.
pub fn is_atom(f: &Als, cfg: &FactorConfig) -> Result<AtomReport> {
    let m = minimize_seeded(f, cfg.seed)?;
    if m.dim() == 0 {
        return Err(Error::ZeroInverse);
    }
    if is_scalar(&m)? {
        return Err(Error::Unsupported("scalars are units, not atoms".into()));
    }
    if m.dim() == 1 {
        return Ok(AtomReport { atom: true, incomplete: false });
    }
    let s = find_any_left_factor(&m, cfg)?;
    Ok(AtomReport { atom: s.certificate.is_none(), incomplete: s.incomplete() })
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub unit: Rational,
    /// Minimal, scalar normalized atoms in product order.
    pub factors: Vec<Als>,
    pub incomplete: bool,
}

impl Factorization {
    pub fn product(&self, d: usize) -> Result<Als> {
        let mut acc = Als::scalar(d, self.unit.clone());
        for f in &self.factors {
            acc = minimize(&als_mul_general(&acc, f)?)?;
        }
        Ok(acc)
    }
}

/// `f = unit * f_1 * ... * f_m` with atoms `f_i`, splitting at the first
/// left factor found at each step.
pub fn factorize(f: &Als, cfg: &FactorConfig) -> Result<Factorization> {
    let m = minimize_seeded(f, cfg.seed)?;
    if m.dim() == 0 {
        return Err(Error::ZeroInverse);
    }
    if let Some(c) = scalar_value(&m)? {
        return Ok(Factorization { unit: c, factors: Vec::new(), incomplete: false });
    }
    let mut out = Factorization { unit: Rational::one(), factors: Vec::new(), incomplete: false };
    let mut stack = vec![m];
    // left-to-right: take from the front, push right parts back in order
    while let Some(g) = stack.pop() {
        let (g, c) = scalar_normalize(&g)?;
        out.unit *= c;
        if g.dim() < 2 {
            out.factors.push(g);
            continue;
        }
        let s = find_any_left_factor(&g, cfg)?;
        match s.certificate {
            Some(cert) => {
                out.unit *= &cert.unit;
                stack.push(cert.right);
                stack.push(cert.left);
            }
            None => {
                out.incomplete |= s.incomplete();
                out.factors.push(g);
            }
        }
    }
    if !equal(&out.product(f.d())?, f)? {
        return Err(Error::FormViolation("factorization does not reproduce the element".into()));
    }
    Ok(out)
}
