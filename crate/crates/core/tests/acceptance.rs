//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! and the test fails if any criterion fails.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use freefield::als::{als_from_polynomial, als_mul_general, polynomial_of, Als};
use freefield::eval::{eval_str, eval_to_als};
use freefield::expr::Expr;
use freefield::factor::{
    build_block_system, factorize, find_left_factor, is_atom, is_left_factor, left_divides, search_slots,
    FactorConfig, FactorSlot, SlotStatus, SlotType, SystemOptions, TransformationShape,
};
use freefield::groebner::{buchberger, CommPolynomial, GroebnerBudget, MonomialOrder};
use freefield::minimize::{invert, is_scalar, is_zero, minimize, rank, type_of};
use freefield::ncpoly::{poly_left_divide, poly_mul, series_eval, NCPolynomial, Word};
use freefield::qlinalg::{q, qf, MatQ, Rational};
use freefield::ElementType;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const XYZ: [&str; 3] = ["x", "y", "z"];

fn e(s: &str) -> Als {
    eval_str(s, &XYZ).unwrap()
}

fn m(s: &str) -> Als {
    minimize(&e(s)).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Word {
    Word((0..len).map(|_| rng.gen_range(0..3)).collect())
}

/// Nonconstant, degree at most 3, at most 4 terms.
fn random_poly(rng: &mut ChaCha8Rng) -> NCPolynomial {
    loop {
        let terms = rng.gen_range(1..=4);
        let p = NCPolynomial::from_terms(
            3,
            (0..terms).map(|_| {
                let len = rng.gen_range(0..=3);
                let mut c = rng.gen_range(-3..=3);
                if c == 0 {
                    c = 1;
                }
                (random_word(rng, len), q(c))
            }),
        );
        if p.degree().unwrap_or(0) > 0 {
            return p;
        }
    }
}

fn random_expr(rng: &mut ChaCha8Rng, depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.7) {
            Expr::letter(rng.gen_range(0..3))
        } else {
            Expr::constant(q(rng.gen_range(-2..=3)))
        };
    }
    match rng.gen_range(0..4) {
        0 => Expr::sum(random_expr(rng, depth - 1), random_expr(rng, depth - 1)),
        1 => Expr::product(random_expr(rng, depth - 1), random_expr(rng, depth - 1)),
        2 => Expr::neg(random_expr(rng, depth - 1)),
        _ => {
            // shift away from zero so the inverse usually exists at the origin
            let c = q(rng.gen_range(1..=3));
            Expr::inverse(Expr::sum(Expr::constant(c), random_expr(rng, depth - 1)))
        }
    }
}

fn c1_word_ranks() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let len = rng.gen_range(0..=5);
        let w = random_word(&mut rng, len);
        let p = NCPolynomial::monomial(3, w, q(1));
        assert_eq!(rank(&als_from_polynomial(&p).unwrap()).unwrap(), len + 1);
    }
}

fn c2_rank_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..30 {
        let (p, r) = (random_poly(&mut rng), random_poly(&mut rng));
        let (ap, ar) = (als_from_polynomial(&p).unwrap(), als_from_polynomial(&r).unwrap());
        let (rp, rr) = (rank(&ap).unwrap(), rank(&ar).unwrap());
        let apr = als_from_polynomial(&poly_mul(&p, &r)).unwrap();
        assert_eq!(rank(&apr).unwrap(), rp + rr - 1);
        assert_eq!(rank(&invert(&ap).unwrap()).unwrap(), rp - 1);
    }
}

fn c3_inverse_dimensions() {
    let cases = [
        ("1 - x*y", (true, true), -1),
        ("1 + x*(1 - y)^-1*z", (true, true), -1),
        ("z*(1 - x)^-1", (true, false), 0),
        ("(1 - x)^-1*z", (false, true), 0),
        ("(1 - x*y)^-1", (false, false), 1),
        ("(1 - x)^-1 + (1 - y)^-1", (false, false), 1),
    ];
    for (s, (r, l), delta) in cases {
        let f = m(s);
        let n = f.dim() as i64;
        assert_eq!(type_of(&f).unwrap(), ElementType::new(r, l), "{s}");
        let g = invert(&f).unwrap();
        assert_eq!(g.dim() as i64, n + delta, "{s}");
        let back = invert(&g).unwrap();
        assert_eq!(back.dim() as i64, n, "{s}");
        assert_eq!(back.series_expand(5).unwrap(), f.series_expand(5).unwrap(), "{s}");
    }
}

fn c4_outer_factor_ranks() {
    assert_eq!(rank(&e("(x*y)^-1 * (1 - x*z) * (y*z)^-1")).unwrap(), 4);
    assert_eq!(rank(&e("(x*y)^-1 * (1 - x*z)")).unwrap(), 3);
    assert_eq!(rank(&e("z^-1 * (x*y)^-1 * (1 - x*z)")).unwrap(), 4);
}

fn c5_asymmetry() {
    let cfg = FactorConfig::default();
    let fg = m("(1 - x*y) * (1 - z*y)^-1");
    let gf = m("(1 - z*y)^-1 * (1 - x*y)");
    assert_eq!(fg.dim(), 3);
    let a = is_atom(&fg, &cfg).unwrap();
    assert!(a.atom && !a.incomplete);
    assert_eq!(gf.dim(), 4);
    assert!(!is_atom(&gf, &cfg).unwrap().atom);
    let fz = factorize(&gf, &cfg).unwrap();
    assert_eq!(fz.factors.len(), 2);
    for f in &fz.factors {
        assert!(is_atom(f, &cfg).unwrap().atom);
    }
    let prod = freefield::als::als_scalar_mul(&als_mul_general(&fz.factors[0], &fz.factors[1]).unwrap(), &fz.unit);
    assert_eq!(prod.series_expand(6).unwrap(), gf.series_expand(6).unwrap());
}

fn worked_example() -> Als {
    let r = |v: &[i64]| v.iter().map(|&c| q(c)).collect::<Vec<_>>();
    let rows = vec![
        vec![r(&[-1]), r(&[]), r(&[0, 1]), r(&[-1])],
        vec![r(&[1, 1]), r(&[0, 1]), r(&[-1]), r(&[])],
        vec![r(&[0, 0, 1]), r(&[1]), r(&[0, 1]), r(&[-1])],
        vec![r(&[0, 1]), r(&[]), r(&[-2]), r(&[0, 1])],
    ];
    Als::from_entries(2, &rows, r(&[0, 0, 0, 1])).unwrap()
}

fn c6_golden_factorization() {
    let f = worked_example();
    assert_eq!(rank(&f).unwrap(), 4);
    let xy = ["x", "y"];
    let expected_inv = |s: &str| invert(&eval_str(s, &xy).unwrap()).unwrap();
    let ratio_is_scalar = |found: &Als, expected: &Als| {
        is_scalar(&als_mul_general(found, &invert(expected).unwrap()).unwrap()).unwrap()
    };

    let s = find_left_factor(&f, 2, &FactorConfig::default()).unwrap();
    let cert = s.certificate.expect("a rank 2 left factor");
    assert_eq!(cert.slot, FactorSlot::new(2, SlotType::ZeroZero));
    assert_eq!((cert.left.dim(), cert.right.dim()), (2, 2));
    assert!(cert.verify().unwrap());
    assert!(ratio_is_scalar(&cert.left, &expected_inv("1 - x*y")));
    assert!(ratio_is_scalar(&cert.right, &expected_inv("x*x - 2")));

    let sys = build_block_system(&f, FactorSlot::new(2, SlotType::ZeroZero), SystemOptions::default()).unwrap();
    let eqs = sys.equations();
    assert_eq!(eqs.len(), 24);
    let p = MatQ::from_rows(vec![
        vec![q(2), q(0), q(-2), q(0)],
        vec![q(0), q(1), q(0), q(0)],
        vec![qf(1, 2), q(0), q(0), q(0)],
        vec![q(0), q(0), q(0), q(1)],
    ])
    .unwrap();
    let qm = MatQ::from_rows(vec![
        vec![q(1), q(0), q(0), q(0)],
        vec![q(0), q(1), q(0), q(0)],
        vec![q(0), q(0), q(1), q(0)],
        vec![q(-1), q(0), q(0), q(1)],
    ])
    .unwrap();
    let mut point = vec![q(0); sys.shape.nvars()];
    for i in 0..4 {
        for j in 0..3 {
            point[TransformationShape::alpha_index(4, i, j)] = p[(i, j)].clone();
        }
    }
    for i in 1..4 {
        for j in 0..4 {
            point[TransformationShape::beta_index(4, i, j)] = qm[(i, j)].clone();
        }
    }
    assert!(eqs.iter().all(|g| g.evaluate(&point) == Rational::from_integer(0.into())));

    let basis = buchberger(&eqs, &sys.shape.vars, MonomialOrder::Lex, GroebnerBudget::default()).unwrap();
    let nv = sys.shape.nvars();
    let v = |name: &str| CommPolynomial::var(nv, sys.shape.var_index(name).unwrap());
    let simple = [
        v("a_3_2"),
        v("a_3_3"),
        v("a_4_2"),
        v("a_4_3"),
        v("b_2_4"),
        v("b_3_1"),
        v("b_3_2"),
        v("b_4_1").add(&CommPolynomial::constant(nv, q(1))),
        v("b_4_2"),
    ];
    for g in &simple {
        assert!(basis.reduce(g).unwrap().is_zero(), "{}", g.display(&sys.shape.vars));
    }
}

fn c7_divisibility() {
    let cfg = FactorConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut positive = 0;
    while positive < 20 {
        let (p, h) = (random_poly(&mut rng), random_poly(&mut rng));
        let ph = poly_mul(&p, &h);
        let oracle = poly_left_divide(&p, &ph).expect("p divides p h");
        assert_eq!(poly_mul(&p, &oracle), ph);
        let r = left_divides(&als_from_polynomial(&p).unwrap(), &als_from_polynomial(&ph).unwrap(), &cfg).unwrap();
        let w = r.witness.expect("witness for p | p h");
        let rest = polynomial_of(&minimize(&w.leaves[1]).unwrap()).unwrap().expect("polynomial cofactor");
        assert_eq!(poly_mul(&p, &rest), ph);
        positive += 1;
    }
    let mut negative = 0;
    while negative < 20 {
        let (p, h) = (random_poly(&mut rng), random_poly(&mut rng));
        let hp = poly_mul(&h, &p);
        if poly_left_divide(&p, &hp).is_some() {
            continue;
        }
        let r = left_divides(&als_from_polynomial(&p).unwrap(), &als_from_polynomial(&hp).unwrap(), &cfg).unwrap();
        assert!(r.witness.is_none() && !r.incomplete);
        negative += 1;
    }
}

fn c8_coupling() {
    let h = m("x^-1*z*y^-1*x^-1");
    assert_eq!(h.dim(), 3);
    let slot = FactorSlot::new(2, SlotType::StarOne);
    let s = search_slots(&h, &[slot], &FactorConfig::default()).unwrap();
    assert_eq!(s.slots, vec![(slot, SlotStatus::Absent)]);
    assert!(s.certificate.is_none());
}

fn c9_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut done = 0;
    let mut tries = 0;
    while done < 100 {
        tries += 1;
        assert!(tries < 10_000);
        let ex = random_expr(&mut rng, 4);
        let Ok(series) = series_eval(&ex, 3, 5) else { continue };
        let f = minimize(&eval_to_als(&ex, 3, false).unwrap()).unwrap();
        assert_eq!(f.series_expand(5).unwrap(), series, "{}", ex.display(&XYZ.map(String::from)));
        done += 1;
    }
}

fn c10_units() {
    assert!(is_scalar(&e("x*x^-1")).unwrap());
    let xi = e("x^-1");
    assert!(!is_scalar(&xi).unwrap());
    assert_eq!(rank(&xi).unwrap(), 1);
    assert_eq!(rank(&invert(&xi).unwrap()).unwrap(), 2);
    assert!(is_zero(&e("x - x")).unwrap());
}

fn c11_no_outer_factor() {
    let f = m("(1 - x*y*z) * (1 - z*y*z)^-1");
    assert_eq!(f.dim(), 4);
    let f1 = m("1 - x*y*z");
    let f2 = m("(1 - z*y*z)^-1");
    assert_eq!(f1.dim() + f2.dim(), 7);
    assert!(!is_left_factor(&f1, &f).unwrap());
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn(), Duration); 11] = [
        ("1 word ranks", c1_word_ranks, Duration::from_secs(5)),
        ("2 rank lemma", c2_rank_lemma, Duration::from_secs(30)),
        ("3 minimal inverse dimensions", c3_inverse_dimensions, Duration::from_secs(10)),
        ("4 outer factor ranks", c4_outer_factor_ranks, Duration::from_secs(30)),
        ("5 irreducibility asymmetry", c5_asymmetry, Duration::from_secs(300)),
        ("6 golden factorization", c6_golden_factorization, Duration::from_secs(600)),
        ("7 divisibility equivalence", c7_divisibility, Duration::from_secs(300)),
        ("8 coupling condition", c8_coupling, Duration::from_secs(120)),
        ("9 oracle equivalence", c9_oracle, Duration::from_secs(120)),
        ("10 trivial units", c10_units, Duration::from_secs(5)),
        ("11 no outer factor", c11_no_outer_factor, Duration::from_secs(60)),
    ];
    let mut failed = Vec::new();
    for (name, check, limit) in criteria {
        let t = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(check)).is_ok();
        let took = t.elapsed();
        let pass = ok && took <= limit;
        let line = format!(
            "criterion {name}: {} ({:.2}s, limit {}s{})\n",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            if ok { "" } else { ", assertion failed" }
        );
        std::io::stdout().write_all(line.as_bytes()).unwrap();
        if !pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
