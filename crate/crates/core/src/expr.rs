//! Rational expressions in noncommuting letters: syntax tree, parser and
//! printer.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ['^-1']
//! base   := rational | letter | '(' expr ')' | 'inv(' expr ')'
//! ```
//!
//! `a - b` is stored as `Sum(a, Neg(b))`. Juxtaposition is rejected.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::qlinalg::Rational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Const(Rational),
    Letter(usize),
    Neg(Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
    Inverse(Box<Expr>),
}

impl Expr {
    pub fn constant(c: Rational) -> Self {
        Expr::Const(c)
    }

    pub fn letter(i: usize) -> Self {
        Expr::Letter(i)
    }

    pub fn neg(a: Expr) -> Self {
        Expr::Neg(Box::new(a))
    }

    pub fn sum(a: Expr, b: Expr) -> Self {
        Expr::Sum(Box::new(a), Box::new(b))
    }

    pub fn product(a: Expr, b: Expr) -> Self {
        Expr::Product(Box::new(a), Box::new(b))
    }

    pub fn inverse(a: Expr) -> Self {
        Expr::Inverse(Box::new(a))
    }

    pub fn parse(text: &str, letters: &[String]) -> Result<Expr> {
        let mut p = Parser { src: text, pos: 0, letters };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected input (explicit '*' is required between factors)"));
        }
        Ok(e)
    }

    /// Canonical text form; parsing it gives back the same tree.
    pub fn display(&self, letters: &[String]) -> String {
        let mut s = String::new();
        write_expr(self, letters, &mut s);
        s
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Letter(_) => 1,
            Expr::Neg(a) | Expr::Inverse(a) => 1 + a.size(),
            Expr::Sum(a, b) | Expr::Product(a, b) => 1 + a.size() + b.size(),
        }
    }
}

fn letter_name(i: usize, letters: &[String]) -> String {
    letters.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1))
}

fn write_expr(e: &Expr, letters: &[String], out: &mut String) {
    match e {
        Expr::Sum(a, b) => {
            write_expr(a, letters, out);
            match b.as_ref() {
                Expr::Neg(c) => {
                    out.push_str(" - ");
                    write_term(c, letters, out);
                }
                _ => {
                    out.push_str(" + ");
                    write_term(b, letters, out);
                }
            }
        }
        Expr::Neg(a) => {
            out.push('-');
            write_term(a, letters, out);
        }
        _ => write_term(e, letters, out),
    }
}

fn write_term(e: &Expr, letters: &[String], out: &mut String) {
    match e {
        Expr::Sum(..) | Expr::Neg(..) => {
            out.push('(');
            write_expr(e, letters, out);
            out.push(')');
        }
        Expr::Product(a, b) => {
            write_term(a, letters, out);
            out.push_str(" * ");
            write_factor(b, letters, out);
        }
        _ => write_factor(e, letters, out),
    }
}

fn write_factor(e: &Expr, letters: &[String], out: &mut String) {
    match e {
        Expr::Inverse(a) => {
            write_base(a, letters, out);
            out.push_str("^-1");
        }
        _ => write_base(e, letters, out),
    }
}

fn write_base(e: &Expr, letters: &[String], out: &mut String) {
    match e {
        Expr::Const(c) if !c.is_negative() && c.is_integer() => out.push_str(&c.to_string()),
        Expr::Letter(i) => out.push_str(&letter_name(*i, letters)),
        Expr::Const(c) if !c.is_negative() => {
            out.push('(');
            out.push_str(&c.to_string());
            out.push(')');
        }
        _ => {
            out.push('(');
            write_expr(e, letters, out);
            out.push(')');
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    letters: &'a [String],
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = if self.eat('-') {
            Expr::neg(self.term()?)
        } else {
            self.term()?
        };
        loop {
            if self.eat('+') {
                e = Expr::sum(e, self.term()?);
            } else if self.eat('-') {
                e = Expr::sum(e, Expr::neg(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.factor()?;
        while self.eat('*') {
            e = Expr::product(e, self.factor()?);
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr> {
        let b = self.base()?;
        if self.eat('^') {
            self.expect('-')?;
            self.expect('1')?;
            return Ok(Expr::inverse(b));
        }
        Ok(b)
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn base(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digit run");
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let den = self.digits();
                    if den.is_empty() {
                        return Err(self.err("expected denominator"));
                    }
                    let den: BigInt = den.parse().expect("digit run");
                    if den.is_zero() {
                        self.pos = start;
                        return Err(self.err("zero denominator"));
                    }
                    Ok(Expr::Const(Rational::new(num, den)))
                } else {
                    Ok(Expr::Const(Rational::from_integer(num)))
                }
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    self.pos += self.peek().map_or(1, char::len_utf8);
                }
                let name = &self.src[start..self.pos];
                if let Some(i) = self.letters.iter().position(|l| l == name) {
                    return Ok(Expr::Letter(i));
                }
                if name == "inv" {
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::inverse(e));
                }
                self.pos = start;
                Err(self.err(&format!("unknown letter '{name}'")))
            }
            Some(_) => Err(self.err("expected a number, letter or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{q, qf};
    use proptest::prelude::*;

    fn xyz() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    fn parse(s: &str) -> Result<Expr> {
        Expr::parse(s, &xyz())
    }

    pub(crate) fn canonical_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0i64..5).prop_map(|n| Expr::Const(q(n))),
            (1i64..4, 2i64..5).prop_map(|(n, d)| Expr::Const(qf(n, d))),
            (0usize..3).prop_map(Expr::Letter),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Expr::neg),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sum(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::product(a, b)),
                inner.prop_map(Expr::inverse),
            ]
        })
    }

    #[test]
    fn product_of_two_inverses() {
        let e = parse("(1 - x*y)^-1 * (x*x - 2)^-1").unwrap();
        match e {
            Expr::Product(a, b) => {
                assert!(matches!(*a, Expr::Inverse(_)));
                assert!(matches!(*b, Expr::Inverse(_)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inv_call_is_inverse() {
        assert_eq!(parse("inv(x)").unwrap(), parse("x^-1").unwrap());
    }

    #[test]
    fn nested_sum() {
        let e = parse("x + ((1-x)^-1 + x^-1)").unwrap();
        let inner = Expr::sum(
            Expr::inverse(Expr::sum(Expr::Const(q(1)), Expr::neg(Expr::Letter(0)))),
            Expr::inverse(Expr::Letter(0)),
        );
        assert_eq!(e, Expr::sum(Expr::Letter(0), inner));
    }

    #[test]
    fn errors_carry_position() {
        assert_eq!(parse("x y"), Err(Error::Parse { pos: 2, msg: "unexpected input (explicit '*' is required between factors)".into() }));
        match parse("x + w") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("(x"), Err(Error::Parse { .. })));
        assert!(matches!(parse("1/0"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn fractions_and_unary_minus() {
        assert_eq!(parse("3/6").unwrap(), Expr::Const(qf(1, 2)));
        assert_eq!(parse("-x").unwrap(), Expr::neg(Expr::Letter(0)));
        assert_eq!(parse("1 - -x").ok(), None);
    }

    #[test]
    fn custom_letters() {
        let letters = vec!["a1".to_string(), "b".to_string()];
        let e = Expr::parse("a1*b^-1", &letters).unwrap();
        assert_eq!(e.display(&letters), "a1 * b^-1");
    }

    proptest! {
        #[test]
        fn parse_print_roundtrip(e in canonical_expr()) {
            let text = e.display(&xyz());
            prop_assert_eq!(parse(&text).unwrap(), e);
        }
    }
}
