//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | 'x' integer | 'a' | '(' expr ')'
//! ```
//!
//! `a` denotes the adjoined generator of a proper extension field.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{Exponent, MultiPoly};
use crate::arith::Field;
use crate::error::{Error, Result};

type Raw<E> = BTreeMap<Exponent, E>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Gen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            b'x' => {
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(Error::parse(start, "expected variable index after `x`"));
                }
                let idx: usize = text[ds..i]
                    .parse()
                    .map_err(|_| Error::parse(start, "variable index too large"))?;
                out.push((start, Tok::Var(idx)));
                continue;
            }
            b'a' => out.push((start, Tok::Gen)),
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::parse(start, format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    field: &'a F,
    nvars: usize,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl<'a, F: Field> Parser<'a, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn constant(&self, c: F::Elem) -> Raw<F::Elem> {
        let mut r = Raw::new();
        if !self.field.is_zero(&c) {
            r.insert(Exponent::zero(self.nvars), c);
        }
        r
    }

    fn expr(&mut self) -> Result<Raw<F::Elem>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = raw_add(self.field, acc, &t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = raw_add(self.field, acc, &raw_neg(self.field, &t));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Raw<F::Elem>> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let u = self.unary()?;
            acc = raw_mul(self.field, &acc, &u);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Raw<F::Elem>> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                let u = self.unary()?;
                Ok(raw_neg(self.field, &u))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Raw<F::Elem>> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let e: u32 = n
                    .try_into()
                    .map_err(|_| Error::parse(at, "exponent too large"))?;
                if e > 64 {
                    return Err(Error::parse(at, "exponent too large"));
                }
                let mut acc = self.constant(self.field.one());
                for _ in 0..e {
                    acc = raw_mul(self.field, &acc, &base);
                }
                Ok(acc)
            }
            _ => Err(Error::parse(at, "expected a non-negative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Raw<F::Elem>> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let dat = self.offset();
                    match self.bump() {
                        Some(Tok::Int(d)) => {
                            let v = self
                                .field
                                .from_ratio(&n, &d)
                                .map_err(|e| Error::parse(dat, e.to_string()))?;
                            Ok(self.constant(v))
                        }
                        _ => Err(Error::parse(dat, "expected integer denominator after `/`")),
                    }
                } else {
                    Ok(self.constant(self.field.from_bigint(&n)))
                }
            }
            Some(Tok::Var(i)) => {
                if i >= self.nvars {
                    return Err(Error::parse(
                        at,
                        format!("variable x{i} out of range for {} variables", self.nvars),
                    ));
                }
                let mut r = Raw::new();
                r.insert(Exponent::unit(self.nvars, i), self.field.one());
                Ok(r)
            }
            Some(Tok::Gen) => match self.field.generator() {
                Some(g) => Ok(self.constant(g)),
                None => Err(Error::parse(
                    at,
                    format!("`a` is undefined over {}", self.field.spec()),
                )),
            },
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let cat = self.offset();
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::parse(cat, "expected `)`")),
                }
            }
            Some(Tok::Slash) => Err(Error::parse(
                at,
                "division is only allowed between integer literals",
            )),
            Some(t) => Err(Error::parse(at, format!("unexpected token {t:?}"))),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }
}

fn raw_add<F: Field>(f: &F, mut a: Raw<F::Elem>, b: &Raw<F::Elem>) -> Raw<F::Elem> {
    for (e, c) in b {
        let s = match a.get(e) {
            Some(v) => f.add(v, c),
            None => c.clone(),
        };
        if f.is_zero(&s) {
            a.remove(e);
        } else {
            a.insert(e.clone(), s);
        }
    }
    a
}

fn raw_neg<F: Field>(f: &F, a: &Raw<F::Elem>) -> Raw<F::Elem> {
    a.iter().map(|(e, c)| (e.clone(), f.neg(c))).collect()
}

fn raw_mul<F: Field>(f: &F, a: &Raw<F::Elem>, b: &Raw<F::Elem>) -> Raw<F::Elem> {
    let mut out = Raw::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea.product(eb);
            let s = match out.get(&e) {
                Some(v) => f.add(v, &f.mul(ca, cb)),
                None => f.mul(ca, cb),
            };
            if f.is_zero(&s) {
                out.remove(&e);
            } else {
                out.insert(e, s);
            }
        }
    }
    out
}

fn parse_raw<F: Field>(field: &F, text: &str, nvars: usize) -> Result<Raw<F::Elem>> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::parse(0, "empty input"));
    }
    let mut p = Parser {
        field,
        nvars,
        toks,
        pos: 0,
        end: text.len(),
    };
    let raw = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::parse(p.offset(), "unexpected trailing input"));
    }
    Ok(raw)
}

/// Parses a homogeneous form in `x0..x{nvars-1}`. A zero result gets degree 0.
pub fn parse_poly<F: Field>(field: &F, text: &str, nvars: usize) -> Result<MultiPoly<F>> {
    let raw = parse_raw(field, text, nvars)?;
    let Some(degree) = raw.keys().next().map(Exponent::degree) else {
        return Ok(MultiPoly::zero(field, nvars, 0));
    };
    let offending: Vec<_> = raw.iter().filter(|(e, _)| e.degree() != degree).collect();
    if !offending.is_empty() {
        let show = |(e, c): (&Exponent, &F::Elem)| {
            MultiPoly::monomial(field, e.clone(), c.clone()).to_string()
        };
        let names: Vec<String> = offending.into_iter().map(show).collect();
        return Err(Error::NotHomogeneous(format!(
            "leading degree is {degree}, but these terms differ: {}",
            names.join(", ")
        )));
    }
    MultiPoly::from_terms(field, nvars, degree, raw)
}

/// Parses a field constant such as `3`, `-2/5` or `3*a+1`.
pub fn parse_scalar<F: Field>(field: &F, text: &str) -> Result<F::Elem> {
    let raw = parse_raw(field, text, 0)?;
    Ok(raw
        .into_iter()
        .next()
        .map(|(_, c)| c)
        .unwrap_or_else(|| field.zero()))
}
