//! Parser for the polynomial/rational-function text grammar.
//!
//! Variable `T`; integer coefficients for prime fields; the generator symbol
//! `g` for extension fields (e.g. `(g+1)*T^2 + g*T + 1`); `^` for exponents;
//! `*` optional before a variable; rational functions as `num / den` with
//! parentheses. Whitespace is insignificant. Expressions are evaluated in
//! F_q(T), so `1/T + 1/(T+1)` is a valid input.

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tok {
    Int(u64),
    Gen,
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<(Tok, usize)>> {
    let mut toks = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                let mut v: u64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add((bytes[i] - b'0') as u64))
                        .ok_or(Error::Parse { pos: start, msg: "integer too large".into() })?;
                    i += 1;
                }
                toks.push((Tok::Int(v), start));
            }
            'g' => {
                toks.push((Tok::Gen, i));
                i += 1;
            }
            'T' => {
                toks.push((Tok::Var, i));
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            _ => {
                return Err(Error::Parse { pos: i, msg: format!("unexpected character '{c}'") });
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    field: &'a FiniteField,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|&(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let f = self.field;
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?, f);
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?, f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let f = self.field;
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?, f);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if rhs.is_zero() {
                        return self.err("division by zero");
                    }
                    acc = acc.div(&rhs, f)?;
                }
                // Implicit multiplication: `3T`, `2g`, `T(T+1)`.
                Some(Tok::Int(_)) | Some(Tok::Gen) | Some(Tok::Var) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.unary()?, f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.peek() == Some(Tok::Minus) {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(v.neg(self.field));
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let mut base = self.atom()?;
        while self.peek() == Some(Tok::Caret) {
            self.pos += 1;
            let e = match self.bump() {
                Some(Tok::Int(e)) => e,
                _ => return self.err("expected a nonnegative integer exponent"),
            };
            if e > u32::MAX as u64 {
                return self.err("exponent too large");
            }
            base = pow_ratfunc(&base, e as u32, self.field);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.bump() {
            Some(Tok::Int(v)) => Ok(RatFunc::constant(self.field.from_int(v))),
            Some(Tok::Gen) => {
                if self.field.is_prime_field() {
                    self.err("generator symbol g is only valid for extension fields")
                } else {
                    Ok(RatFunc::constant(self.field.generator()))
                }
            }
            Some(Tok::Var) => Ok(RatFunc::from_poly(Poly::var())),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => self.err("expected ')'"),
                }
            }
            _ => self.err("expected a value"),
        }
    }
}

fn pow_ratfunc(base: &RatFunc, mut e: u32, f: &FiniteField) -> RatFunc {
    let mut acc = RatFunc::from_poly(Poly::one());
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b, f);
        }
        e >>= 1;
        if e > 0 {
            b = b.mul(&b, f);
        }
    }
    acc
}

/// Parse an expression of the grammar as an element of F_q(T).
pub fn parse_ratfunc(input: &str, field: &FiniteField) -> Result<RatFunc> {
    let toks = tokenize(input)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty input".into() });
    }
    let mut p = Parser { toks, pos: 0, field, end: input.len() };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Parse an expression that must reduce to a polynomial.
pub fn parse_poly(input: &str, field: &FiniteField) -> Result<Poly> {
    let r = parse_ratfunc(input, field)?;
    if !r.is_polynomial() {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("expected a polynomial, got a proper fraction: {input}"),
        });
    }
    Ok(r.num().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;

    #[test]
    fn parse_basics() {
        let f = FiniteField::new(2, 1, None).unwrap();
        assert_eq!(parse_poly("T^2+T+1", &f).unwrap().deg(), Some(2));
        assert_eq!(parse_poly("T ^ 2 + T + 1", &f).unwrap().deg(), Some(2));
        assert_eq!(parse_poly("3", &f).unwrap(), Poly::one());
        let r = parse_ratfunc("1/T^2", &f).unwrap();
        assert_eq!(r.den().deg(), Some(2));
        assert_eq!(r.num(), &Poly::one());
        // 1/T + 1/(T+1) = 1/(T^2+T) over F_2.
        let sum = parse_ratfunc("1/T + 1/(T+1)", &f).unwrap();
        assert_eq!(sum, parse_ratfunc("1/(T^2+T)", &f).unwrap());
    }

    #[test]
    fn parse_extension_field() {
        let f = FiniteField::new(2, 2, Some(vec![1, 1, 1])).unwrap();
        let p = parse_poly("(g+1)*T^2 + g*T + 1", &f).unwrap();
        assert_eq!(p.deg(), Some(2));
        assert_eq!(p.coeff(2), f.add(f.generator(), Fq::ONE));
        assert_eq!(p.coeff(1), f.generator());
        assert_eq!(p.coeff(0), Fq::ONE);
        // g^2 = g + 1 under x^2+x+1.
        assert_eq!(
            parse_poly("g^2", &f).unwrap(),
            Poly::constant(f.add(f.generator(), Fq::ONE))
        );
        // Implicit multiplication.
        assert_eq!(parse_poly("2g", &f).unwrap(), Poly::zero());
        assert_eq!(parse_poly("3T", &f).unwrap(), parse_poly("T", &f).unwrap());
    }

    #[test]
    fn parse_errors() {
        let f2 = FiniteField::new(2, 1, None).unwrap();
        assert!(matches!(parse_ratfunc("g", &f2), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("1/(T-T)", &f2), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("T +", &f2), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("T^(2)", &f2), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("x", &f2), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("", &f2), Err(Error::Parse { .. })));
    }

    #[test]
    fn display_roundtrip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(23);
        for (pp, t) in [(2u64, 1u32), (3, 1), (2, 2), (3, 2)] {
            let f = FiniteField::new(pp, t, None).unwrap();
            for _ in 0..80 {
                let mk = |rng: &mut rand::rngs::StdRng, d: usize| {
                    Poly::from_coeffs(
                        (0..=d).map(|_| f.elem(rng.gen_range(0..f.q()))).collect(),
                    )
                };
                let nd = rng.gen_range(0..5);
                let num = mk(&mut rng, nd);
                let dd = rng.gen_range(0..5);
                let den = mk(&mut rng, dd);
                if den.is_zero() {
                    continue;
                }
                let x = RatFunc::new(num, den, &f).unwrap();
                let s = x.display(&f);
                assert_eq!(parse_ratfunc(&s, &f).unwrap(), x, "roundtrip of {s}");
            }
        }
    }
}
