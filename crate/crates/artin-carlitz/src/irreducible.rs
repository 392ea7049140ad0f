//! Irreducibility testing, enumeration of monic irreducibles, and
//! factorization over F_q — all deterministic.
//!
//! Irreducibility is Rabin's criterion: f of degree n is irreducible iff
//! T^{q^n} = T mod f and gcd(T^{q^{n/l}} - T, f) = 1 for every prime l | n.
//! Factorization strips factors by trial division in enumeration order; a
//! divisor found after all smaller degrees were stripped is automatically
//! irreducible, which keeps the whole pipeline free of probabilistic steps.

use crate::error::{Error, Result};
use crate::field::{FiniteField, Fq};
use crate::poly::Poly;
use std::cmp::Ordering;

/// A monic irreducible polynomial over F_q.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PrimePoly {
    poly: Poly,
    degree: usize,
}

impl PrimePoly {
    pub fn new(poly: Poly, f: &FiniteField) -> Result<PrimePoly> {
        if !poly.is_monic() {
            return Err(Error::ReducibleModulus(format!(
                "{} is not monic",
                poly.display(f)
            )));
        }
        if !is_irreducible(&poly, f)? {
            return Err(Error::ReducibleModulus(format!(
                "{} is not irreducible",
                poly.display(f)
            )));
        }
        let degree = poly.deg().unwrap();
        Ok(PrimePoly { poly, degree })
    }

    /// For factors discovered by exhaustive trial division, where
    /// irreducibility holds by construction.
    pub(crate) fn new_unchecked(poly: Poly) -> PrimePoly {
        debug_assert!(poly.is_monic());
        let degree = poly.deg().unwrap();
        PrimePoly { poly, degree }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// P^k.
    pub fn power(&self, k: u32, f: &FiniteField) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(&self.poly, f);
        }
        acc
    }

    pub fn cmp_enum(&self, other: &PrimePoly) -> Ordering {
        self.poly.cmp_enum(&other.poly)
    }

    pub fn display(&self, f: &FiniteField) -> String {
        self.poly.display(f)
    }
}

fn prime_factors_u32(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Deterministic irreducibility test (degree 0 counts as reducible).
pub fn is_irreducible(poly: &Poly, f: &FiniteField) -> Result<bool> {
    let n = match poly.deg() {
        None => return Err(Error::ZeroPolynomial),
        Some(n) => n,
    };
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    // Root scan kills most reducibles cheaply at small q.
    if f.q() as u64 <= 256 {
        for x in f.elements() {
            if poly.eval(x, f).is_zero() {
                return Ok(false);
            }
        }
        if n <= 3 {
            // Degree 2 and 3 are irreducible iff they have no roots.
            return Ok(true);
        }
    }
    let m = poly.monic(f);
    // Frobenius powers of T modulo f: frob[k] = T^{q^k} mod f.
    let mut frob = Vec::with_capacity(n + 1);
    frob.push(Poly::var().rem(&m, f)?);
    for k in 0..n {
        let next = frob[k].q_power(f).rem(&m, f)?;
        frob.push(next);
    }
    let t_poly = Poly::var().rem(&m, f)?;
    if frob[n] != t_poly {
        return Ok(false);
    }
    for l in prime_factors_u32(n as u32) {
        let diff = frob[n / l as usize].sub(&t_poly, f);
        if m.gcd(&diff, f).deg() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All coefficient vectors (c_0, ..., c_{len-1}) over F_q in lexicographic
/// order with c_0 most significant: the tails of monic degree-`len`
/// candidates, so candidates come out sorted by coefficient sequence.
struct LexTails {
    q: u32,
    digits: Vec<u32>,
    started: bool,
    done: bool,
}

impl LexTails {
    fn new(q: u32, len: usize) -> LexTails {
        LexTails { q, digits: vec![0; len], started: false, done: false }
    }
}

impl Iterator for LexTails {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.digits.clone());
        }
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.q {
                break;
            }
            self.digits[i] = 0;
        }
        Some(self.digits.clone())
    }
}

fn monic_from_tail(tail: &[u32]) -> Poly {
    let mut coeffs: Vec<Fq> = tail.iter().map(|&c| Fq(c)).collect();
    coeffs.push(Fq::ONE);
    Poly::from_coeffs(coeffs)
}

/// Every monic irreducible of degree <= `d_max`, each exactly once, in
/// degree-then-lexicographic order of coefficient sequences.
pub struct MonicIrreducibles<'a> {
    field: &'a FiniteField,
    d_max: usize,
    inner: LexTails,
    degree: usize,
}

impl<'a> MonicIrreducibles<'a> {
    pub fn new(field: &'a FiniteField, d_max: usize) -> MonicIrreducibles<'a> {
        MonicIrreducibles {
            field,
            d_max,
            inner: LexTails::new(field.q(), 1),
            degree: 1,
        }
    }
}

impl Iterator for MonicIrreducibles<'_> {
    type Item = PrimePoly;

    fn next(&mut self) -> Option<PrimePoly> {
        if self.d_max == 0 {
            return None;
        }
        loop {
            match self.inner.next() {
                Some(tail) => {
                    let cand = monic_from_tail(&tail);
                    if is_irreducible(&cand, self.field).unwrap() {
                        return Some(PrimePoly::new_unchecked(cand));
                    }
                }
                None => {
                    if self.degree == self.d_max {
                        return None;
                    }
                    self.degree += 1;
                    self.inner = LexTails::new(self.field.q(), self.degree);
                }
            }
        }
    }
}

/// Monic factorization into (prime, multiplicity) pairs in enumeration
/// order. The leading unit is dropped: this factors the monic part.
pub fn factor(poly: &Poly, f: &FiniteField) -> Result<Vec<(PrimePoly, u32)>> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rest = poly.monic(f);
    let mut out: Vec<(PrimePoly, u32)> = Vec::new();
    let mut degree = 1usize;
    while 2 * degree <= rest.deg().unwrap() {
        for tail in LexTails::new(f.q(), degree) {
            let cand = monic_from_tail(&tail);
            let mut mult = 0u32;
            loop {
                let (q, r) = rest.divmod(&cand, f)?;
                if !r.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((PrimePoly::new_unchecked(cand), mult));
            }
            if rest.deg().unwrap() < 2 * degree {
                break;
            }
        }
        if rest.deg() == Some(0) {
            break;
        }
        degree += 1;
    }
    if rest.deg().unwrap_or(0) >= 1 {
        // All smaller-degree primes were stripped, so the cofactor is prime.
        out.push((PrimePoly::new_unchecked(rest), 1));
    }
    Ok(out)
}
