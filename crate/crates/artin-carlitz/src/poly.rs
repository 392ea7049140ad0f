//! Dense univariate polynomials over F_q, the ring R_T = F_q[T].
//!
//! Coefficients are stored in ascending degree order. The representation is
//! canonical: the vector is empty for the zero polynomial and the last
//! element is nonzero otherwise, so equality and hashing are structural.
//! The zero polynomial has degree "minus infinity", encoded as `None`.
//!
//! All arithmetic is schoolbook and takes the field as explicit context.

use crate::error::{Error, Result};
use crate::field::{FiniteField, Fq};
use std::cmp::Ordering;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Fq>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![Fq::ONE] }
    }

    pub fn constant(c: Fq) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { coeffs: vec![c] }
        }
    }

    /// The variable T.
    pub fn var() -> Poly {
        Poly { coeffs: vec![Fq::ZERO, Fq::ONE] }
    }

    pub fn monomial(c: Fq, deg: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Fq::ZERO; deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Fq>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` as the minus-infinity sentinel for 0.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<Fq> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Fq::ONE)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Poly, f: &FiniteField) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.add(self.coeff(i), other.coeff(i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self, f: &FiniteField) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn sub(&self, other: &Poly, f: &FiniteField) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.sub(self.coeff(i), other.coeff(i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn mul(&self, other: &Poly, f: &FiniteField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scaled(&self, c: Fq, f: &FiniteField) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// Multiplication by T^k.
    pub fn shifted(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![Fq::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    /// Division with remainder: self = q*g + r with deg r < deg g.
    pub fn divmod(&self, g: &Poly, f: &FiniteField) -> Result<(Poly, Poly)> {
        let gdeg = g.deg().ok_or(Error::DivisionByZeroPoly)?;
        if self.coeffs.len() < g.coeffs.len() {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead_inv = f.inv(g.leading().unwrap());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Fq::ZERO; rem.len() - gdeg];
        for i in (gdeg..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let scale = f.mul(c, lead_inv);
            quot[i - gdeg] = scale;
            for (k, &gc) in g.coeffs.iter().enumerate() {
                rem[i - gdeg + k] = f.sub(rem[i - gdeg + k], f.mul(scale, gc));
            }
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, g: &Poly, f: &FiniteField) -> Result<Poly> {
        Ok(self.divmod(g, f)?.1)
    }

    /// Monic gcd (or zero when both inputs are zero).
    pub fn gcd(&self, other: &Poly, f: &FiniteField) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f).unwrap();
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Scale to leading coefficient 1.
    pub fn monic(&self, f: &FiniteField) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) if l == Fq::ONE => self.clone(),
            Some(l) => self.scaled(f.inv(l), f),
        }
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*other = g, g monic.
    pub fn ext_gcd(&self, other: &Poly, f: &FiniteField) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (Poly::one(), Poly::zero());
        let (mut v0, mut v1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1, f).unwrap();
            let u = u0.sub(&q.mul(&u1, f), f);
            let v = v0.sub(&q.mul(&v1, f), f);
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
            v0 = v1;
            v1 = v;
        }
        match r0.leading() {
            None => (Poly::zero(), Poly::zero(), Poly::zero()),
            Some(l) => {
                let li = f.inv(l);
                (r0.scaled(li, f), u0.scaled(li, f), v0.scaled(li, f))
            }
        }
    }

    /// Inverse of self modulo m, when gcd(self, m) = 1.
    pub fn inv_mod(&self, m: &Poly, f: &FiniteField) -> Option<Poly> {
        let (g, u, _) = self.ext_gcd(m, f);
        if g.deg() == Some(0) {
            Some(u.rem(m, f).unwrap())
        } else {
            None
        }
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly, f: &FiniteField) -> Poly {
        self.mul(other, f).rem(m, f).unwrap()
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly, f: &FiniteField) -> Poly {
        let mut base = self.rem(m, f).unwrap();
        let mut acc = Poly::one().rem(m, f).unwrap();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m, f);
            }
            base = base.mul_mod(&base, m, f);
            e >>= 1;
        }
        acc
    }

    /// self^{p^k} using the freshman's dream: coefficients to the p^k,
    /// exponents stretched by p^k. Exact in characteristic p.
    pub fn char_power(&self, k: u32, f: &FiniteField) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut stretch: usize = 1;
        for _ in 0..k {
            stretch = stretch.checked_mul(f.p() as usize).expect("char_power overflow");
        }
        let mut out = vec![Fq::ZERO; (self.coeffs.len() - 1) * stretch + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut cc = c;
            for _ in 0..k {
                cc = f.pow(cc, f.p() as u64);
            }
            out[i * stretch] = cc;
        }
        Poly::from_coeffs(out)
    }

    /// self^q = self^{p^t}.
    pub fn q_power(&self, f: &FiniteField) -> Poly {
        self.char_power(f.t(), f)
    }

    pub fn eval(&self, x: Fq, f: &FiniteField) -> Fq {
        let mut acc = Fq::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// Total enumeration order: degree first (zero polynomial least), then
    /// lexicographic on the coefficient sequence (c_0, c_1, ...), elements
    /// compared by index.
    pub fn cmp_enum(&self, other: &Poly) -> Ordering {
        match self.coeffs.len().cmp(&other.coeffs.len()) {
            Ordering::Equal => self.coeffs.cmp(&other.coeffs),
            ord => ord,
        }
    }

    /// Grammar string, highest-degree term first (e.g. `(g+1)*T^2 + g*T + 1`).
    pub fn display(&self, f: &FiniteField) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let cs = f.elem_string(c);
            let coeff = if cs.contains('+') { format!("({cs})") } else { cs };
            let part = match i {
                0 => coeff,
                1 if c == Fq::ONE => "T".into(),
                1 => format!("{coeff}*T"),
                _ if c == Fq::ONE => format!("T^{i}"),
                _ => format!("{coeff}*T^{i}"),
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

/// All polynomials of degree < `len` in enumeration order, starting with 0.
///
/// Equivalently: the canonical representatives of residues modulo any
/// polynomial of degree `len`.
pub struct BoundedPolys {
    q: u32,
    len: usize,
    /// Digits of the next polynomial (coefficient indices, c_0 first), or
    /// `None` before the zero polynomial has been yielded.
    digits: Option<Vec<u32>>,
    done: bool,
}

impl BoundedPolys {
    pub fn new(f: &FiniteField, len: usize) -> BoundedPolys {
        BoundedPolys { q: f.q(), len, digits: None, done: false }
    }
}

impl Iterator for BoundedPolys {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.done {
            return None;
        }
        if self.digits.is_none() {
            if self.len == 0 {
                self.done = true;
            } else {
                self.digits = Some(vec![1]);
            }
            return Some(Poly::zero());
        }
        let d = self.digits.as_mut().unwrap();
        let poly = Poly::from_coeffs(d.iter().map(|&c| Fq(c)).collect());
        // Advance: the last digit is least significant in the lexicographic
        // order; the leading digit wraps back to 1, interior digits to 0.
        let deg = d.len() - 1;
        let mut i = deg + 1;
        loop {
            if i == 0 {
                // Exhausted this degree; move to the next one.
                if d.len() == self.len {
                    self.done = true;
                } else {
                    let n = d.len() + 1;
                    d.clear();
                    d.resize(n, 0);
                    d[n - 1] = 1;
                }
                break;
            }
            i -= 1;
            d[i] += 1;
            if d[i] < self.q {
                break;
            }
            d[i] = if i == deg { 1 } else { 0 };
        }
        Some(poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;
    use crate::parse::parse_poly;

    fn f2() -> FiniteField {
        FiniteField::new(2, 1, None).unwrap()
    }

    fn p(s: &str, f: &FiniteField) -> Poly {
        parse_poly(s, f).unwrap()
    }

    #[test]
    fn degree_sentinel() {
        assert_eq!(Poly::zero().deg(), None);
        assert_eq!(Poly::one().deg(), Some(0));
        assert!(Poly::zero().deg() < Poly::one().deg());
    }

    #[test]
    fn deg_of_product_adds() {
        let f = FiniteField::new(3, 2, None).unwrap();
        let a = p("(g+1)*T^3 + 2*T", &f);
        let b = p("g*T^2 + 1", &f);
        let prod = a.mul(&b, &f);
        assert_eq!(prod.deg(), Some(5));
    }

    #[test]
    fn divmod_spec_examples() {
        let f = f2();
        // (T^2, T) -> (T, 0)
        let (q, r) = p("T^2", &f).divmod(&p("T", &f), &f).unwrap();
        assert_eq!(q, p("T", &f));
        assert!(r.is_zero());
        // over F_2: (T^3+T+1, T^2+1) -> (T, 1); recombine to check.
        let fpoly = p("T^3+T+1", &f);
        let g = p("T^2+1", &f);
        let (q, r) = fpoly.divmod(&g, &f).unwrap();
        assert_eq!(q.mul(&g, &f).add(&r, &f), fpoly);
        assert_eq!(q, p("T", &f));
        assert_eq!(r, Poly::one());
        // (f, 1) -> (f, 0)
        let (q, r) = fpoly.divmod(&Poly::one(), &f).unwrap();
        assert_eq!(q, fpoly);
        assert!(r.is_zero());
        assert_eq!(
            fpoly.divmod(&Poly::zero(), &f),
            Err(crate::error::Error::DivisionByZeroPoly)
        );
    }

    #[test]
    fn divmod_roundtrip_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for (pp, t) in [(2u64, 1u32), (3, 1), (2, 2), (3, 2)] {
            let f = FiniteField::new(pp, t, None).unwrap();
            for _ in 0..200 {
                let fd = rng.gen_range(0..8usize);
                let gd = rng.gen_range(0..5usize);
                let fp = Poly::from_coeffs(
                    (0..=fd).map(|_| f.elem(rng.gen_range(0..f.q()))).collect(),
                );
                let gp = Poly::from_coeffs(
                    (0..=gd).map(|_| f.elem(rng.gen_range(0..f.q()))).collect(),
                );
                if gp.is_zero() {
                    continue;
                }
                let (q, r) = fp.divmod(&gp, &f).unwrap();
                assert_eq!(q.mul(&gp, &f).add(&r, &f), fp);
                assert!(r.deg() < gp.deg());
            }
        }
    }

    #[test]
    fn gcd_and_inverse() {
        let f = f2();
        let a = p("T^2+T", &f); // T(T+1)
        let b = p("T^2", &f);
        assert_eq!(a.gcd(&b, &f), p("T", &f));

        let m = p("T^3+T+1", &f); // irreducible over F_2
        let x = p("T+1", &f);
        let xi = x.inv_mod(&m, &f).unwrap();
        assert_eq!(x.mul_mod(&xi, &m, &f), Poly::one());
        assert!(p("T", &f).inv_mod(&p("T^2", &f), &f).is_none());
    }

    #[test]
    fn char_power_matches_repeated_multiplication() {
        let f = FiniteField::new(3, 2, None).unwrap();
        let a = p("g*T^2 + (g+1)*T + 2", &f);
        let mut cubed = Poly::one();
        for _ in 0..3 {
            cubed = cubed.mul(&a, &f);
        }
        assert_eq!(a.char_power(1, &f), cubed);
        assert_eq!(a.q_power(&f), a.char_power(2, &f));
    }

    #[test]
    fn bounded_enumeration_order() {
        let f = f2();
        let all: Vec<String> = BoundedPolys::new(&f, 2).map(|p| p.display(&f)).collect();
        assert_eq!(all, vec!["0", "1", "T", "T + 1"]);
        let f3 = FiniteField::new(3, 1, None).unwrap();
        let all: Vec<String> = BoundedPolys::new(&f3, 2).map(|p| p.display(&f3)).collect();
        assert_eq!(
            all,
            vec!["0", "1", "2", "T", "2*T", "T + 1", "2*T + 1", "T + 2", "2*T + 2"]
        );
        // Count check: q^len polynomials of degree < len.
        let f4 = FiniteField::new(2, 2, None).unwrap();
        assert_eq!(BoundedPolys::new(&f4, 3).count(), 64);
        // Strictly increasing in enumeration order.
        let mut prev: Option<Poly> = None;
        for q in BoundedPolys::new(&f4, 3) {
            if let Some(pr) = &prev {
                assert_eq!(pr.cmp_enum(&q), std::cmp::Ordering::Less);
            }
            prev = Some(q);
        }
    }
}
