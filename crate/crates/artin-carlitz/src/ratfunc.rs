//! Rational functions num/den over F_q(T) in lowest terms with monic
//! denominator, so equality is structural. Valuations at finite primes and
//! at infinity, and exact partial-fraction decomposition.

use crate::error::{Error, Result};
use crate::field::{FiniteField, Fq};
use crate::irreducible::{self, PrimePoly};
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// A place of F_q(T): a monic irreducible polynomial or the infinite prime.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Place {
    Finite(PrimePoly),
    Infinity,
}

/// Order of vanishing at a place; `PlusInfinity` for the zero function.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    Finite(i64),
    PlusInfinity,
}

/// One pole block of a partial-fraction decomposition: numerator/prime^order
/// with deg numerator < order * deg prime and gcd(numerator, prime) = 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PoleTerm {
    pub prime: PrimePoly,
    pub order: u32,
    pub numerator: Poly,
}

impl RatFunc {
    /// Construct num/den in canonical form: gcd-reduced, monic denominator.
    pub fn new(num: Poly, den: Poly, f: &FiniteField) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        if num.is_zero() {
            return Ok(RatFunc { num: Poly::zero(), den: Poly::one() });
        }
        let g = num.gcd(&den, f);
        let (num, den) = if g.deg() == Some(0) {
            (num, den)
        } else {
            (
                num.divmod(&g, f).unwrap().0,
                den.divmod(&g, f).unwrap().0,
            )
        };
        let lead = den.leading().unwrap();
        if lead == Fq::ONE {
            Ok(RatFunc { num, den })
        } else {
            let li = f.inv(lead);
            Ok(RatFunc { num: num.scaled(li, f), den: den.scaled(li, f) })
        }
    }

    pub fn zero() -> RatFunc {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Fq) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.deg() == Some(0)
    }

    pub fn is_constant(&self) -> bool {
        self.is_polynomial() && self.num.is_constant()
    }

    /// deg num - deg den, which equals minus the valuation at infinity.
    pub fn degree(&self) -> Option<i64> {
        self.num.deg().map(|n| n as i64 - self.den.deg().unwrap() as i64)
    }

    pub fn add(&self, other: &RatFunc, f: &FiniteField) -> RatFunc {
        let num = self
            .num
            .mul(&other.den, f)
            .add(&other.num.mul(&self.den, f), f);
        RatFunc::new(num, self.den.mul(&other.den, f), f).unwrap()
    }

    pub fn neg(&self, f: &FiniteField) -> RatFunc {
        RatFunc { num: self.num.neg(f), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc, f: &FiniteField) -> RatFunc {
        self.add(&other.neg(f), f)
    }

    pub fn mul(&self, other: &RatFunc, f: &FiniteField) -> RatFunc {
        RatFunc::new(
            self.num.mul(&other.num, f),
            self.den.mul(&other.den, f),
            f,
        )
        .unwrap()
    }

    pub fn scaled(&self, c: Fq, f: &FiniteField) -> RatFunc {
        RatFunc { num: self.num.scaled(c, f), den: self.den.clone() }
    }

    pub fn div(&self, other: &RatFunc, f: &FiniteField) -> Result<RatFunc> {
        if other.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        RatFunc::new(
            self.num.mul(&other.den, f),
            self.den.mul(&other.num, f),
            f,
        )
    }

    pub fn pow(&self, e: u32, f: &FiniteField) -> RatFunc {
        let mut acc = RatFunc::from_poly(Poly::one());
        for _ in 0..e {
            acc = acc.mul(self, f);
        }
        acc
    }

    /// nu_P or nu_infinity. The degree-sum identity
    /// sum_P nu_P(r) deg P + nu_inf(r) = 0 holds for every nonzero r.
    pub fn valuation(&self, at: &Place, f: &FiniteField) -> Valuation {
        if self.is_zero() {
            return Valuation::PlusInfinity;
        }
        match at {
            Place::Infinity => {
                Valuation::Finite(self.den.deg().unwrap() as i64 - self.num.deg().unwrap() as i64)
            }
            Place::Finite(p) => {
                // num and den are coprime, so at most one side is divisible.
                Valuation::Finite(
                    multiplicity(&self.num, p.poly(), f) as i64
                        - multiplicity(&self.den, p.poly(), f) as i64,
                )
            }
        }
    }

    /// Exact decomposition r = polypart + sum numerator_i / prime_i^order_i
    /// with deg numerator_i < order_i * deg prime_i, primes in enumeration
    /// order.
    pub fn partial_fractions(&self, f: &FiniteField) -> (Poly, Vec<PoleTerm>) {
        if self.is_zero() {
            return (Poly::zero(), Vec::new());
        }
        let (polypart, rem) = self.num.divmod(&self.den, f).unwrap();
        if rem.is_zero() {
            return (polypart, Vec::new());
        }
        let factors = irreducible::factor(&self.den, f).unwrap();
        let mut terms = Vec::with_capacity(factors.len());
        for (prime, order) in factors {
            let pk = prime.power(order, f);
            let cofactor = self.den.divmod(&pk, f).unwrap().0;
            // rem/den = sum rem * cofactor^{-1} mod prime^order / prime^order.
            let inv = cofactor.inv_mod(&pk, f).expect("cofactor coprime to prime power");
            let numerator = rem.mul_mod(&inv, &pk, f);
            debug_assert!(!numerator.is_zero());
            terms.push(PoleTerm { prime, order, numerator });
        }
        (polypart, terms)
    }

    /// Evaluate at a root of the irreducible q_mod inside the residue field
    /// F_q[T]/(q_mod). None when the denominator vanishes there.
    pub fn eval_in_residue(&self, q_mod: &Poly, f: &FiniteField) -> Option<Poly> {
        let den = self.den.rem(q_mod, f).unwrap();
        let inv = den.inv_mod(q_mod, f)?;
        Some(self.num.rem(q_mod, f).unwrap().mul_mod(&inv, q_mod, f))
    }

    pub fn display(&self, f: &FiniteField) -> String {
        if self.is_polynomial() {
            self.num.display(f)
        } else {
            format!("({}) / ({})", self.num.display(f), self.den.display(f))
        }
    }
}

/// Multiplicity of the prime `p` in `poly` (0 when coprime).
pub fn multiplicity(poly: &Poly, p: &Poly, f: &FiniteField) -> u32 {
    let mut count = 0;
    let mut cur = poly.clone();
    loop {
        let (q, r) = cur.divmod(p, f).unwrap();
        if !r.is_zero() {
            return count;
        }
        count += 1;
        cur = q;
    }
}
