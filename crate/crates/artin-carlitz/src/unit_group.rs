//! The unit group (F_q[T]/P^beta)^*: residue arithmetic, exact element
//! orders, and counts of order-p elements and order-p subgroups, both in
//! closed form and by exhaustive enumeration.
//!
//! The group has order Phi(P^beta) = q^{(beta-1)d} (q^d - 1) with p-part
//! q^{(beta-1)d} and p-free part q^d - 1; element orders are computed by
//! splitting along that factorization, never by stepping through powers.

use crate::artin_schreier::upow;
use crate::census::euler_phi;
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::irreducible::PrimePoly;
use crate::poly::{BoundedPolys, Poly};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// The modulus P^beta of a residue ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrimePowerModulus {
    prime: PrimePoly,
    beta: u32,
    poly: Poly,
}

impl PrimePowerModulus {
    pub fn new(prime: PrimePoly, beta: u32, f: &FiniteField) -> PrimePowerModulus {
        assert!(beta >= 1);
        let poly = prime.power(beta, f);
        PrimePowerModulus { prime, beta, poly }
    }

    pub fn prime(&self) -> &PrimePoly {
        &self.prime
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }
}

/// A residue mod P^beta, stored fully reduced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Residue {
    modulus: PrimePowerModulus,
    rep: Poly,
}

impl Residue {
    pub fn new(modulus: PrimePowerModulus, rep: Poly, f: &FiniteField) -> Residue {
        let rep = rep.rem(modulus.poly(), f).unwrap();
        Residue { modulus, rep }
    }

    pub fn one(modulus: PrimePowerModulus) -> Residue {
        Residue { modulus, rep: Poly::one() }
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn modulus(&self) -> &PrimePowerModulus {
        &self.modulus
    }

    /// Units are exactly the residues coprime to P.
    pub fn is_unit(&self, f: &FiniteField) -> bool {
        !self.rep.rem(self.modulus.prime.poly(), f).unwrap().is_zero()
    }

    pub fn mul(&self, other: &Residue, f: &FiniteField) -> Result<Residue> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        Ok(Residue {
            modulus: self.modulus.clone(),
            rep: self.rep.mul_mod(&other.rep, self.modulus.poly(), f),
        })
    }

    pub fn pow(&self, mut e: u128, f: &FiniteField) -> Residue {
        let m = self.modulus.poly();
        let mut base = self.rep.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m, f);
            }
            base = base.mul_mod(&base, m, f);
            e >>= 1;
        }
        Residue { modulus: self.modulus.clone(), rep: acc }
    }
}

fn checked_pow_u128(base: u64, exp: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
    }
    Some(acc)
}

fn factor_u128(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
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

/// Multiplicative order of a unit: least n >= 1 with a^n = 1. Divides
/// Phi(P^beta). The p-part comes from iterating the p-power map on
/// a^{q^d - 1}; the p-free part from divisor descent in q^d - 1.
pub fn element_order(a: &Residue, f: &FiniteField) -> Result<BigUint> {
    if !a.is_unit(f) {
        return Err(Error::NotAUnit);
    }
    let one = Poly::one();
    let d = a.modulus.prime.degree() as u64;
    let beta = a.modulus.beta as u64;
    let qd = checked_pow_u128(f.q() as u64, d)
        .expect("residue field too large for order computation");
    // p-part: x = a^{q^d - 1} lies in the Sylow p-subgroup.
    let x = a.pow(qd - 1, f);
    let mut p_exp = 0u64;
    let mut y = x;
    let p_exp_bound = f.t() as u64 * (beta - 1) * d;
    while y.rep != one {
        y = y.pow(f.p() as u128, f);
        p_exp += 1;
        assert!(p_exp <= p_exp_bound, "p-part exponent out of range");
    }
    // p-free part: z = a^{p^E} with p^E the full p-part of the group order.
    let mut z = a.clone();
    for _ in 0..p_exp_bound {
        z = z.pow(f.p() as u128, f);
    }
    let mut m: u128 = qd - 1;
    for l in factor_u128(qd - 1) {
        while m % l == 0 && z.pow(m / l, f).rep == one {
            m /= l;
        }
    }
    debug_assert!(z.pow(m, f).rep == one);
    let mut order = BigUint::from(m);
    for _ in 0..p_exp {
        order *= f.p();
    }
    Ok(order)
}

/// Closed-form count of order-p elements: r_p = q^{(beta - ceil(beta/p))d} - 1
/// for beta >= 2, and 0 for beta = 1 (the group order q^d - 1 is prime to p).
pub fn order_p_element_count(prime: &PrimePoly, beta: u32, f: &FiniteField) -> BigUint {
    if beta <= 1 {
        return BigUint::zero();
    }
    let d = prime.degree() as u64;
    let ceil = (beta as u64).div_ceil(f.p() as u64);
    upow(f.q() as u64, (beta as u64 - ceil) * d) - BigUint::one()
}

/// Number of order-p subgroups: N_beta = r_p / (p-1); 0 for beta = 1.
pub fn order_p_subgroup_count(prime: &PrimePoly, beta: u32, f: &FiniteField) -> BigUint {
    let rp = order_p_element_count(prime, beta, f);
    let pm1 = BigUint::from(f.p() - 1);
    let out = &rp / &pm1;
    assert!(&out * &pm1 == rp, "p-1 must divide r_p exactly");
    out
}

/// Exhaustive count of order-p elements (with the structural checks: every
/// order-p element is a one-unit 1 + h*P, and for beta > p its h is
/// divisible by P^{ceil(beta/p)-1}).
pub fn order_p_element_count_bruteforce(
    prime: &PrimePoly,
    beta: u32,
    f: &FiniteField,
    budget: u64,
) -> Result<u64> {
    group_size_within(prime, beta, f, budget)?;
    let modulus = PrimePowerModulus::new(prime.clone(), beta, f);
    let one = Poly::one();
    let mut count = 0u64;
    let ceil = (beta as u64).div_ceil(f.p() as u64);
    for rep in BoundedPolys::new(f, beta as usize * prime.degree()) {
        let r = Residue { modulus: modulus.clone(), rep };
        if !r.is_unit(f) || r.rep == one {
            continue;
        }
        if r.pow(f.p() as u128, f).rep != one {
            continue;
        }
        count += 1;
        // Order-p elements live in the one-unit subgroup D_{P^beta, P}.
        let shifted = r.rep.sub(&one, f);
        let (h, rem) = shifted.divmod(prime.poly(), f).unwrap();
        assert!(rem.is_zero(), "order-p element must be = 1 mod P");
        if beta as u64 > f.p() as u64 {
            let pk = prime.power(ceil as u32 - 1, f);
            assert!(
                h.rem(&pk, f).unwrap().is_zero(),
                "h must be divisible by P^(ceil(beta/p)-1)"
            );
        }
    }
    Ok(count)
}

/// Exhaustive subgroup count: partition the order-p elements into the
/// generator sets {x, x^2, ..., x^{p-1}} and count the parts.
pub fn order_p_subgroup_count_bruteforce(
    prime: &PrimePoly,
    beta: u32,
    f: &FiniteField,
    budget: u64,
) -> Result<u64> {
    group_size_within(prime, beta, f, budget)?;
    let modulus = PrimePowerModulus::new(prime.clone(), beta, f);
    let one = Poly::one();
    let mut order_p: Vec<Poly> = Vec::new();
    for rep in BoundedPolys::new(f, beta as usize * prime.degree()) {
        let r = Residue { modulus: modulus.clone(), rep };
        if r.is_unit(f) && r.rep != one && r.pow(f.p() as u128, f).rep == one {
            order_p.push(r.rep.clone());
        }
    }
    let mut seen: std::collections::HashSet<Poly> = std::collections::HashSet::new();
    let mut parts = 0u64;
    for rep in &order_p {
        if seen.contains(rep) {
            continue;
        }
        parts += 1;
        let x = Residue { modulus: modulus.clone(), rep: rep.clone() };
        let mut y = x.clone();
        for _ in 1..f.p() {
            seen.insert(y.rep.clone());
            y = y.mul(&x, f).unwrap();
        }
        debug_assert!(y.rep == one);
    }
    Ok(parts)
}

fn group_size_within(prime: &PrimePoly, beta: u32, f: &FiniteField, budget: u64) -> Result<u64> {
    let size = checked_pow_u128(f.q() as u64, beta as u64 * prime.degree() as u64)
        .filter(|&s| s <= budget as u128)
        .ok_or(Error::BudgetExceeded {
            needed: format!("{}^{}", f.q(), beta as u64 * prime.degree() as u64),
            budget,
        })?;
    Ok(size as u64)
}

/// N_{alpha+1} - N_alpha for gcd(alpha, p) = 1, asserting it equals
/// Phi(P^{alpha - alpha_0}) / (p - 1) through the ceiling identities
/// ceil((alpha+1)/p) = ceil(alpha/p) and ceil(alpha/p) = floor(alpha/p) + 1.
pub fn subgroup_count_difference(
    prime: &PrimePoly,
    alpha: u32,
    f: &FiniteField,
) -> Result<BigUint> {
    let p = f.p();
    if alpha == 0 || alpha % p == 0 {
        return Err(Error::InvalidAlpha { alpha, p: p as u64 });
    }
    let a = alpha as u64;
    assert_eq!((a + 1).div_ceil(p as u64), a.div_ceil(p as u64));
    assert_eq!(a.div_ceil(p as u64), a / p as u64 + 1);
    let diff =
        order_p_subgroup_count(prime, alpha + 1, f) - order_p_subgroup_count(prime, alpha, f);
    let alpha0 = alpha / p;
    let phi = euler_phi(prime, alpha - alpha0, f);
    let pm1 = BigUint::from(p - 1);
    let expected = &phi / &pm1;
    assert!(&expected * &pm1 == phi, "p-1 must divide Phi exactly");
    assert_eq!(diff, expected, "difference identity must hold");
    Ok(diff)
}

/// Everything the `units` command reports for one (P, beta).
#[derive(Clone, Debug)]
pub struct UnitsReport {
    pub prime: PrimePoly,
    pub beta: u32,
    pub group_order: BigUint,
    pub r_p_formula: BigUint,
    pub r_p_brute: Option<u64>,
    pub subgroups_formula: BigUint,
    pub subgroups_brute: Option<u64>,
}

pub fn units_report(
    prime: &PrimePoly,
    beta: u32,
    f: &FiniteField,
    budget: u64,
) -> Result<UnitsReport> {
    let r_p_formula = order_p_element_count(prime, beta, f);
    let subgroups_formula = order_p_subgroup_count(prime, beta, f);
    let (r_p_brute, subgroups_brute) = if group_size_within(prime, beta, f, budget).is_ok() {
        (
            Some(order_p_element_count_bruteforce(prime, beta, f, budget)?),
            Some(order_p_subgroup_count_bruteforce(prime, beta, f, budget)?),
        )
    } else {
        (None, None)
    };
    Ok(UnitsReport {
        prime: prime.clone(),
        beta,
        group_order: euler_phi(prime, beta, f),
        r_p_formula,
        r_p_brute,
        subgroups_formula,
        subgroups_brute,
    })
}

impl UnitsReport {
    pub fn to_json(&self, f: &FiniteField) -> serde_json::Value {
        serde_json::json!({
            "field": crate::grid::field_json(f),
            "prime": self.prime.display(f),
            "beta": self.beta,
            "group_order": self.group_order.to_string(),
            "r_p_formula": self.r_p_formula.to_string(),
            "r_p_brute": self.r_p_brute,
            "subgroups_formula": self.subgroups_formula.to_string(),
            "subgroups_brute": self.subgroups_brute,
        })
    }
}
