//! The Carlitz module action [M](u), torsion-polynomial degrees, and the
//! conductor/different bookkeeping for Artin-Schreier ramification.
//!
//! [a](u) = a*u for a in F_q, [T](u) = T*u + u^q, extended by
//! [M+N] = [M] + [N] and [MN] = [M] o [N]. Operators are q-linearized:
//! only exponents u^{q^j} occur, so an operator is the coefficient sequence
//! c_j of u^{q^j}. Torsion roots are never adjoined; everything quantitative
//! is reached through degrees and counts.

use crate::artin_schreier::{upow, NormalForm};
use crate::census::euler_phi;
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::irreducible::PrimePoly;
use crate::poly::Poly;
use num_bigint::BigUint;

/// A q-linearized operator sum c_j u^{q^j} with the acting polynomial kept
/// alongside. c_0 equals the acting polynomial and the leading c is nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CarlitzOperator {
    acting: Poly,
    coeffs: Vec<Poly>,
}

impl CarlitzOperator {
    pub fn acting(&self) -> &Poly {
        &self.acting
    }

    /// Coefficient of u^{q^j}.
    pub fn coeff(&self, j: usize) -> Poly {
        self.coeffs.get(j).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// deg_u [M](u) = q^{deg M}.
    pub fn degree_u(&self, f: &FiniteField) -> BigUint {
        debug_assert!(!self.coeffs.last().unwrap().is_zero());
        upow(f.q() as u64, self.coeffs.len() as u64 - 1)
    }

    /// [self] + [other] = [acting + other.acting], coefficient-wise.
    pub fn add(&self, other: &CarlitzOperator, f: &FiniteField) -> CarlitzOperator {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs: Vec<Poly> = (0..n)
            .map(|j| self.coeff(j).add(&other.coeff(j), f))
            .collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CarlitzOperator { acting: self.acting.add(&other.acting, f), coeffs }
    }

    /// [self] o [other] = [self.acting * other.acting]: apply `other` first.
    /// Computed by Horner over the acting polynomial, where prepending [T]
    /// maps coefficients by c_k -> T c_k + c_{k-1}^q.
    pub fn compose(&self, other: &CarlitzOperator, f: &FiniteField) -> CarlitzOperator {
        let mut acc = scaled_op(other, self.acting.leading().unwrap(), f);
        for i in (0..self.coeffs_of_acting()).rev() {
            acc = t_after(&acc, f);
            let a = self.acting.coeff(i);
            if !a.is_zero() {
                acc = add_coeffs(&acc, &scaled_op(other, a, f), f);
            }
        }
        CarlitzOperator { acting: self.acting.mul(&other.acting, f), coeffs: acc }
    }

    fn coeffs_of_acting(&self) -> usize {
        self.acting.deg().unwrap()
    }

    /// JSON list of (j, coefficient) pairs for the u^{q^j} terms.
    pub fn to_json(&self, f: &FiniteField) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| serde_json::json!([j, c.display(f)]))
            .collect();
        serde_json::json!(terms)
    }
}

fn scaled_op(op: &CarlitzOperator, a: crate::field::Fq, f: &FiniteField) -> Vec<Poly> {
    op.coeffs.iter().map(|c| c.scaled(a, f)).collect()
}

fn add_coeffs(a: &[Poly], b: &[Poly], f: &FiniteField) -> Vec<Poly> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|j| {
            let x = a.get(j).cloned().unwrap_or_else(Poly::zero);
            let y = b.get(j).cloned().unwrap_or_else(Poly::zero);
            x.add(&y, f)
        })
        .collect()
}

/// [T] o H: coefficients c_k -> T c_k + (c_{k-1})^q.
fn t_after(coeffs: &[Poly], f: &FiniteField) -> Vec<Poly> {
    let mut out = Vec::with_capacity(coeffs.len() + 1);
    for k in 0..=coeffs.len() {
        let mut c = if k < coeffs.len() {
            coeffs[k].shifted(1)
        } else {
            Poly::zero()
        };
        if k > 0 {
            c = c.add(&coeffs[k - 1].q_power(f), f);
        }
        out.push(c);
    }
    out
}

/// Build [M] by Horner over the coefficients of M, appending [T] on the
/// right: H -> H o [T] + [a_i], where (H o [T])_j = c_j T^{q^j} + c_{j-1}.
pub fn carlitz_action(m: &Poly, f: &FiniteField) -> Result<CarlitzOperator> {
    let n = m.deg().ok_or(Error::ZeroPolynomial)?;
    let mut coeffs = vec![Poly::constant(m.leading().unwrap())];
    let mut qj_cache: Vec<usize> = vec![1];
    for i in (0..n).rev() {
        // H o [T].
        let len = coeffs.len();
        while qj_cache.len() < len {
            let next = qj_cache
                .last()
                .unwrap()
                .checked_mul(f.q() as usize)
                .expect("operator too large to materialize");
            qj_cache.push(next);
        }
        let mut next = Vec::with_capacity(len + 1);
        for j in 0..=len {
            let mut c = if j < len {
                coeffs[j].shifted(qj_cache[j])
            } else {
                Poly::zero()
            };
            if j > 0 {
                c = c.add(&coeffs[j - 1], f);
            }
            next.push(c);
        }
        coeffs = next;
        let a = m.coeff(i);
        if !a.is_zero() {
            coeffs[0] = coeffs[0].add(&Poly::constant(a), f);
        }
    }
    debug_assert_eq!(coeffs[0], *m, "c_0 must equal the acting polynomial");
    debug_assert!(!coeffs.last().unwrap().is_zero());
    Ok(CarlitzOperator { acting: m.clone(), coeffs })
}

/// deg_u [M](u) = q^{deg M}, computed symbolically so it works far beyond
/// what can be materialized.
pub fn torsion_degree(m: &Poly, f: &FiniteField) -> Result<BigUint> {
    let n = m.deg().ok_or(Error::ZeroPolynomial)?;
    Ok(upow(f.q() as u64, n as u64))
}

/// q^{beta d} - q^{(beta-1) d}, the degree drop from [P^beta] to [P^{beta-1}],
/// asserted equal to Phi(P^beta). Ties Carlitz torsion counts to the unit
/// group order.
pub fn torsion_count(prime: &PrimePoly, beta: u32, f: &FiniteField) -> BigUint {
    assert!(beta >= 1);
    let d = prime.degree() as u64;
    let q = f.q() as u64;
    let count = upow(q, beta as u64 * d) - upow(q, (beta as u64 - 1) * d);
    assert_eq!(count, euler_phi(prime, beta, f), "torsion count equals Phi");
    count
}

/// A ramified place of K = F_q(T).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RamifiedPlace {
    Finite(PrimePoly),
    Infinite,
}

/// Per-place ramification exponents of the extension defined by a normal
/// form: conductor exponent alpha+1 and different exponent (alpha+1)(p-1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RamEntry {
    pub place: RamifiedPlace,
    pub pole_order: u32,
    pub conductor_exponent: u32,
    pub different_exponent: u64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RamificationData {
    pub entries: Vec<RamEntry>,
}

/// All ramified places of K(y)/K for y^p - y = nf.value(): the pole primes
/// (totally and wildly ramified) and, when the polynomial part is nonzero,
/// the infinite prime with alpha = deg polypart. A constant-only form is an
/// unramified constant extension: no entries.
pub fn ramification_data(nf: &NormalForm, f: &FiniteField) -> Result<RamificationData> {
    if nf.is_zero() {
        return Err(Error::DegenerateInput);
    }
    let p = f.p() as u64;
    let mut entries = Vec::new();
    for term in &nf.terms {
        entries.push(RamEntry {
            place: RamifiedPlace::Finite(term.prime.clone()),
            pole_order: term.order,
            conductor_exponent: term.order + 1,
            different_exponent: (term.order as u64 + 1) * (p - 1),
        });
    }
    if let Some(deg) = nf.polypart.deg() {
        let alpha = deg as u32;
        entries.push(RamEntry {
            place: RamifiedPlace::Infinite,
            pole_order: alpha,
            conductor_exponent: alpha + 1,
            different_exponent: (alpha as u64 + 1) * (p - 1),
        });
    }
    Ok(RamificationData { entries })
}
