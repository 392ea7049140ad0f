//! Canonical normal forms of Artin-Schreier right-hand sides modulo
//! wp(K) = { b^p - b | b in K }, membership testing, generator equivalence,
//! and constant-field twist families.
//!
//! `wp_reduce` produces a *canonical* representative: at every pole the
//! P-adic digit of each level divisible by p is cleared (not just the top
//! one), every polynomial monomial of p-divisible degree is cleared, and the
//! constant is folded onto the fixed coset representative i*rho. Two inputs
//! are congruent mod wp(K) if and only if their reduced forms are
//! structurally equal, which is what lets the census key classes by form.

use crate::error::{Error, Result};
use crate::field::{FiniteField, Fq};
use crate::irreducible::PrimePoly;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use num_bigint::BigUint;

/// One pole block of a normal form: numerator / prime^order with
/// gcd(order, p) = 1, deg numerator < order * deg prime,
/// gcd(numerator, prime) = 1, and every p-divisible P-adic digit zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NormalTerm {
    pub prime: PrimePoly,
    pub order: u32,
    pub numerator: Poly,
}

/// Canonical representative of a right-hand side modulo wp(K).
///
/// The constant lies in { i*rho : i in F_p } for the field's fixed
/// nonzero-trace rho; the polynomial part has zero constant term and no
/// monomial of p-divisible degree; terms are sorted by prime in enumeration
/// order. Structural equality is equivalence mod wp(K).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NormalForm {
    pub constant: Fq,
    pub polypart: Poly,
    pub terms: Vec<NormalTerm>,
}

impl NormalForm {
    pub fn zero() -> NormalForm {
        NormalForm { constant: Fq::ZERO, polypart: Poly::zero(), terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.polypart.is_zero() && self.terms.is_empty()
    }

    /// The rational function this form represents.
    pub fn value(&self, f: &FiniteField) -> RatFunc {
        let mut v = RatFunc::from_poly(
            self.polypart.add(&Poly::constant(self.constant), f),
        );
        for term in &self.terms {
            let t = RatFunc::new(
                term.numerator.clone(),
                term.prime.power(term.order, f),
                f,
            )
            .unwrap();
            v = v.add(&t, f);
        }
        v
    }

    /// Scale by a nonzero scalar; canonicity is preserved since scaling
    /// fixes the set of vanishing digits and maps i*rho to (ji)*rho.
    pub fn scaled(&self, c: Fq, f: &FiniteField) -> NormalForm {
        NormalForm {
            constant: f.mul(self.constant, c),
            polypart: self.polypart.scaled(c, f),
            terms: self
                .terms
                .iter()
                .map(|t| NormalTerm {
                    prime: t.prime.clone(),
                    order: t.order,
                    numerator: t.numerator.scaled(c, f),
                })
                .collect(),
        }
    }

    pub fn display(&self, f: &FiniteField) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for term in &self.terms {
            parts.push(format!(
                "({}) / ({})^{}",
                term.numerator.display(f),
                term.prime.display(f),
                term.order
            ));
        }
        if !self.polypart.is_zero() {
            parts.push(self.polypart.display(f));
        }
        if !self.constant.is_zero() {
            parts.push(f.elem_string(self.constant));
        }
        parts.join(" + ")
    }
}

/// P-adic digit levels of numerator/P^order: levels[j-1] is the coefficient
/// of P^{-j}, a polynomial of degree < deg P. Requires
/// deg numerator < order * deg P.
pub(crate) fn pole_digit_levels(
    numerator: &Poly,
    prime: &Poly,
    order: u32,
    f: &FiniteField,
) -> Vec<Poly> {
    let mut low = Vec::with_capacity(order as usize);
    let mut cur = numerator.clone();
    for _ in 0..order {
        let (q, r) = cur.divmod(prime, f).unwrap();
        low.push(r);
        cur = q;
    }
    debug_assert!(cur.is_zero(), "numerator degree out of range");
    low.reverse();
    low
}

/// p-th root in the residue field F_q[T]/(P): the inverse Frobenius,
/// computed as u^{p^{td-1}} by iterating the p-power map.
fn residue_pth_root(u: &Poly, prime: &PrimePoly, f: &FiniteField) -> Poly {
    if prime.degree() == 1 {
        return Poly::constant(f.pth_root(u.coeff(0)));
    }
    let steps = f.t() as usize * prime.degree() - 1;
    let mut x = u.clone();
    for _ in 0..steps {
        x = x.char_power(1, f).rem(prime.poly(), f).unwrap();
    }
    x
}

/// Clear every p-divisible digit level, sweeping from the top down. Each
/// cleared level m subtracts wp(b/P^{m/p}), which only touches levels below
/// m, so a single downward pass terminates. Witness parts are reported
/// through the callback as (b, k) for b/P^k.
pub(crate) fn reduce_pole_levels(
    levels: &mut Vec<Poly>,
    prime: &PrimePoly,
    f: &FiniteField,
    mut on_witness: impl FnMut(Poly, u32),
) {
    let p = f.p() as usize;
    for m in (1..=levels.len()).rev() {
        if m % p != 0 || levels[m - 1].is_zero() {
            continue;
        }
        let b = residue_pth_root(&levels[m - 1], prime, f);
        // Subtract b^p/P^m: the P-adic digits of b^p land on levels
        // m, m-1, ..., m-p+1, all >= 1 because m >= p.
        let mut cur = b.char_power(1, f);
        let mut i = 0usize;
        while !cur.is_zero() {
            let (q, r) = cur.divmod(prime.poly(), f).unwrap();
            if !r.is_zero() {
                let lvl = m - i;
                levels[lvl - 1] = levels[lvl - 1].sub(&r, f);
            }
            cur = q;
            i += 1;
        }
        debug_assert!(levels[m - 1].is_zero(), "top digit must cancel");
        // Add back b/P^{m/p}.
        let k = m / p;
        levels[k - 1] = levels[k - 1].add(&b, f);
        on_witness(b, k as u32);
    }
    while levels.last().is_some_and(|u| u.is_zero()) {
        levels.pop();
    }
}

/// Rebuild numerator = sum levels[j-1] * P^{order-j} by Horner in P.
pub(crate) fn assemble_numerator(levels: &[Poly], prime: &Poly, f: &FiniteField) -> Poly {
    let mut acc = Poly::zero();
    for u in levels {
        acc = acc.mul(prime, f).add(u, f);
    }
    acc
}

pub(crate) fn mod_inverse_int(a: u32, p: u32) -> u32 {
    // p prime, a nonzero mod p: a^{p-2}.
    let mut acc: u64 = 1;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Fold a constant onto its canonical coset representative i*rho,
/// i = Tr(a)/Tr(rho) in F_p. Returns (representative, witness constant).
pub(crate) fn fold_constant(a: Fq, f: &FiniteField) -> (Fq, Fq) {
    let rho = f.rho();
    let i = f.trace_int(a) as u64 * mod_inverse_int(f.trace_int(rho), f.p()) as u64;
    let canon = f.mul(f.from_int(i), rho);
    let resid = f.sub(a, canon);
    let c = f.wp_preimage(resid).expect("residual constant has trace zero");
    (canon, c)
}

/// Reduce s to its canonical normal form: returns (nf, witness) with
/// s = nf.value() + witness^p - witness, exactly. Total on all of K.
pub fn wp_reduce(s: &RatFunc, f: &FiniteField) -> (NormalForm, RatFunc) {
    let (rawpoly, pf_terms) = s.partial_fractions(f);
    let mut witness_parts: Vec<RatFunc> = Vec::new();
    let mut terms = Vec::new();
    for t in pf_terms {
        let mut levels = pole_digit_levels(&t.numerator, t.prime.poly(), t.order, f);
        reduce_pole_levels(&mut levels, &t.prime, f, |b, k| {
            witness_parts.push(RatFunc::new(b, t.prime.power(k, f), f).unwrap());
        });
        if !levels.is_empty() {
            let order = levels.len() as u32;
            debug_assert!(order % f.p() != 0);
            let numerator = assemble_numerator(&levels, t.prime.poly(), f);
            terms.push(NormalTerm { prime: t.prime, order, numerator });
        }
    }
    // Polynomial part: clear monomials of p-divisible degree, top down.
    let p = f.p() as usize;
    let mut coeffs = rawpoly.coeffs().to_vec();
    for deg in (1..coeffs.len()).rev() {
        if deg % p != 0 || coeffs[deg].is_zero() {
            continue;
        }
        let b = f.pth_root(coeffs[deg]);
        coeffs[deg] = Fq::ZERO;
        coeffs[deg / p] = f.add(coeffs[deg / p], b);
        witness_parts.push(RatFunc::from_poly(Poly::monomial(b, deg / p)));
    }
    let raw_constant = coeffs.first().copied().unwrap_or(Fq::ZERO);
    if !coeffs.is_empty() {
        coeffs[0] = Fq::ZERO;
    }
    let polypart = Poly::from_coeffs(coeffs);
    let (constant, cw) = fold_constant(raw_constant, f);
    if !cw.is_zero() {
        witness_parts.push(RatFunc::constant(cw));
    }
    let mut witness = RatFunc::zero();
    for w in witness_parts {
        witness = witness.add(&w, f);
    }
    (NormalForm { constant, polypart, terms }, witness)
}

/// Is s in wp(K)? For constants this is the absolute trace test.
pub fn in_wp(s: &RatFunc, f: &FiniteField) -> bool {
    if s.is_constant() {
        return f.trace_int(s.num().coeff(0)) == 0;
    }
    wp_reduce(s, f).0.is_zero()
}

/// Find j in 1..p-1 with nf2 - j*nf1 in wp(K), together with the witness of
/// the difference. `None` means the two forms generate different extensions.
pub fn equivalence_witness(
    nf1: &NormalForm,
    nf2: &NormalForm,
    f: &FiniteField,
) -> Result<Option<(u32, RatFunc)>> {
    if nf1.is_zero() || nf2.is_zero() {
        return Err(Error::DegenerateInput);
    }
    let v1 = nf1.value(f);
    let v2 = nf2.value(f);
    for j in 1..f.p() {
        let diff = v2.sub(&v1.scaled(f.from_int(j as u64), f), f);
        let (nf, w) = wp_reduce(&diff, f);
        if nf.is_zero() {
            return Ok(Some((j, w)));
        }
    }
    Ok(None)
}

/// K(y1) = K(y2) test: the j with nf2 = j*nf1 + wp(c), if any. At most one
/// exists for nonzero forms.
pub fn is_equivalent(nf1: &NormalForm, nf2: &NormalForm, f: &FiniteField) -> Result<Option<u32>> {
    Ok(equivalence_witness(nf1, nf2, f)?.map(|(j, _)| j))
}

pub(crate) fn upow(base: u64, exp: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    let b = BigUint::from(base);
    for _ in 0..exp {
        acc *= &b;
    }
    acc
}

/// Counts from the generator-equivalence analysis for a single pole
/// (P, alpha): `generators` elements z with K(z) = K(y) in normal form over
/// the same P^alpha, and `equations` distinct equations among them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorCounts {
    pub generators: BigUint,
    pub equations: BigUint,
}

/// generators = (p-1) q^{d*alpha_0 + 1}, equations = generators / p,
/// alpha_0 = floor(alpha/p).
pub fn generator_counts(
    prime: &PrimePoly,
    alpha: u32,
    f: &FiniteField,
) -> Result<GeneratorCounts> {
    if alpha == 0 || alpha % f.p() == 0 {
        return Err(Error::InvalidAlpha { alpha, p: f.p() as u64 });
    }
    let alpha0 = alpha / f.p();
    let d = prime.degree() as u64;
    let generators = upow(f.q() as u64, d * alpha0 as u64 + 1) * BigUint::from(f.p() - 1);
    let p_big = BigUint::from(f.p());
    let equations = &generators / &p_big;
    debug_assert_eq!(&equations * &p_big, generators);
    Ok(GeneratorCounts { generators, equations })
}

/// The p twisted right-hand sides g_i/P^alpha, g_i = f + i*rho*P^alpha,
/// obtained from y_i = y + i*xi with xi^p - xi = rho. Pairwise inequivalent
/// as extensions of K.
#[derive(Clone, Debug)]
pub struct TwistFamily {
    pub base: NormalForm,
    pub rho: Fq,
    pub members: Vec<RatFunc>,
}

pub fn twist_family(base: &NormalForm, rho: Fq, f: &FiniteField) -> Result<TwistFamily> {
    if f.trace_int(rho) == 0 {
        return Err(Error::RhoInWp);
    }
    if base.terms.len() != 1 || !base.polypart.is_zero() || !base.constant.is_zero() {
        return Err(Error::NotSingleTerm);
    }
    let term = &base.terms[0];
    let pk = term.prime.power(term.order, f);
    let d = term.prime.degree();
    let mut members = Vec::with_capacity(f.p() as usize);
    for i in 0..f.p() {
        let shift = pk.scaled(f.mul(f.from_int(i as u64), rho), f);
        let gi = term.numerator.add(&shift, f);
        debug_assert!(gi.deg().unwrap() <= term.order as usize * d);
        debug_assert_eq!(gi.gcd(term.prime.poly(), f).deg(), Some(0));
        members.push(RatFunc::new(gi, pk.clone(), f).unwrap());
    }
    Ok(TwistFamily { base: base.clone(), rho, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ratfunc;

    fn f2() -> FiniteField {
        FiniteField::new(2, 1, None).unwrap()
    }

    fn f3() -> FiniteField {
        FiniteField::new(3, 1, None).unwrap()
    }

    fn r(s: &str, f: &FiniteField) -> RatFunc {
        parse_ratfunc(s, f).unwrap()
    }

    fn check_sound(s: &RatFunc, f: &FiniteField) -> NormalForm {
        let (nf, w) = wp_reduce(s, f);
        let wp_w = w.pow(f.p(), f).sub(&w, f);
        assert_eq!(
            nf.value(f).add(&wp_w, f),
            *s,
            "s = nf.value + witness^p - witness must hold exactly"
        );
        nf
    }

    #[test]
    fn wp_reduce_spec_examples() {
        let f = f2();
        // 1/T^2 = 1/T + wp(1/T).
        let (nf, w) = wp_reduce(&r("1/T^2", &f), &f);
        assert_eq!(nf.terms.len(), 1);
        assert_eq!(nf.terms[0].order, 1);
        assert_eq!(nf.terms[0].numerator, Poly::one());
        assert_eq!(nf.terms[0].prime.display(&f), "T");
        assert!(nf.constant.is_zero() && nf.polypart.is_zero());
        assert_eq!(w, r("1/T", &f));
        check_sound(&r("1/T^2", &f), &f);

        // T^2 + T = wp(T).
        let (nf, w) = wp_reduce(&r("T^2+T", &f), &f);
        assert!(nf.is_zero());
        assert_eq!(w, r("T", &f));

        // The constant 1 has trace 1, so it is not in wp(F_2).
        let (nf, w) = wp_reduce(&r("1", &f), &f);
        assert_eq!(nf.constant, Fq::ONE);
        assert!(nf.terms.is_empty() && nf.polypart.is_zero());
        assert!(w.is_zero());
    }

    #[test]
    fn wp_reduce_clears_inner_digits() {
        let f = f2();
        // 1/T^3 + 1/T^2 and 1/T^3 + 1/T are congruent mod wp(K); both must
        // reduce to the same canonical form (T^2+1)/T^3.
        let a = r("1/T^3 + 1/T^2", &f);
        let b = r("1/T^3 + 1/T", &f);
        let (nfa, wa) = wp_reduce(&a, &f);
        let (nfb, wb) = wp_reduce(&b, &f);
        assert_eq!(nfa, nfb);
        assert_eq!(
            nfa.terms[0].numerator,
            crate::parse::parse_poly("T^2+1", &f).unwrap()
        );
        assert_eq!(wa, r("1/T", &f));
        assert!(wb.is_zero());
        check_sound(&a, &f);
    }

    #[test]
    fn in_wp_examples_and_f4_oracle() {
        let f = f2();
        assert!(in_wp(&RatFunc::zero(), &f));
        assert!(!in_wp(&r("1/T", &f), &f));

        // Exhaustive oracle over F_4: is there b with b^2 - b = g?
        let f4 = FiniteField::new(2, 2, Some(vec![1, 1, 1])).unwrap();
        let g = f4.generator();
        let oracle_in_wp = f4.elements().any(|b| f4.sub(f4.pow(b, 2), b) == g);
        // Tr(g) = g + g^2 = 1, so the oracle finds nothing.
        assert!(!oracle_in_wp);
        assert_eq!(in_wp(&RatFunc::constant(g), &f4), oracle_in_wp);
        // wp(F_4) is {0, 1}: 1 = g^2 - g.
        assert!(in_wp(&RatFunc::constant(Fq::ONE), &f4));
    }

    #[test]
    fn wp_reduce_soundness_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(41);
        for (pp, t) in [(2u64, 1u32), (3, 1), (2, 2), (3, 2)] {
            let f = FiniteField::new(pp, t, None).unwrap();
            for _ in 0..60 {
                let nd = rng.gen_range(0..7);
                let num = Poly::from_coeffs(
                    (0..=nd).map(|_| f.elem(rng.gen_range(0..f.q()))).collect(),
                );
                let dd = rng.gen_range(0..7);
                let den = Poly::from_coeffs(
                    (0..=dd).map(|_| f.elem(rng.gen_range(0..f.q()))).collect(),
                );
                if den.is_zero() {
                    continue;
                }
                let s = RatFunc::new(num, den, &f).unwrap();
                let nf = check_sound(&s, &f);
                // Pole orders and polypart degree coprime to p; idempotence.
                for term in &nf.terms {
                    assert_ne!(term.order % f.p(), 0);
                }
                if let Some(d) = nf.polypart.deg() {
                    assert!(d >= 1 && d % pp as usize != 0);
                    assert!(nf.polypart.coeff(0).is_zero());
                }
                let (nf2, w2) = wp_reduce(&nf.value(&f), &f);
                assert_eq!(nf2, nf, "wp_reduce must be idempotent");
                assert!(w2.is_zero());
            }
        }
    }

    #[test]
    fn equivalence_spec_examples() {
        let f = f2();
        let (nf1, _) = wp_reduce(&r("1/T", &f), &f);
        assert_eq!(is_equivalent(&nf1, &nf1, &f).unwrap(), Some(1));
        let (nf2, _) = wp_reduce(&r("1/T + 1", &f), &f);
        assert_eq!(is_equivalent(&nf1, &nf2, &f).unwrap(), None);
        // 1/T^2 ~ 1/T with j = 1.
        let (nf3, _) = wp_reduce(&r("1/T^2", &f), &f);
        assert_eq!(is_equivalent(&nf1, &nf3, &f).unwrap(), Some(1));

        let f3 = f3();
        let (m1, _) = wp_reduce(&r("1/T", &f3), &f3);
        let (m2, _) = wp_reduce(&r("2/T", &f3), &f3);
        assert_eq!(is_equivalent(&m1, &m2, &f3).unwrap(), Some(2));

        assert_eq!(
            is_equivalent(&NormalForm::zero(), &nf1, &f),
            Err(Error::DegenerateInput)
        );
    }

    #[test]
    fn equivalence_is_an_equivalence_relation() {
        // Symmetry sends j to j^{-1}, transitivity multiplies the j's mod p.
        let f = f3();
        let forms: Vec<NormalForm> = ["1/T", "2/T", "(T+1)/T^2", "1/T + 1", "T"]
            .iter()
            .map(|s| wp_reduce(&r(s, &f), &f).0)
            .collect();
        for a in &forms {
            assert_eq!(is_equivalent(a, a, &f).unwrap(), Some(1));
            for b in &forms {
                let ab = is_equivalent(a, b, &f).unwrap();
                let ba = is_equivalent(b, a, &f).unwrap();
                match ab {
                    None => assert_eq!(ba, None),
                    Some(j) => assert_eq!(ba, Some(mod_inverse_int(j, f.p()))),
                }
                for c in &forms {
                    let bc = is_equivalent(b, c, &f).unwrap();
                    let ac = is_equivalent(a, c, &f).unwrap();
                    if let (Some(j1), Some(j2)) = (ab, bc) {
                        assert_eq!(ac, Some(j1 * j2 % f.p()));
                    }
                }
            }
        }
    }

    #[test]
    fn generator_counts_match_enumeration_oracle() {
        use std::collections::HashSet;
        // Enumerate all (j, h) with c = h/P^{alpha_0}, deg h <= d*alpha_0,
        // and count the distinct equations j*f/P^alpha + wp(c).
        for (field, alpha, expect_z, expect_eq) in [
            (f2(), 1u32, 2u64, 1u64),
            (f2(), 3, 4, 2),
            (f3(), 1, 6, 2),
        ] {
            let f = &field;
            let prime = PrimePoly::new(Poly::var(), f).unwrap();
            let base = RatFunc::new(Poly::one(), prime.power(alpha, f), f).unwrap();
            let alpha0 = alpha / f.p();
            let d = prime.degree();
            let mut count_z = 0u64;
            let mut equations: HashSet<RatFunc> = HashSet::new();
            for j in 1..f.p() {
                for h in crate::poly::BoundedPolys::new(f, d * alpha0 as usize + 1) {
                    count_z += 1;
                    let c = RatFunc::new(h, prime.power(alpha0, f), f).unwrap();
                    let wp_c = c.pow(f.p(), f).sub(&c, f);
                    let rhs = base.scaled(f.from_int(j as u64), f).add(&wp_c, f);
                    // Every generated equation stays in normal-form shape.
                    assert_eq!(rhs.den(), &prime.power(alpha, f));
                    assert!(rhs.num().deg().unwrap() <= d * alpha as usize);
                    equations.insert(rhs);
                }
            }
            let counts = generator_counts(&prime, alpha, f).unwrap();
            assert_eq!(counts.generators, BigUint::from(expect_z));
            assert_eq!(counts.equations, BigUint::from(expect_eq));
            assert_eq!(count_z, expect_z);
            assert_eq!(equations.len() as u64, expect_eq);
        }
        let f = f2();
        let prime = PrimePoly::new(Poly::var(), &f).unwrap();
        assert!(matches!(
            generator_counts(&prime, 2, &f),
            Err(Error::InvalidAlpha { .. })
        ));
    }

    #[test]
    fn twist_family_spec_examples() {
        let f = f2();
        let (base, _) = wp_reduce(&r("1/T", &f), &f);
        let fam = twist_family(&base, f.rho(), &f).unwrap();
        assert_eq!(fam.members, vec![r("1/T", &f), r("(1+T)/T", &f)]);

        let f3 = f3();
        let (base3, _) = wp_reduce(&r("1/T", &f3), &f3);
        let fam3 = twist_family(&base3, f3.rho(), &f3).unwrap();
        assert_eq!(
            fam3.members,
            vec![r("1/T", &f3), r("(1+T)/T", &f3), r("(1+2T)/T", &f3)]
        );

        // Members are pairwise inequivalent; member 0 equals the base.
        assert_eq!(fam3.members[0], base3.value(&f3));
        for (i, a) in fam3.members.iter().enumerate() {
            for (k, b) in fam3.members.iter().enumerate() {
                let (na, _) = wp_reduce(a, &f3);
                let (nb, _) = wp_reduce(b, &f3);
                let eq = is_equivalent(&na, &nb, &f3).unwrap();
                if i == k {
                    assert_eq!(eq, Some(1));
                } else {
                    assert_eq!(eq, None);
                }
            }
        }

        // rho with zero trace is rejected; non-single-term bases too.
        assert!(matches!(
            twist_family(&base, Fq::ZERO, &f),
            Err(Error::RhoInWp)
        ));
        let (two_terms, _) = wp_reduce(&r("1/T + 1/(T+1)", &f), &f);
        assert!(matches!(
            twist_family(&two_terms, f.rho(), &f),
            Err(Error::NotSingleTerm)
        ));
    }
}
