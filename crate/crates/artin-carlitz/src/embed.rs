//! Embedding certificates: the explicit cyclotomic modulus and constant
//! extension containing a given Artin-Schreier extension, plus a
//! prime-splitting smoke test of the containment.
//!
//! For y^p - y = s with normal form poles (P_i, alpha_i) and polynomial part
//! of degree alpha_1, the extension lies in the composite of the cyclotomic
//! fields of modulus prod P_i^{alpha_i+1} (and 1/T^{alpha_1+1} at infinity)
//! with the constant field F_{q^p}. The smoke test checks a necessary
//! condition: a prime Q that splits completely in the composite must split
//! completely in K(y), i.e. the absolute trace of s at a root of Q is zero.

use crate::artin_schreier::{in_wp, wp_reduce, NormalForm};
use crate::carlitz::{ramification_data, RamifiedPlace};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::irreducible::{MonicIrreducibles, PrimePoly};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// The containment data: K(y) is contained in
/// K(Lambda_M) * (infinite part) * F_{q^p} with M = prod prime^exponent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EmbeddingCertificate {
    /// (P_i, alpha_i + 1) for the finite pole primes, in enumeration order.
    pub finite_modulus: Vec<(PrimePoly, u32)>,
    /// deg polypart + 1 when the infinite prime ramifies, else 0.
    pub infinite_exponent: u32,
    /// Always p: the constant part F_{q^p} of the guaranteed composite.
    pub constant_degree: u32,
    /// `Some(true)` when the constant coset of the normal form is nonzero;
    /// `None` (unknown) otherwise - minimality of the constant part is not
    /// claimed.
    pub needs_constant_part: Option<bool>,
    /// The cyclotomic exponents are exactly pole order + 1, never less.
    pub minimal_for_cyclotomic_part: bool,
    pub source: NormalForm,
}

impl EmbeddingCertificate {
    pub fn to_json(&self, f: &FiniteField) -> serde_json::Value {
        serde_json::json!({
            "field": crate::grid::field_json(f),
            "source": self.source.value(f).display(f),
            "finite_modulus": self.finite_modulus.iter().map(|(p, e)| {
                serde_json::json!({ "prime": p.display(f), "exponent": e })
            }).collect::<Vec<_>>(),
            "infinite_exponent": self.infinite_exponent,
            "constant_degree": self.constant_degree,
            "needs_constant_part": self.needs_constant_part,
            "minimal_for_cyclotomic_part": self.minimal_for_cyclotomic_part,
        })
    }
}

/// Compute the embedding certificate of s. Errors with `InWp` when s is in
/// wp(K) and so defines no extension.
pub fn certify(s: &RatFunc, f: &FiniteField) -> Result<EmbeddingCertificate> {
    if in_wp(s, f) {
        return Err(Error::InWp);
    }
    let (nf, _) = wp_reduce(s, f);
    let ram = ramification_data(&nf, f)?;
    let mut finite_modulus = Vec::new();
    let mut infinite_exponent = 0;
    for entry in ram.entries {
        match entry.place {
            RamifiedPlace::Finite(p) => finite_modulus.push((p, entry.conductor_exponent)),
            RamifiedPlace::Infinite => infinite_exponent = entry.conductor_exponent,
        }
    }
    let needs_constant_part = if nf.constant.is_zero() { None } else { Some(true) };
    Ok(EmbeddingCertificate {
        finite_modulus,
        infinite_exponent,
        constant_degree: f.p(),
        needs_constant_part,
        minimal_for_cyclotomic_part: true,
        source: nf,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SmokeMode {
    /// All splitting conditions are known exactly (no ramification at
    /// infinity): trace failures are violations.
    Full,
    /// The certificate has an infinite part, for which no splitting law is
    /// assumed: only the finite conditions are applied and trace outcomes
    /// are recorded as observations, never as violations.
    Partial,
}

/// One tested prime: Q satisfied the splitting conditions of the composite,
/// so containment demands trace zero. `counted` marks whether a nonzero
/// trace counts as a violation (full mode only).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SmokeCheck {
    pub prime: PrimePoly,
    pub trace_zero: bool,
    pub counted: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SmokeReport {
    pub mode: SmokeMode,
    pub degree_bound: usize,
    /// No prime under the bound satisfied the splitting conditions.
    pub vacuous: bool,
    pub checks: Vec<SmokeCheck>,
    pub violations: usize,
}

impl SmokeReport {
    pub fn to_json(&self, f: &FiniteField) -> serde_json::Value {
        serde_json::json!({
            "mode": match self.mode { SmokeMode::Full => "full", SmokeMode::Partial => "partial" },
            "degree_bound": self.degree_bound,
            "vacuous": self.vacuous,
            "violations": self.violations,
            "checks": self.checks.iter().map(|c| serde_json::json!({
                "prime": c.prime.display(f),
                "trace_zero": c.trace_zero,
                "counted": c.counted,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Absolute trace Tr_{F_q[T]/(Q) / F_p} of a residue, by iterating the
/// p-power map deg(Q) * t times.
fn residue_absolute_trace(x: &Poly, q_mod: &Poly, f: &FiniteField) -> u32 {
    let steps = q_mod.deg().unwrap() * f.t() as usize;
    let mut acc = x.clone();
    let mut y = x.clone();
    for _ in 1..steps {
        y = y.char_power(1, f).rem(q_mod, f).unwrap();
        acc = acc.add(&y, f);
    }
    debug_assert!(acc.is_constant());
    let c = acc.coeff(0);
    debug_assert!(c.index() < f.p(), "absolute trace lands in F_p");
    c.index()
}

/// Run the splitting smoke test over every monic irreducible Q with
/// deg Q <= degree_bound. A prime qualifies when p | deg Q (so Q splits in
/// the constant part) and Q = 1 mod P_i^{alpha_i+1} for every finite modulus
/// factor (so Q splits in the cyclotomic part); a qualifying Q must then
/// split in K(y), i.e. have trace-zero s-value. With an infinite part the
/// test runs in partial mode and records observations only.
pub fn splitting_smoke_test(
    cert: &EmbeddingCertificate,
    degree_bound: usize,
    f: &FiniteField,
) -> SmokeReport {
    let primes: Vec<PrimePoly> = MonicIrreducibles::new(f, degree_bound).collect();
    splitting_smoke_test_with_primes(cert, degree_bound, f, &primes)
}

/// Same as [`splitting_smoke_test`] with a caller-provided list of monic
/// irreducibles (so grid runs can share one enumeration per field).
pub fn splitting_smoke_test_with_primes(
    cert: &EmbeddingCertificate,
    degree_bound: usize,
    f: &FiniteField,
    primes: &[PrimePoly],
) -> SmokeReport {
    let mode = if cert.infinite_exponent == 0 { SmokeMode::Full } else { SmokeMode::Partial };
    let moduli: Vec<Poly> = cert
        .finite_modulus
        .iter()
        .map(|(p, e)| p.power(*e, f))
        .collect();
    let modulus_degree: usize = moduli.iter().map(|m| m.deg().unwrap()).sum();
    let source_value = cert.source.value(f);
    let mut checks = Vec::new();
    let mut violations = 0;
    // Q = 1 mod M needs deg Q >= deg M; below that the test is vacuous.
    if modulus_degree <= degree_bound {
        'outer: for q_prime in primes {
            if q_prime.degree() > degree_bound || q_prime.degree() % f.p() as usize != 0 {
                continue;
            }
            for ((p, _), m) in cert.finite_modulus.iter().zip(&moduli) {
                if q_prime.poly() == p.poly() {
                    continue 'outer;
                }
                let rem = q_prime.poly().rem(m, f).unwrap();
                if rem != Poly::one() {
                    continue 'outer;
                }
            }
            // Q splits completely in the composite; containment demands it
            // splits completely in K(y): Tr(s(theta)) = 0.
            let value = source_value
                .eval_in_residue(q_prime.poly(), f)
                .expect("Q is coprime to the poles of s");
            let trace_zero = residue_absolute_trace(&value, q_prime.poly(), f) == 0;
            let counted = mode == SmokeMode::Full;
            if counted && !trace_zero {
                violations += 1;
            }
            checks.push(SmokeCheck { prime: q_prime.clone(), trace_zero, counted });
        }
    }
    SmokeReport {
        mode,
        degree_bound,
        vacuous: checks.is_empty(),
        checks,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ratfunc;

    fn f2() -> FiniteField {
        FiniteField::new(2, 1, None).unwrap()
    }

    fn r(s: &str, f: &FiniteField) -> RatFunc {
        parse_ratfunc(s, f).unwrap()
    }

    #[test]
    fn certify_spec_examples() {
        let f = f2();
        // Two simple poles: modulus T^2 (T+1)^2, no infinite part.
        let cert = certify(&r("1/(T(T+1))", &f), &f).unwrap();
        assert_eq!(cert.finite_modulus.len(), 2);
        assert_eq!(cert.finite_modulus[0].0.display(&f), "T");
        assert_eq!(cert.finite_modulus[0].1, 2);
        assert_eq!(cert.finite_modulus[1].0.display(&f), "T + 1");
        assert_eq!(cert.finite_modulus[1].1, 2);
        assert_eq!(cert.infinite_exponent, 0);
        assert_eq!(cert.constant_degree, 2);
        assert_eq!(cert.needs_constant_part, None);
        assert!(cert.minimal_for_cyclotomic_part);

        // Polynomial input: infinite exponent deg + 1.
        let cert = certify(&r("T", &f), &f).unwrap();
        assert!(cert.finite_modulus.is_empty());
        assert_eq!(cert.infinite_exponent, 2);
        assert_eq!(cert.constant_degree, 2);

        // Elements of wp(K) are rejected.
        assert_eq!(certify(&r("T^2+T", &f), &f), Err(Error::InWp));

        // Nonzero constant coset: the constant part is certainly needed.
        let cert = certify(&r("1/T + 1", &f), &f).unwrap();
        assert_eq!(cert.needs_constant_part, Some(true));
    }

    #[test]
    fn certify_is_idempotent_and_matches_ramification() {
        let f = FiniteField::new(3, 1, None).unwrap();
        for s in ["1/T", "(T+2)/T^2", "1/(T(T+1))", "T + 1/T"] {
            let cert = certify(&r(s, &f), &f).unwrap();
            let again = certify(&cert.source.value(&f), &f).unwrap();
            assert_eq!(cert, again, "re-certifying the reduced source is stable");
            let ram = ramification_data(&cert.source, &f).unwrap();
            let finite: Vec<(PrimePoly, u32)> = ram
                .entries
                .iter()
                .filter_map(|e| match &e.place {
                    RamifiedPlace::Finite(p) => Some((p.clone(), e.conductor_exponent)),
                    RamifiedPlace::Infinite => None,
                })
                .collect();
            assert_eq!(cert.finite_modulus, finite);
        }
    }

    #[test]
    fn smoke_spec_examples() {
        let f = f2();
        // Certificate for 1/T, bound 4: qualifying primes exist (e.g.
        // T^4+T^3+1 = 1 mod T^2) and no violations occur.
        let cert = certify(&r("1/T", &f), &f).unwrap();
        let report = splitting_smoke_test(&cert, 4, &f);
        assert_eq!(report.mode, SmokeMode::Full);
        assert!(!report.vacuous);
        assert_eq!(report.violations, 0);
        assert!(report.checks.iter().all(|c| c.trace_zero && c.counted));

        // Bound below the modulus degree: vacuous.
        let report = splitting_smoke_test(&cert, 1, &f);
        assert!(report.vacuous);
        assert_eq!(report.violations, 0);

        // Same over F_3 with bound 6.
        let f3 = FiniteField::new(3, 1, None).unwrap();
        let cert3 = certify(&r("1/T", &f3), &f3).unwrap();
        let report = splitting_smoke_test(&cert3, 6, &f3);
        assert!(!report.vacuous);
        assert_eq!(report.violations, 0);

        // Infinite part: partial mode, observations not counted.
        let certp = certify(&r("T + 1/T", &f), &f).unwrap();
        let report = splitting_smoke_test(&certp, 4, &f);
        assert_eq!(report.mode, SmokeMode::Partial);
        assert_eq!(report.violations, 0);
        assert!(report.checks.iter().all(|c| !c.counted));
    }

    #[test]
    fn smoke_constant_only_source() {
        // A pure constant extension: every Q with p | deg Q qualifies, and
        // the trace is automatically zero there.
        let f = f2();
        let cert = certify(&r("1", &f), &f).unwrap();
        assert!(cert.finite_modulus.is_empty());
        assert_eq!(cert.infinite_exponent, 0);
        let report = splitting_smoke_test(&cert, 4, &f);
        assert_eq!(report.mode, SmokeMode::Full);
        assert!(!report.vacuous);
        assert_eq!(report.violations, 0);
    }
}
