//! Closed-form counts of Artin-Schreier extensions with one ramified prime,
//! and the independent exhaustive census that must reproduce them exactly.
//!
//! The brute force enumerates the q * Phi(P^alpha) right-hand sides
//! a + h/P^alpha (a in F_q, h a coprime residue mod P^alpha) and partitions
//! them into field-equivalence classes. Classes are discovered by union-find
//! keyed on canonical normal forms: each equation's form is unioned with its
//! j-scalings for j in F_p^*, which covers s' ~ s  iff  s' = j s + wp(c).

use crate::artin_schreier::{
    fold_constant, pole_digit_levels, reduce_pole_levels, upow, wp_reduce, NormalForm,
};
use crate::error::{Error, Result};
use crate::field::{FiniteField, Fq};
use crate::irreducible::PrimePoly;
use crate::poly::{BoundedPolys, Poly};
use crate::ratfunc::RatFunc;
use crate::unit_group::order_p_subgroup_count;
use num_bigint::BigUint;
use num_traits::One;

/// Phi(P^alpha) = q^{(alpha-1)d} (q^d - 1), the number of residues mod
/// P^alpha coprime to P. Phi(P^0) = 1.
pub fn euler_phi(prime: &PrimePoly, alpha: u32, f: &FiniteField) -> BigUint {
    if alpha == 0 {
        return BigUint::one();
    }
    let d = prime.degree() as u64;
    let q = f.q() as u64;
    upow(q, (alpha as u64 - 1) * d) * (upow(q, d) - BigUint::one())
}

/// N_alpha = p/(p-1) Phi(P^{alpha - alpha_0}), the number of distinct
/// Artin-Schreier extensions with single pole P of order alpha.
pub fn extension_count(prime: &PrimePoly, alpha: u32, f: &FiniteField) -> Result<BigUint> {
    let p = f.p();
    if alpha == 0 || alpha % p == 0 {
        return Err(Error::InvalidAlpha { alpha, p: p as u64 });
    }
    let alpha0 = alpha / p;
    let phi = euler_phi(prime, alpha - alpha0, f);
    let pm1 = BigUint::from(p - 1);
    let quotient = &phi / &pm1;
    assert!(&quotient * &pm1 == phi, "p-1 divides Phi since p-1 | q^d - 1");
    Ok(quotient * BigUint::from(p))
}

/// The arithmetic identity N_alpha = p (N_{alpha+1} - N_alpha) linking the
/// census count to the cyclotomic subgroup counts.
pub fn census_identity_check(prime: &PrimePoly, alpha: u32, f: &FiniteField) -> Result<bool> {
    let n_alpha = extension_count(prime, alpha, f)?;
    let diff = order_p_subgroup_count(prime, alpha + 1, f)
        - order_p_subgroup_count(prime, alpha, f);
    Ok(n_alpha == diff * BigUint::from(f.p()))
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub prime: PrimePoly,
    pub alpha: u32,
    pub alpha0: u32,
    pub formula_count: BigUint,
    /// Classes found by enumeration; `None` when the budget was exceeded
    /// and only the formula side is reported.
    pub brute_count: Option<u64>,
    pub enumerated_equations: u64,
    /// Equations per class, in order of first appearance.
    pub class_sizes: Vec<u64>,
    pub representatives: Option<Vec<NormalForm>>,
}

impl CensusReport {
    pub fn to_json(&self, f: &FiniteField) -> serde_json::Value {
        serde_json::json!({
            "field": crate::grid::field_json(f),
            "prime": self.prime.display(f),
            "alpha": self.alpha,
            "formula_count": self.formula_count.to_string(),
            "brute_count": self.brute_count,
            "enumerated_equations": self.enumerated_equations,
            "representatives": self.representatives.as_ref().map(|reps| {
                reps.iter().map(|nf| nf.display(f)).collect::<Vec<_>>()
            }),
        })
    }

    /// Formula side only, for over-budget grid points.
    pub fn formula_only(prime: &PrimePoly, alpha: u32, f: &FiniteField) -> Result<CensusReport> {
        Ok(CensusReport {
            prime: prime.clone(),
            alpha,
            alpha0: alpha / f.p(),
            formula_count: extension_count(prime, alpha, f)?,
            brute_count: None,
            enumerated_equations: 0,
            class_sizes: Vec::new(),
            representatives: None,
        })
    }
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new() -> UnionFind {
        UnionFind { parent: Vec::new(), size: Vec::new() }
    }

    fn add(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        self.size.push(1);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    /// Union by size. Returns (kept_root, absorbed_root) when two distinct
    /// classes merged, so callers can merge their payloads.
    fn union(&mut self, a: u32, b: u32) -> Option<(u32, u32)> {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return None;
        }
        let (keep, lose) = if self.size[ra as usize] >= self.size[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lose as usize] = keep;
        self.size[keep as usize] += self.size[lose as usize];
        Some((keep, lose))
    }
}

/// Compact hash key of a canonical single-prime form: the folded constant
/// followed by the digit levels, each level as `d` coefficient indices.
fn canonical_key(const_idx: u32, levels: &[Poly], d: usize) -> Vec<u32> {
    let mut key = Vec::with_capacity(1 + levels.len() * d);
    key.push(const_idx);
    for lvl in levels {
        for i in 0..d {
            key.push(lvl.coeff(i).index());
        }
    }
    key
}

fn scale_key(key: &[u32], scalar: Fq, d: usize, f: &FiniteField) -> Vec<u32> {
    let mut out = Vec::with_capacity(key.len());
    out.push(f.mul(Fq(key[0]), scalar).index());
    for &c in &key[1..] {
        out.push(f.mul(Fq(c), scalar).index());
    }
    let _ = d;
    out
}

/// Exhaustive census over all right-hand sides a + h/P^alpha with a in F_q
/// and h a coprime residue mod P^alpha: exactly q * Phi(P^alpha) equations,
/// partitioned into field-equivalence classes. Representatives are the
/// canonical forms of the first member of each class in (a, h) enumeration
/// order.
pub fn census_bruteforce(
    prime: &PrimePoly,
    alpha: u32,
    f: &FiniteField,
    budget: u64,
    with_representatives: bool,
) -> Result<CensusReport> {
    let p = f.p();
    if alpha == 0 || alpha % p == 0 {
        return Err(Error::InvalidAlpha { alpha, p: p as u64 });
    }
    let expected = BigUint::from(f.q()) * euler_phi(prime, alpha, f);
    if expected > BigUint::from(budget) {
        return Err(Error::BudgetExceeded { needed: expected.to_string(), budget });
    }
    let d = prime.degree();
    // Canonical coset representative of each constant a, precomputed.
    let canon_const: Vec<u32> = f
        .elements()
        .map(|a| fold_constant(a, f).0.index())
        .collect();
    let scalars: Vec<Fq> = (2..p).map(|j| f.from_int(j as u64)).collect();

    let mut uf = UnionFind::new();
    let mut intern: std::collections::HashMap<Vec<u32>, u32> =
        std::collections::HashMap::new();
    // Per-root payload: equation count, index and data of the first member.
    let mut counts: Vec<u64> = Vec::new();
    let mut min_idx: Vec<u64> = Vec::new();
    let mut min_eq: Vec<Option<(u32, Poly)>> = Vec::new();

    let mut intern_key = |key: Vec<u32>,
                          uf: &mut UnionFind,
                          counts: &mut Vec<u64>,
                          min_idx: &mut Vec<u64>,
                          min_eq: &mut Vec<Option<(u32, Poly)>>|
     -> u32 {
        *intern.entry(key).or_insert_with(|| {
            counts.push(0);
            min_idx.push(u64::MAX);
            min_eq.push(None);
            uf.add()
        })
    };

    let mut enumerated = 0u64;
    let mut eq_index = 0u64;
    for a in f.elements() {
        for h in BoundedPolys::new(f, alpha as usize * d) {
            if h.rem(prime.poly(), f).unwrap().is_zero() {
                continue;
            }
            enumerated += 1;
            let mut levels = pole_digit_levels(&h, prime.poly(), alpha, f);
            reduce_pole_levels(&mut levels, prime, f, |_, _| {});
            let key = canonical_key(canon_const[a.index() as usize], &levels, d);
            let id0 = intern_key(key.clone(), &mut uf, &mut counts, &mut min_idx, &mut min_eq);
            for &s in &scalars {
                let scaled = scale_key(&key, s, d, f);
                let idj = intern_key(scaled, &mut uf, &mut counts, &mut min_idx, &mut min_eq);
                if let Some((keep, lose)) = uf.union(id0, idj) {
                    counts[keep as usize] += counts[lose as usize];
                    counts[lose as usize] = 0;
                    if min_idx[lose as usize] < min_idx[keep as usize] {
                        min_idx[keep as usize] = min_idx[lose as usize];
                        min_eq[keep as usize] = min_eq[lose as usize].take();
                    }
                }
            }
            let root = uf.find(id0) as usize;
            counts[root] += 1;
            if eq_index < min_idx[root] {
                min_idx[root] = eq_index;
                min_eq[root] = Some((a.index(), h));
            }
            eq_index += 1;
        }
    }
    let expected_u64 = u64::try_from(&expected).unwrap();
    assert_eq!(enumerated, expected_u64, "enumeration count is q * Phi(P^alpha)");

    // Collect classes in order of first appearance.
    let mut classes: Vec<(u64, u64, Option<(u32, Poly)>)> = Vec::new();
    for id in 0..counts.len() {
        if uf.find(id as u32) as usize == id && counts[id] > 0 {
            classes.push((min_idx[id], counts[id], min_eq[id].clone()));
        }
    }
    classes.sort_by_key(|c| c.0);
    let total: u64 = classes.iter().map(|c| c.1).sum();
    assert_eq!(total, enumerated);

    let class_sizes: Vec<u64> = classes.iter().map(|c| c.1).collect();
    let representatives = if with_representatives {
        let pk = prime.power(alpha, f);
        Some(
            classes
                .iter()
                .map(|(_, _, eq)| {
                    let (a, h) = eq.as_ref().unwrap();
                    let s = RatFunc::new(h.clone(), pk.clone(), f)
                        .unwrap()
                        .add(&RatFunc::constant(Fq(*a)), f);
                    wp_reduce(&s, f).0
                })
                .collect(),
        )
    } else {
        None
    };

    Ok(CensusReport {
        prime: prime.clone(),
        alpha,
        alpha0: alpha / p,
        formula_count: extension_count(prime, alpha, f)?,
        brute_count: Some(classes.len() as u64),
        enumerated_equations: enumerated,
        class_sizes,
        representatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin_schreier::is_equivalent;
    use crate::parse::parse_poly;

    fn f2() -> FiniteField {
        FiniteField::new(2, 1, None).unwrap()
    }

    fn f3() -> FiniteField {
        FiniteField::new(3, 1, None).unwrap()
    }

    fn tprime(f: &FiniteField) -> PrimePoly {
        PrimePoly::new(Poly::var(), f).unwrap()
    }

    #[test]
    fn euler_phi_spec_examples() {
        let f = f2();
        let t = tprime(&f);
        assert_eq!(euler_phi(&t, 1, &f), BigUint::from(1u32));
        assert_eq!(euler_phi(&t, 2, &f), BigUint::from(2u32));
        // Enumeration oracle for Phi(T^2) over F_2: residues coprime to T.
        let count = BoundedPolys::new(&f, 2)
            .filter(|h| !h.rem(t.poly(), &f).unwrap().is_zero())
            .count();
        assert_eq!(count, 2);
        let f3 = f3();
        let p = PrimePoly::new(parse_poly("T^2+1", &f3).unwrap(), &f3).unwrap();
        assert_eq!(euler_phi(&p, 1, &f3), BigUint::from(8u32));
        // Geometric growth: Phi(P^{a+1}) = q^d Phi(P^a).
        for a in 1..5u32 {
            assert_eq!(
                euler_phi(&p, a + 1, &f3),
                euler_phi(&p, a, &f3) * BigUint::from(9u32)
            );
        }
    }

    #[test]
    fn extension_count_spec_examples() {
        let f = f2();
        let t = tprime(&f);
        assert_eq!(extension_count(&t, 1, &f).unwrap(), BigUint::from(2u32));
        assert_eq!(extension_count(&t, 3, &f).unwrap(), BigUint::from(4u32));
        let f3 = f3();
        let t3 = tprime(&f3);
        assert_eq!(extension_count(&t3, 1, &f3).unwrap(), BigUint::from(3u32));
        assert!(matches!(
            extension_count(&t, 4, &f),
            Err(Error::InvalidAlpha { .. })
        ));
    }

    #[test]
    fn census_spec_examples() {
        let f = f2();
        let t = tprime(&f);
        let rep = census_bruteforce(&t, 1, &f, 1 << 20, true).unwrap();
        assert_eq!(rep.enumerated_equations, 2);
        assert_eq!(rep.brute_count, Some(2));
        assert_eq!(rep.formula_count, BigUint::from(2u32));
        assert_eq!(rep.class_sizes, vec![1, 1]);

        let rep = census_bruteforce(&t, 3, &f, 1 << 20, true).unwrap();
        assert_eq!(rep.enumerated_equations, 8);
        assert_eq!(rep.brute_count, Some(4));
        assert_eq!(rep.class_sizes, vec![2, 2, 2, 2]);

        let f3 = f3();
        let t3 = tprime(&f3);
        let rep = census_bruteforce(&t3, 1, &f3, 1 << 20, true).unwrap();
        assert_eq!(rep.enumerated_equations, 6);
        assert_eq!(rep.brute_count, Some(3));
        assert_eq!(rep.class_sizes, vec![2, 2, 2]);

        assert!(matches!(
            census_bruteforce(&t, 1, &f, 1, false),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            census_bruteforce(&t, 2, &f, 1 << 20, false),
            Err(Error::InvalidAlpha { .. })
        ));
    }

    /// Independent O(n^2) clustering via pairwise is_equivalent, avoiding
    /// the canonical-key path entirely.
    fn census_pairwise_oracle(prime: &PrimePoly, alpha: u32, f: &FiniteField) -> Vec<u64> {
        let pk = prime.power(alpha, f);
        let mut forms: Vec<NormalForm> = Vec::new();
        for a in f.elements() {
            for h in BoundedPolys::new(f, alpha as usize * prime.degree()) {
                if h.rem(prime.poly(), f).unwrap().is_zero() {
                    continue;
                }
                let s = RatFunc::new(h, pk.clone(), f)
                    .unwrap()
                    .add(&RatFunc::constant(a), f);
                forms.push(wp_reduce(&s, f).0);
            }
        }
        let mut class_of: Vec<Option<usize>> = vec![None; forms.len()];
        let mut sizes: Vec<u64> = Vec::new();
        for i in 0..forms.len() {
            if class_of[i].is_some() {
                continue;
            }
            let c = sizes.len();
            class_of[i] = Some(c);
            sizes.push(1);
            for k in i + 1..forms.len() {
                if class_of[k].is_none()
                    && is_equivalent(&forms[i], &forms[k], f).unwrap().is_some()
                {
                    class_of[k] = Some(c);
                    sizes[c] += 1;
                }
            }
        }
        sizes
    }

    #[test]
    fn census_agrees_with_pairwise_oracle() {
        for (field, prime_str, alpha) in [
            (f2(), "T", 1u32),
            (f2(), "T", 3),
            (f2(), "T+1", 3),
            (f2(), "T^2+T+1", 1),
            (f3(), "T", 1),
            (f3(), "T", 2),
            (f3(), "T+2", 2),
        ] {
            let f = &field;
            let prime = PrimePoly::new(parse_poly(prime_str, f).unwrap(), f).unwrap();
            let oracle_sizes = census_pairwise_oracle(&prime, alpha, f);
            let rep = census_bruteforce(&prime, alpha, f, 1 << 20, true).unwrap();
            assert_eq!(rep.brute_count, Some(oracle_sizes.len() as u64));
            let mut a = rep.class_sizes.clone();
            let mut b = oracle_sizes;
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b);
            assert_eq!(rep.formula_count, BigUint::from(rep.brute_count.unwrap()));
            // Representatives are canonical, nonzero, pairwise inequivalent.
            let reps = rep.representatives.unwrap();
            for r in &reps {
                assert!(!r.is_zero());
                let (rr, w) = wp_reduce(&r.value(f), f);
                assert_eq!(&rr, r);
                assert!(w.is_zero());
            }
            for i in 0..reps.len() {
                for k in i + 1..reps.len() {
                    assert_eq!(is_equivalent(&reps[i], &reps[k], f).unwrap(), None);
                }
            }
        }
    }

    #[test]
    fn identity_check_spec_examples() {
        let f = f2();
        let t = tprime(&f);
        assert!(census_identity_check(&t, 1, &f).unwrap());
        assert!(census_identity_check(&t, 3, &f).unwrap());
        let f3 = f3();
        let t3 = tprime(&f3);
        assert!(census_identity_check(&t3, 1, &f3).unwrap());
        assert!(matches!(
            census_identity_check(&t, 6, &f),
            Err(Error::InvalidAlpha { .. })
        ));
    }
}
