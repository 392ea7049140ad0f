//! The coefficient field F_q, q = p^t, as an explicit quotient F_p[x]/(m).
//!
//! `FiniteField` owns the modulus and the lookup tables; elements are plain
//! `Fq` indices, so all arithmetic goes through the field context. The index
//! of an element with representative c_0 + c_1 x + ... + c_{t-1} x^{t-1} is
//! sum c_i p^i, and the total order on indices is the enumeration order used
//! everywhere in this crate (so 0, 1, ..., p-1, g, g+1, ...).

use crate::error::{Error, Result};
use crate::irreducible;
use crate::poly::Poly;
use std::fmt;

/// Largest supported field size.
pub const MAX_Q: u64 = 1 << 16;

/// Fields up to this size get dense multiplication and inverse tables.
const TABLE_Q: u64 = 256;

const MAX_T: usize = 16;

/// An element of F_q, identified by its index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fq(pub(crate) u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The field F_q = F_p[x]/(modulus), with q = p^t <= 2^16.
///
/// Construction validates that p is prime, the modulus is a monic degree-t
/// irreducible over F_p, and q fits the word budget. All derived tables
/// (traces, p-th roots, wp-preimages) are built eagerly, so every operation
/// afterwards is exact and cheap.
#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    t: u32,
    q: u32,
    /// Monic modulus over F_p, coefficients low-to-high, length t+1.
    modulus: Vec<u32>,
    /// First element in enumeration order with nonzero absolute trace.
    rho: Fq,
    /// Absolute trace Tr_{F_q/F_p}, stored as an integer < p.
    trace_tab: Vec<u32>,
    /// x -> x^{q/p}, the inverse of Frobenius.
    pth_root_tab: Vec<u32>,
    /// For trace-zero a: one c with c^p - c = a. u32::MAX where no preimage exists.
    wp_pre_tab: Vec<u32>,
    mul_tab: Vec<u32>,
    inv_tab: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteField({})", self.describe())
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.t == other.t && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    /// Build F_{p^t}. When `modulus` is omitted a deterministic default is
    /// used: the first monic irreducible of degree t over F_p in enumeration
    /// order (for t = 1 this is x itself).
    pub fn new(p: u64, t: u32, modulus: Option<Vec<u32>>) -> Result<FiniteField> {
        if !is_prime_u64(p) {
            return Err(Error::NonPrimeP(p));
        }
        if t == 0 {
            return Err(Error::ReducibleModulus("degree t must be >= 1".into()));
        }
        let mut q: u64 = 1;
        for _ in 0..t {
            q = q.saturating_mul(p);
            if q > MAX_Q {
                return Err(Error::FieldTooLarge(q));
            }
        }
        let p = p as u32;
        let modulus = match modulus {
            Some(m) => {
                Self::validate_modulus(p, t, &m)?;
                m
            }
            None => Self::default_modulus(p, t),
        };
        Ok(Self::build(p, t, q as u32, modulus))
    }

    /// The prime field F_p with the fixed modulus x. Skips the irreducibility
    /// machinery, which itself needs a prime field to run in.
    fn new_prime(p: u32) -> FiniteField {
        Self::build(p, 1, p, vec![0, 1])
    }

    fn validate_modulus(p: u32, t: u32, m: &[u32]) -> Result<()> {
        if m.len() != t as usize + 1 {
            return Err(Error::ReducibleModulus(format!(
                "expected {} coefficients for degree {t}, got {}",
                t + 1,
                m.len()
            )));
        }
        if m[t as usize] != 1 {
            return Err(Error::ReducibleModulus("modulus must be monic".into()));
        }
        if m.iter().any(|&c| c >= p) {
            return Err(Error::ReducibleModulus(format!(
                "coefficients must be reduced mod {p}"
            )));
        }
        if t == 1 {
            return Ok(());
        }
        let base = FiniteField::new_prime(p);
        let poly = Poly::from_coeffs(m.iter().map(|&c| Fq(c)).collect());
        match irreducible::is_irreducible(&poly, &base) {
            Ok(true) => Ok(()),
            Ok(false) => Err(Error::ReducibleModulus(format!(
                "{} is reducible over F_{p}",
                poly.display(&base)
            ))),
            Err(e) => Err(e),
        }
    }

    fn default_modulus(p: u32, t: u32) -> Vec<u32> {
        if t == 1 {
            return vec![0, 1];
        }
        let base = FiniteField::new_prime(p);
        // Lowest coefficient varies slowest: lexicographic on (c_0, ..., c_{t-1}).
        let t = t as usize;
        let mut digits = vec![0u32; t];
        loop {
            let mut coeffs: Vec<Fq> = digits.iter().map(|&c| Fq(c)).collect();
            coeffs.push(Fq::ONE);
            let cand = Poly::from_coeffs(coeffs);
            if irreducible::is_irreducible(&cand, &base).unwrap() {
                let mut m: Vec<u32> = digits.clone();
                m.push(1);
                return m;
            }
            let mut i = t;
            loop {
                assert!(i > 0, "no irreducible of degree {t} over F_{p}?");
                i -= 1;
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    fn build(p: u32, t: u32, q: u32, modulus: Vec<u32>) -> FiniteField {
        let mut f = FiniteField {
            p,
            t,
            q,
            modulus,
            rho: Fq::ZERO,
            trace_tab: Vec::new(),
            pth_root_tab: Vec::new(),
            wp_pre_tab: Vec::new(),
            mul_tab: Vec::new(),
            inv_tab: Vec::new(),
        };
        if (q as u64) <= TABLE_Q {
            let n = q as usize;
            let mut mul = vec![0u32; n * n];
            for a in 0..q {
                for b in a..q {
                    let v = f.mul_digits(a, b);
                    mul[(a * q + b) as usize] = v;
                    mul[(b * q + a) as usize] = v;
                }
            }
            f.mul_tab = mul;
            let mut inv = vec![0u32; n];
            for a in 1..q {
                inv[a as usize] = f.pow(Fq(a), (q - 2) as u64).0;
            }
            f.inv_tab = inv;
        }
        let mut trace = vec![0u32; q as usize];
        for a in 0..q {
            let mut acc = Fq(a);
            let mut y = Fq(a);
            for _ in 1..t {
                y = f.pow(y, p as u64);
                acc = f.add(acc, y);
            }
            debug_assert!(acc.0 < p, "trace must land in the prime field");
            trace[a as usize] = acc.0;
        }
        f.trace_tab = trace;
        let root_exp = (q / p) as u64;
        f.pth_root_tab = (0..q).map(|a| f.pow(Fq(a), root_exp).0).collect();
        let mut pre = vec![u32::MAX; q as usize];
        for c in 0..q {
            let w = f.sub(f.pow(Fq(c), p as u64), Fq(c));
            if pre[w.0 as usize] == u32::MAX {
                pre[w.0 as usize] = c;
            }
        }
        f.wp_pre_tab = pre;
        f.rho = Fq((0..q)
            .find(|&a| f.trace_tab[a as usize] != 0)
            .expect("trace is surjective onto F_p"));
        f
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.t == 1
    }

    /// The class of x, the generator symbol `g` of the text grammar.
    pub fn generator(&self) -> Fq {
        Fq(self.p)
    }

    /// The fixed nonzero-trace element used for canonical constant cosets.
    pub fn rho(&self) -> Fq {
        self.rho
    }

    pub fn elem(&self, index: u32) -> Fq {
        assert!(index < self.q, "element index out of range");
        Fq(index)
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    /// The integer n embedded as n mod p copies of 1.
    pub fn from_int(&self, n: u64) -> Fq {
        Fq((n % self.p as u64) as u32)
    }

    fn digits_of(&self, a: u32) -> [u32; MAX_T] {
        let mut d = [0u32; MAX_T];
        let mut n = a;
        let mut i = 0;
        while n > 0 {
            d[i] = n % self.p;
            n /= self.p;
            i += 1;
        }
        d
    }

    fn encode(&self, d: &[u32]) -> u32 {
        let mut n = 0u32;
        for i in (0..self.t as usize).rev() {
            n = n * self.p + d[i] % self.p;
        }
        n
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.p == 2 {
            return Fq(a.0 ^ b.0);
        }
        if self.t == 1 {
            let s = a.0 + b.0;
            return Fq(if s >= self.p { s - self.p } else { s });
        }
        let da = self.digits_of(a.0);
        let db = self.digits_of(b.0);
        let mut d = [0u32; MAX_T];
        for i in 0..self.t as usize {
            let s = da[i] + db[i];
            d[i] = if s >= self.p { s - self.p } else { s };
        }
        Fq(self.encode(&d))
    }

    pub fn neg(&self, a: Fq) -> Fq {
        if self.p == 2 {
            return a;
        }
        if self.t == 1 {
            return Fq(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let da = self.digits_of(a.0);
        let mut d = [0u32; MAX_T];
        for i in 0..self.t as usize {
            d[i] = if da[i] == 0 { 0 } else { self.p - da[i] };
        }
        Fq(self.encode(&d))
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    fn mul_digits(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = self.t as usize;
        let p = self.p as u64;
        let da = self.digits_of(a);
        let db = self.digits_of(b);
        let mut prod = [0u64; 2 * MAX_T];
        for i in 0..t {
            if da[i] == 0 {
                continue;
            }
            for j in 0..t {
                prod[i + j] += da[i] as u64 * db[j] as u64;
            }
        }
        // Reduce modulo the monic modulus, highest coefficient first.
        for i in (t..2 * t - 1).rev() {
            let c = prod[i] % p;
            if c != 0 {
                for k in 0..t {
                    prod[i - t + k] += c * ((p - self.modulus[k] as u64) % p);
                }
            }
            prod[i] = 0;
        }
        let mut d = [0u32; MAX_T];
        for (i, slot) in d.iter_mut().enumerate().take(t) {
            *slot = (prod[i] % p) as u32;
        }
        self.encode(&d)
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if !self.mul_tab.is_empty() {
            return Fq(self.mul_tab[(a.0 * self.q + b.0) as usize]);
        }
        Fq(self.mul_digits(a.0, b.0))
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.is_zero() {
            return Fq::ZERO;
        }
        let mut base = a;
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fq) -> Fq {
        assert!(!a.is_zero(), "inverse of zero in F_q");
        if !self.inv_tab.is_empty() {
            return Fq(self.inv_tab[a.0 as usize]);
        }
        self.pow(a, (self.q - 2) as u64)
    }

    pub fn div(&self, a: Fq, b: Fq) -> Fq {
        self.mul(a, self.inv(b))
    }

    /// The unique b with b^p = a (Frobenius is a bijection).
    pub fn pth_root(&self, a: Fq) -> Fq {
        Fq(self.pth_root_tab[a.0 as usize])
    }

    /// Absolute trace Tr_{F_q/F_p}(a) as an integer in 0..p.
    pub fn trace_int(&self, a: Fq) -> u32 {
        self.trace_tab[a.0 as usize]
    }

    /// a^p - a.
    pub fn wp(&self, a: Fq) -> Fq {
        self.sub(self.pow(a, self.p as u64), a)
    }

    /// Some c with c^p - c = a, when a has trace zero.
    pub fn wp_preimage(&self, a: Fq) -> Option<Fq> {
        let c = self.wp_pre_tab[a.0 as usize];
        if c == u32::MAX {
            None
        } else {
            Some(Fq(c))
        }
    }

    pub fn describe(&self) -> String {
        if self.t == 1 {
            format!("F_{}", self.q)
        } else {
            format!("F_{} = F_{}[x]/({})", self.q, self.p, self.modulus_string())
        }
    }

    pub fn modulus_string(&self) -> String {
        let mut parts = Vec::new();
        for i in (0..self.modulus.len()).rev() {
            let c = self.modulus[i];
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}*x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}*x^{i}"),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Grammar string for a single element, e.g. `g+1` or `2*g^2+2`.
    pub fn elem_string(&self, a: Fq) -> String {
        if self.t == 1 {
            return format!("{}", a.0);
        }
        if a.is_zero() {
            return "0".into();
        }
        let d = self.digits_of(a.0);
        let mut parts = Vec::new();
        for i in (0..self.t as usize).rev() {
            let c = d[i];
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "g".into(),
                (1, c) => format!("{c}*g"),
                (i, 1) => format!("g^{i}"),
                (i, c) => format!("{c}*g^{i}"),
            };
            parts.push(part);
        }
        parts.join("+")
    }
}
