//! Error type shared across the crate.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The requested characteristic is not a prime number.
    NonPrimeP(u64),
    /// The supplied F_q modulus is not a monic irreducible of the right degree.
    ReducibleModulus(String),
    /// q = p^t exceeds the supported bound 2^16.
    FieldTooLarge(u64),
    DivisionByZeroPoly,
    ZeroPolynomial,
    /// A pole/equation exponent divisible by p where the normal form requires gcd(alpha, p) = 1.
    InvalidAlpha { alpha: u32, p: u64 },
    /// An exhaustive enumeration would exceed the configured budget.
    BudgetExceeded { needed: String, budget: u64 },
    /// Residue arithmetic on mismatched moduli.
    ModulusMismatch,
    NotAUnit,
    /// The all-zero normal form (an element of wp(K)) where a degree-p extension is required.
    DegenerateInput,
    /// The chosen constant rho has absolute trace zero, so it lies in wp(F_q).
    RhoInWp,
    /// A twist family needs a base with exactly one pole term and nothing else.
    NotSingleTerm,
    /// The input lies in wp(K); it defines no Artin-Schreier extension.
    InWp,
    Parse { pos: usize, msg: String },
    GridParse { line: usize, msg: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPrimeP(p) => write!(f, "{p} is not prime"),
            Error::ReducibleModulus(m) => write!(f, "invalid field modulus: {m}"),
            Error::FieldTooLarge(q) => write!(f, "field size {q} exceeds the supported bound 2^16"),
            Error::DivisionByZeroPoly => write!(f, "polynomial division by zero"),
            Error::ZeroPolynomial => write!(f, "the zero polynomial is not allowed here"),
            Error::InvalidAlpha { alpha, p } => {
                write!(f, "exponent {alpha} is divisible by the characteristic {p}")
            }
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "enumeration needs {needed} items, over the budget {budget}")
            }
            Error::ModulusMismatch => write!(f, "residues have different moduli"),
            Error::NotAUnit => write!(f, "residue is not a unit"),
            Error::DegenerateInput => {
                write!(f, "input is in wp(K) and defines no degree-p extension")
            }
            Error::RhoInWp => write!(f, "rho has trace zero, so it lies in wp(F_q)"),
            Error::NotSingleTerm => {
                write!(f, "twist base must consist of exactly one pole term")
            }
            Error::InWp => write!(f, "input lies in wp(K)"),
            Error::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
            Error::GridParse { line, msg } => write!(f, "grid parse error on line {line}: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
