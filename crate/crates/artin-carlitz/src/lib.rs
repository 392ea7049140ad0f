//! Exact arithmetic for Artin-Schreier extensions of the rational function
//! field F_q(T).
//!
//! The crate classifies degree-p cyclic extensions K(y)/K, K = F_q(T), with
//! y^p - y = s(T): it reduces right-hand sides to a canonical normal form
//! modulo wp(K) = { b^p - b }, decides when two equations generate the same
//! field, counts the extensions with prescribed ramification in closed form
//! and by independent exhaustive enumeration, and emits the explicit
//! cyclotomic-plus-constant-field embedding certificate for any input. All
//! arithmetic is exact; there are no probabilistic steps anywhere.
//!
//! Modules:
//! - [`field`], [`poly`], [`ratfunc`], [`irreducible`], [`parse`]: exact
//!   arithmetic in F_q, F_q[T] and F_q(T), with the text grammar.
//! - [`artin_schreier`]: normal forms, wp-membership, generator equivalence,
//!   constant-field twists.
//! - [`census`]: closed-form extension counts and the brute-force census
//!   that must reproduce them exactly.
//! - [`unit_group`]: (F_q[T]/P^beta)^*, element orders, and counts of
//!   order-p elements and subgroups.
//! - [`carlitz`]: the Carlitz action [M](u), torsion degrees, and
//!   conductor/different bookkeeping.
//! - [`embed`]: embedding certificates and the prime-splitting smoke test.
//! - [`grid`]: the verification grid runner behind `verify`.

pub mod artin_schreier;
pub mod carlitz;
pub mod census;
pub mod embed;
pub mod error;
pub mod field;
pub mod grid;
pub mod irreducible;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod unit_group;

pub use error::{Error, Result};
pub use field::{FiniteField, Fq};
pub use irreducible::PrimePoly;
pub use poly::Poly;
pub use ratfunc::RatFunc;
