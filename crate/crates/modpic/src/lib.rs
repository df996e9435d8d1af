//! Exact divisor-class arithmetic on hyperelliptic curves over small prime
//! fields, together with the pairing, cohomology and descent machinery
//! built on top of it.
//!
//! The crate is layered:
//!
//! - [`ff`]: finite fields `F_{p^k}`, polynomials, residue rings, étale
//!   algebras and exact rationals;
//! - [`curve`]: curves `z^2 = f(x)` with two points at infinity, closed
//!   points (places) over a chosen working field, divisors, function-field
//!   arithmetic and exact local expansions;
//! - [`piccalc`]: Riemann–Roch spaces, divisor reduction, principality
//!   tests with exact function witnesses, group law on divisor classes,
//!   point counting and torsion structure;
//! - [`genjac`]: divisor classes rel. a modulus — torus coordinates, the
//!   four class groups attached to a modulus and the maps between them;
//! - [`pairing`]: the torsion pairing on modulus classes and its checks
//!   against independent oracles;
//! - [`cohom`]: group cohomology of the Frobenius action on torsion and
//!   unit modules, cup products, connecting maps and cocycle classes;
//! - [`descent`]: componentwise evaluation maps into étale algebras, the
//!   induced descent maps, and norm-condition certificates;
//! - [`cli`]: the command-line interface and JSON report plumbing.
//!
//! All arithmetic is exact; every randomized subroutine is deterministic
//! given the configured seed.

pub mod curve;
pub mod error;
pub mod ff;
pub mod genjac;
pub mod piccalc;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
