//! Deterministic exact-arithmetic toolkit for four-dimensional algebras over
//! quadratic fields `Q(√d)` given by structure constants.
//!
//! The central problem: given an algebra `A ≅ M₂(Q(√d))` presented by its
//! structure constants, find a zero divisor in `A` and an explicit
//! isomorphism onto the 2×2 matrix algebra. Equivalently, solve homogeneous
//! ternary quadratic equations `αx² + βy² = z²` over `Q(√d)`.
//!
//! Everything is exact (arbitrary-precision integers and rationals) and
//! deterministic: identical inputs produce byte-identical outputs. The only
//! oracle-grade subroutine is integer factoring, which is implemented by
//! trial division plus Brent's cycle-finding variant of Pollard rho with a
//! fixed parameter schedule.
//!
//! Layering, bottom to top:
//!
//! * [`arith`] — factoring, modular square roots, CRT, Legendre and Hilbert
//!   symbols.
//! * [`lattice`] — exact integer LLL reduction.
//! * [`quadform`] — rational quadratic forms in dimensions 2–6:
//!   diagonalization, Legendre reduction, local solvability, and
//!   deterministic isotropic-vector construction.
//! * [`quadfield`] — arithmetic in `Q(√d)`.
//! * [`algebra`] — structure-constant algebras, regular representations,
//!   quaternion-basis extraction.
//! * [`quaternion`] — quaternion algebras `H(α,β)`: norms, splitting over
//!   `Q`, square-root embeddings.
//! * [`pipeline`] — the end-to-end zero-divisor and explicit-isomorphism
//!   algorithm over `Q(√d)`, plus the ternary conic application.
//! * [`json`] — serialization of every public input/output document
//!   (schema tag `quatsplit/1`, all numbers as strings).

pub mod arith;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod quadfield;
pub mod quadform;
pub mod algebra;
pub mod quaternion;
pub mod pipeline;
pub mod rat;

pub use rat::{Int, Rat};
