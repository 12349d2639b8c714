//! Integer arithmetic oracles: deterministic factoring, modular square
//! roots, the Chinese remainder theorem, and Legendre/Hilbert symbols.
//!
//! Every function here is a pure function of its inputs. Factoring uses
//! trial division below 2¹⁶ followed by Brent's variant of Pollard rho with
//! a fixed polynomial-constant schedule, so repeated runs take the same
//! path. Primality is certified (deterministic Miller–Rabin witness set)
//! for inputs below 2⁶⁴; larger prime factors are flagged as probable in
//! [`Factorization::certified`].

mod factor;
mod hilbert;
mod modular;
mod primes;

pub use factor::{
    factor, square_divisor_root, square_divisor_root_budgeted, squarefree_split, Factorization,
    SquarefreeSplit, FACTOR_BUDGET_ENV,
};
pub use hilbert::{finite_bad_places, hilbert, Place};
pub(crate) use hilbert::val_unit;
pub use modular::{crt, inv_mod, legendre, sqrt_mod};
pub use primes::is_prime;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero input rejected")]
    ZeroInput,
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(crate::Int),
    #[error("modulus {0} is not prime")]
    NotPrime(crate::Int),
    #[error("{0} is not a quadratic residue modulo {1}")]
    NonResidue(crate::Int, crate::Int),
    #[error("congruences are inconsistent")]
    Inconsistent,
    #[error("place must be a prime or inf, got {0}")]
    InvalidPlace(crate::Int),
    #[error("factoring budget of {0} ms exhausted")]
    FactorBudgetExceeded(u64),
}
