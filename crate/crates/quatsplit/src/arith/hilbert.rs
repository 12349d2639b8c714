//! The Hilbert symbol `(a,b)_v` over the completions of `Q`.

use super::modular::legendre_unchecked;
use super::primes::is_prime;
use super::ArithError;
use crate::{Int, Rat};
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A place of `Q`: the real place or a finite prime.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    /// The real place, written `inf`.
    Inf,
    /// The `p`-adic place for a prime `p`.
    Finite(Int),
}

impl Place {
    pub fn finite(p: i64) -> Place {
        Place::Finite(Int::from(p))
    }

    pub fn is_two(&self) -> bool {
        matches!(self, Place::Finite(p) if *p == Int::from(2))
    }
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Inf => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// Decomposes a nonzero rational as `p^v · u` and returns `(v, u′)` where
/// `u′` is an integer in the square class of the unit part `u` (the product
/// of the prime-to-`p` parts of numerator and denominator).
pub(crate) fn val_unit(r: &Rat, p: &Int) -> (i64, Int) {
    let strip = |mut n: Int| -> (i64, Int) {
        let mut v = 0i64;
        while (&n % p).is_zero() {
            n /= p;
            v += 1;
        }
        (v, n)
    };
    let (vn, un) = strip(r.numer().clone());
    let (vd, ud) = strip(r.denom().clone());
    (vn - vd, un * ud)
}

fn eps2(u: &Int) -> u8 {
    // (u − 1)/2 mod 2 for odd u: 0 when u ≡ 1 (mod 4).
    if u.mod_floor(&Int::from(4)) == Int::from(1) {
        0
    } else {
        1
    }
}

fn omega2(u: &Int) -> u8 {
    // (u² − 1)/8 mod 2 for odd u: 0 when u ≡ ±1 (mod 8).
    let m = u.mod_floor(&Int::from(8));
    if m == Int::from(1) || m == Int::from(7) {
        0
    } else {
        1
    }
}

/// The Hilbert symbol `(a,b)_v ∈ {±1}`: `+1` exactly when
/// `a·x² + b·y² = z²` has a nontrivial solution over the completion at `v`.
pub fn hilbert(a: &Rat, b: &Rat, place: &Place) -> Result<i8, ArithError> {
    if a.is_zero() || b.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    match place {
        Place::Inf => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Finite(p) if !is_prime(p) => Err(ArithError::InvalidPlace(p.clone())),
        Place::Finite(p) if p.is_odd() => {
            let (va, ua) = val_unit(a, p);
            let (vb, ub) = val_unit(b, p);
            let (alpha, beta) = ((va & 1) as u32, (vb & 1) as u32);
            let mut sign = 1i8;
            // (−1)^(αβ·(p−1)/2)
            if alpha * beta == 1 && p.mod_floor(&Int::from(4)) == Int::from(3) {
                sign = -sign;
            }
            if beta == 1 && legendre_unchecked(&ua, p) == -1 {
                sign = -sign;
            }
            if alpha == 1 && legendre_unchecked(&ub, p) == -1 {
                sign = -sign;
            }
            Ok(sign)
        }
        Place::Finite(p) => {
            // p = 2: (−1)^(ε(u)ε(w) + α·ω(w) + β·ω(u)).
            let (va, u) = val_unit(a, p);
            let (vb, w) = val_unit(b, p);
            let (alpha, beta) = ((va & 1) as u8, (vb & 1) as u8);
            let exp = eps2(&u) * eps2(&w) + alpha * omega2(&w) + beta * omega2(&u);
            Ok(if exp % 2 == 0 { 1 } else { -1 })
        }
    }
}

/// The finite places where the symbol `(a,b)` can be `−1`: 2 and the odd
/// primes dividing a numerator or denominator of `a` or `b`, ascending.
/// Everywhere else the symbol is `+1`.
pub fn finite_bad_places(a: &Rat, b: &Rat) -> Result<Vec<Int>, ArithError> {
    let mut primes = std::collections::BTreeSet::new();
    primes.insert(Int::from(2));
    for r in [a, b] {
        for n in [r.numer(), r.denom()] {
            if !n.is_zero() {
                let f = super::factor(n)?;
                for p in f.odd_primes() {
                    primes.insert(p.clone());
                }
            }
        }
    }
    Ok(primes.into_iter().collect())
}
