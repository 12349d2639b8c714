//! Modular primitives: Legendre symbols, deterministic Tonelli–Shanks
//! square roots, modular inverses, and the Chinese remainder theorem.

use super::primes::is_prime;
use super::ArithError;
use crate::Int;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// The Legendre symbol `(a/p)` for an odd prime `p`: `0` when `p | a`,
/// `+1` when `a` is a nonzero square mod `p`, `−1` otherwise. Composite or
/// even `p` is rejected.
pub fn legendre(a: &Int, p: &Int) -> Result<i8, ArithError> {
    if !p.is_odd() || !is_prime(p) {
        return Err(ArithError::NotOddPrime(p.clone()));
    }
    Ok(legendre_unchecked(a, p))
}

/// Legendre symbol without the primality check, for callers that already
/// hold a certified prime.
pub(crate) fn legendre_unchecked(a: &Int, p: &Int) -> i8 {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return 0;
    }
    let exp: Int = (p - 1) / 2;
    let r = a.modpow(&exp, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// The inverse of `a` modulo `m > 1`, when `gcd(a, m) = 1`.
pub fn inv_mod(a: &Int, m: &Int) -> Option<Int> {
    let a = a.mod_floor(m);
    let ext = Int::extended_gcd(&a, m);
    if ext.gcd.is_one() {
        Some(ext.x.mod_floor(m))
    } else {
        None
    }
}

/// A square root of `a` modulo a prime `p`, canonicalized to the smaller
/// of the two roots (`0 ≤ r ≤ p/2`), so equal inputs give equal outputs.
/// Tonelli–Shanks with the least non-residue as the auxiliary generator.
pub fn sqrt_mod(a: &Int, p: &Int) -> Result<Int, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p.clone()));
    }
    let a = a.mod_floor(p);
    if *p == Int::from(2) {
        return Ok(a); // 0² = 0, 1² = 1 mod 2
    }
    if a.is_zero() {
        return Ok(Int::zero());
    }
    if legendre_unchecked(&a, p) != 1 {
        return Err(ArithError::NonResidue(a, p.clone()));
    }
    let root = if p.mod_floor(&Int::from(4)) == Int::from(3) {
        let exp: Int = (p + 1) / 4;
        a.modpow(&exp, p)
    } else {
        // p ≡ 1 mod 4: full Tonelli–Shanks. Write p − 1 = q·2^s, q odd.
        let mut q: Int = p - 1;
        let mut s = 0u64;
        while q.is_even() {
            q /= 2;
            s += 1;
        }
        // Least quadratic non-residue; the scan is what keeps this
        // deterministic.
        let mut z = Int::from(2);
        while legendre_unchecked(&z, p) != -1 {
            z += 1;
        }
        let mut m = s;
        let mut c = z.modpow(&q, p);
        let mut t = a.modpow(&q, p);
        let mut r = a.modpow(&((&q + 1) / 2), p);
        while !t.is_one() {
            // Least i with t^(2^i) = 1.
            let mut i = 0u64;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = &t2 * &t2 % p;
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = &b * &b % p;
            }
            m = i;
            c = &b * &b % p;
            t = t * &c % p;
            r = r * &b % p;
        }
        r
    };
    let other = p - &root;
    Ok(root.min(other))
}

/// Simultaneous congruences `x ≡ rᵢ (mod mᵢ)`; moduli need not be coprime
/// but the system must be consistent. Returns `(x, M)` with `M` the lcm and
/// `0 ≤ x < M`.
pub fn crt(congruences: &[(Int, Int)]) -> Result<(Int, Int), ArithError> {
    let mut x = Int::zero();
    let mut m = Int::one();
    for (r, n) in congruences {
        assert!(n.is_positive(), "crt modulus must be positive");
        let g = m.gcd(n);
        let diff = r - &x;
        let (q, rem) = diff.div_rem(&g);
        if !rem.is_zero() {
            return Err(ArithError::Inconsistent);
        }
        let n_red: Int = n / &g;
        let inv = inv_mod(&(&m / &g), &n_red).expect("m/g and n/g are coprime");
        let t = (q * inv).mod_floor(&n_red);
        x += &m * t;
        m = m.lcm(n);
        x = x.mod_floor(&m);
    }
    Ok((x, m))
}
