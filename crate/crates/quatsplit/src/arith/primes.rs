//! Primality testing and the small-prime table.

use crate::Int;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::sync::OnceLock;

pub const TRIAL_BOUND: u64 = 1 << 16;

/// All primes below 2¹⁶, sieved once.
pub fn small_primes() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::new();
        for i in 2..n {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Miller–Rabin witnesses that make the test deterministic below 2⁶⁴.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Primality of `n ≥ 0`. The second component is `true` when the answer is
/// certified: below 2⁶⁴ the Miller–Rabin witness set is deterministic and
/// proving; above, a prime verdict is only probable (the same witnesses),
/// while a composite verdict is always certain.
pub fn is_prime_flagged(n: &Int) -> (bool, bool) {
    let n = match n.to_biguint() {
        Some(n) => n,
        None => return (false, true),
    };
    if n < BigUint::from(2u32) {
        return (false, true);
    }
    let two = BigUint::from(2u32);
    for &p in &[2u32, 3, 5, 7] {
        let p = BigUint::from(p);
        if n == p {
            return (true, true);
        }
        if (&n % &p).is_zero() {
            return (false, true);
        }
    }
    // n odd, n > 7: write n − 1 = 2^s · d.
    let n_minus_1 = &n - BigUint::one();
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    let certified = n.bits() <= 64;
    for &w in &MR_WITNESSES {
        let a = BigUint::from(w) % &n;
        if a.is_zero() || a.is_one() || a == n_minus_1 {
            continue;
        }
        let mut x = a.modpow(&d, &n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        let mut witness_of_compositeness = true;
        for _ in 1..s {
            x = x.modpow(&two, &n);
            if x == n_minus_1 {
                witness_of_compositeness = false;
                break;
            }
        }
        if witness_of_compositeness {
            return (false, true);
        }
    }
    (true, certified)
}

/// Primality of `n`; negative inputs are never prime.
pub fn is_prime(n: &Int) -> bool {
    is_prime_flagged(n).0
}
