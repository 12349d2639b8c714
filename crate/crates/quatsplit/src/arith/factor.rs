//! Deterministic integer factoring: trial division, perfect-power
//! detection, and Brent's cycle variant of Pollard rho with a fixed
//! constant schedule.

use super::primes::{is_prime, is_prime_flagged, small_primes};
use super::ArithError;
use crate::Int;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cell::RefCell;
use std::collections::HashMap;
use std::time::Instant;

thread_local! {
    /// Per-thread memo table for completed factorizations, keyed by
    /// absolute value. Only successes are stored, so a budget failure can
    /// be retried; the cap keeps long-running processes bounded.
    static FACTOR_CACHE: RefCell<HashMap<Int, (Vec<(Int, u32)>, bool)>> =
        RefCell::new(HashMap::new());
}

const FACTOR_CACHE_CAP: usize = 1 << 16;

/// Environment variable holding the factoring wall-clock budget in
/// milliseconds. Unset or unparsable means no limit. The budget only turns
/// slow runs into [`ArithError::FactorBudgetExceeded`]; it never changes a
/// successful output.
pub const FACTOR_BUDGET_ENV: &str = "QUATSPLIT_FACTOR_BUDGET_MS";

/// A signed prime factorization `sign · ∏ pᵢ^eᵢ` with strictly increasing
/// primes. `certified` is false when some prime factor was too large for
/// the deterministic primality range and is only a probable prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(Int, u32)>,
    pub certified: bool,
}

impl Factorization {
    /// Multiplies the factorization back together.
    pub fn value(&self) -> Int {
        let mut v = Int::from(self.sign);
        for (p, e) in &self.factors {
            v *= p.pow(*e);
        }
        v
    }

    /// The primes dividing the value, ascending.
    pub fn primes(&self) -> impl Iterator<Item = &Int> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// The odd primes dividing the value, ascending.
    pub fn odd_primes(&self) -> impl Iterator<Item = &Int> {
        self.primes().filter(|p| p.is_odd())
    }
}

/// `n = squarefree · cofactor²` with `squarefree` squarefree and
/// `cofactor > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeSplit {
    pub squarefree: Int,
    pub cofactor: Int,
}

struct Budget {
    start: Instant,
    limit_ms: Option<u64>,
}

impl Budget {
    fn from_env() -> Budget {
        let limit_ms = std::env::var(FACTOR_BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok());
        Budget { start: Instant::now(), limit_ms }
    }

    fn check(&self) -> Result<(), ArithError> {
        if let Some(ms) = self.limit_ms {
            if self.start.elapsed().as_millis() as u64 > ms {
                return Err(ArithError::FactorBudgetExceeded(ms));
            }
        }
        Ok(())
    }
}

/// Factors a nonzero integer into a signed product of certified primes.
/// Deterministic: equal inputs take the same search path and yield equal
/// outputs. Finished factorizations are memoized per thread, so repeat
/// calls on the same integer cost a table lookup.
pub fn factor(n: &Int) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let key = n.abs();
    let cached = FACTOR_CACHE.with(|c| c.borrow().get(&key).cloned());
    if let Some((factors, certified)) = cached {
        return Ok(Factorization { sign, factors, certified });
    }
    let budget = Budget::from_env();
    let mut m = key.to_biguint().expect("abs is nonnegative");
    let mut factors: Vec<(Int, u32)> = Vec::new();
    let mut certified = true;

    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        let p_big = BigUint::from(p);
        if &p_big * &p_big > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&p_big);
            if r.is_zero() {
                m = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            factors.push((Int::from(p), e));
        }
    }

    if !m.is_one() {
        let mut work: Vec<(BigUint, u32)> = vec![(m, 1)];
        while let Some((x, mult)) = work.pop() {
            budget.check()?;
            let xi = Int::from(x.clone());
            let (prime, cert) = is_prime_flagged(&xi);
            if prime {
                certified &= cert;
                merge(&mut factors, xi, mult);
                continue;
            }
            if let Some((root, k)) = perfect_power(&x) {
                work.push((root, mult * k));
                continue;
            }
            let d = brent_rho(&x, &budget)?;
            let q = &x / &d;
            work.push((d, mult));
            work.push((q, mult));
        }
        factors.sort_by(|a, b| a.0.cmp(&b.0));
    }

    FACTOR_CACHE.with(|c| {
        let mut map = c.borrow_mut();
        if map.len() < FACTOR_CACHE_CAP {
            map.insert(key, (factors.clone(), certified));
        }
    });
    Ok(Factorization { sign, factors, certified })
}

fn merge(factors: &mut Vec<(Int, u32)>, p: Int, e: u32) {
    if let Some(slot) = factors.iter_mut().find(|(q, _)| *q == p) {
        slot.1 += e;
    } else {
        factors.push((p, e));
    }
}

/// Largest `k ≥ 2` with `n = r^k`, if any. `n ≥ 2`.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    for k in (2..=bits).rev() {
        let r = n.nth_root(k);
        if r.pow(k) == *n {
            return Some((r, k));
        }
    }
    None
}

/// Brent's improvement of Pollard rho. `n` is odd, composite, not a prime
/// power, and has no factor below 2¹⁶. The polynomial constant `c` walks a
/// fixed schedule 1, 3, 5, … so the search is reproducible.
fn brent_rho(n: &BigUint, budget: &Budget) -> Result<BigUint, ArithError> {
    let one = BigUint::one();
    let mut c = BigUint::one();
    let mut steps = u64::MAX;
    loop {
        budget.check()?;
        if let Some(d) = brent_rho_once(n, &c, budget, &mut steps)? {
            if d > one && &d < n {
                return Ok(d);
            }
        }
        c += 2u32;
    }
}

/// Bounded variant for opportunistic factor peeling: same schedule, but
/// gives up once the shared step allowance runs out.
fn brent_rho_bounded(n: &BigUint, steps: &mut u64) -> Option<BigUint> {
    let budget = Budget { start: Instant::now(), limit_ms: None };
    let one = BigUint::one();
    let mut c = BigUint::one();
    while *steps > 0 {
        match brent_rho_once(n, &c, &budget, steps) {
            Ok(Some(d)) if d > one && &d < n => return Some(d),
            Ok(_) => {}
            Err(_) => return None,
        }
        c += 2u32;
    }
    None
}

fn brent_rho_once(
    n: &BigUint,
    c: &BigUint,
    budget: &Budget,
    steps: &mut u64,
) -> Result<Option<BigUint>, ArithError> {
    const BATCH: u64 = 128;
    let step = |v: &BigUint| (v * v + c) % n;
    let mut y = BigUint::from(2u32);
    let mut q = BigUint::one();
    let mut r: u64 = 1;
    loop {
        if *steps < r {
            *steps = 0;
            return Ok(None);
        }
        *steps -= r;
        let x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k: u64 = 0;
        while k < r {
            budget.check()?;
            let take = BATCH.min(r - k);
            if *steps < take {
                *steps = 0;
                return Ok(None);
            }
            *steps -= take;
            let ys = y.clone();
            for _ in 0..take {
                y = step(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = q * diff % n;
            }
            let g = q.gcd(n);
            if !g.is_one() {
                if &g < n {
                    return Ok(Some(g));
                }
                // The batched product overshot to gcd = n; replay the batch
                // one step at a time. If the collision is not inside this
                // batch the constant is abandoned.
                let mut z = ys;
                for _ in 0..BATCH {
                    z = step(&z);
                    let diff = if x > z { &x - &z } else { &z - &x };
                    let g2 = diff.gcd(n);
                    if !g2.is_one() {
                        return Ok(if &g2 < n { Some(g2) } else { None });
                    }
                }
                return Ok(None);
            }
            k += BATCH;
        }
        r *= 2;
        if r > (1 << 40) {
            return Ok(None); // unreachable for factorable input; defensive
        }
    }
}

/// Step allowance for the opportunistic rho splitting inside
/// [`square_divisor_root`].
const STRIP_RHO_STEPS: u64 = 100_000;

/// The largest square divisor root of `n` that bounded work can certify:
/// returns `s` with `s² | n`, found by full trial division over the
/// small-prime table, perfect-power detection, and a fixed allowance of
/// rho iterations. Always terminates; a hard composite survivor merely
/// keeps its square content, costing later factoring effort rather than
/// correctness. Deterministic: the step allowance counts iterations, not
/// time.
pub fn square_divisor_root(n: &Int) -> Int {
    let mut steps = STRIP_RHO_STEPS;
    square_divisor_root_budgeted(n, &mut steps)
}

/// [`square_divisor_root`] drawing its rho iterations from a caller-held
/// pool, so a batch of extractions shares one bounded allowance.
pub fn square_divisor_root_budgeted(n: &Int, steps: &mut u64) -> Int {
    let one = BigUint::one();
    let mut m = n.abs().to_biguint().expect("abs is nonnegative");
    if m <= one {
        return Int::one();
    }
    let mut root = BigUint::one();
    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        let p_big = BigUint::from(p);
        if &p_big * &p_big > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&p_big);
            if r.is_zero() {
                m = q;
                e += 1;
            } else {
                break;
            }
        }
        if e >= 2 {
            root *= p_big.pow(e / 2);
        }
    }
    // What is left has no factor below the trial bound. Work items carry
    // a multiplicity, so even a piece that resists splitting contributes
    // whenever it occurs to an even power. A probable-prime misjudgment
    // cannot break the contract: x^(2·⌊mult/2⌋) divides n either way.
    let mut work: Vec<(BigUint, u32)> = vec![(m, 1)];
    while let Some((x, mult)) = work.pop() {
        if x.is_one() {
            continue;
        }
        if is_prime(&Int::from(x.clone())) {
            if mult >= 2 {
                root *= x.pow(mult / 2);
            }
            continue;
        }
        if let Some((r, k)) = perfect_power(&x) {
            work.push((r, mult * k));
            continue;
        }
        match brent_rho_bounded(&x, steps) {
            Some(d) => {
                let q = &x / &d;
                work.push((d, mult));
                work.push((q, mult));
            }
            None => {
                if mult >= 2 {
                    root *= x.pow(mult / 2);
                }
            }
        }
    }
    Int::from(root)
}

/// Splits nonzero `n` as `s · f²` with `s` squarefree.
pub fn squarefree_split(n: &Int) -> Result<SquarefreeSplit, ArithError> {
    let f = factor(n)?;
    let mut squarefree = Int::from(f.sign);
    let mut cofactor = Int::one();
    for (p, e) in &f.factors {
        if e % 2 == 1 {
            squarefree *= p;
        }
        cofactor *= p.pow(e / 2);
    }
    Ok(SquarefreeSplit { squarefree, cofactor })
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.sign < 0 {
            write!(f, "-1")?;
        } else if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 || self.sign < 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for SquarefreeSplit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} * {}^2", self.squarefree, self.cofactor)
    }
}
