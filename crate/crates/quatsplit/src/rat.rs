//! Scalar ground types: arbitrary-precision integers and rationals.
//!
//! `Rat` is kept reduced with a positive denominator by `num_rational`;
//! the canonical zero is `0/1`. Serialization is `"p"` or `"p/q"`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

/// `n` as an integer rational.
pub fn irat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// The rational `n/d`. Panics on `d = 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Renders `r` as `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"` (decimal, optional leading `-`).
pub fn parse_rat(s: &str) -> Option<Rat> {
    let mut parts = s.splitn(2, '/');
    let num: Int = parts.next()?.trim().parse().ok()?;
    match parts.next() {
        None => Some(Rat::from_integer(num)),
        Some(d) => {
            let den: Int = d.trim().parse().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(Rat::new(num, den))
            }
        }
    }
}

/// Floor of the integer square root. Panics on negative input.
pub fn int_sqrt(n: &Int) -> Int {
    assert!(!n.is_negative(), "int_sqrt of negative number");
    num_integer::Roots::sqrt(n)
}

/// The exact integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let r = int_sqrt(n);
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// The exact rational square root, if `r` is a square in `Q`.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    let n = exact_sqrt(r.numer())?;
    let d = exact_sqrt(r.denom())?;
    Some(Rat::new(n, d))
}

/// Clears denominators and divides by the content: the unique primitive
/// integer vector with the same ray as `v`, up to sign. The sign is chosen
/// so the first nonzero entry is positive; the zero vector maps to itself.
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<Int> {
    let mut lcm = Int::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = Int::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() {
        return ints;
    }
    for x in &mut ints {
        *x /= &gcd;
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut ints {
                *x = -std::mem::take(x);
            }
        }
    }
    ints
}

/// Content (gcd of entries, nonnegative) of an integer vector.
pub fn content(v: &[Int]) -> Int {
    let mut gcd = Int::zero();
    for x in v {
        gcd = gcd.gcd(x);
    }
    gcd
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse_round_trip() {
        for (n, d) in [(3, 1), (-7, 2), (0, 5), (22, 7)] {
            let r = rat(n, d);
            assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
        }
        assert_eq!(format_rat(&irat(5)), "5");
        assert_eq!(format_rat(&rat(-1, 3)), "-1/3");
        assert!(parse_rat("1/0").is_none());
    }

    #[test]
    fn primitive_vector_normalizes_sign_and_content() {
        let v = vec![rat(-2, 3), rat(4, 3), irat(0)];
        assert_eq!(
            primitive_integer_vector(&v),
            vec![Int::from(1), Int::from(-2), Int::from(0)]
        );
        let z = vec![irat(0), irat(0)];
        assert_eq!(primitive_integer_vector(&z), vec![Int::zero(), Int::zero()]);
    }

    #[test]
    fn exact_sqrt_detects_squares() {
        assert_eq!(exact_sqrt(&Int::from(144)), Some(Int::from(12)));
        assert_eq!(exact_sqrt(&Int::from(2)), None);
        assert_eq!(rat_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rat_sqrt(&rat(-9, 4)), None);
    }
}
