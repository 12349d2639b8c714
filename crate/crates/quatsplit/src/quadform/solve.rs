//! The isotropy solver for rational quadratic forms in dimensions 2
//! through 6: diagonalize, normalize the coefficients to squarefree
//! integers, and recurse on ternary pieces glued through a common
//! represented value.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::local::{coeffs_isotropic_local, hasse_invariant, square_class_reps};
use super::ternary::{minimize_ternary, solve_ternary, TernaryOutcome};
use super::{
    diagonalize, AnisotropyWitness, IsotropicVector, Obstruction, QuadForm, QuadFormError,
    SolveOutcome,
};
use crate::arith::{crt, factor, hilbert, inv_mod, is_prime, squarefree_split, Place};
use crate::linalg;
use crate::rat::{exact_sqrt, primitive_integer_vector};
use crate::{Int, Rat};

/// Default bound on the number of candidates tried while scanning for the
/// auxiliary prime that glues the two halves of a form in dimension ≥ 4.
/// By Dirichlet the expected number of tries is logarithmic, so hitting
/// this bound signals an internal inconsistency rather than bad luck.
pub const SCAN_LIMIT_DEFAULT: u64 = 100_000;

/// Finds a nontrivial rational zero of the form or an explicit local
/// obstruction. Exact and deterministic: equal inputs give equal outputs.
pub fn solve(q: &QuadForm) -> Result<SolveOutcome, QuadFormError> {
    solve_with_scan_limit(q, SCAN_LIMIT_DEFAULT)
}

/// [`solve`] with an explicit auxiliary-prime scan bound.
pub fn solve_with_scan_limit(q: &QuadForm, scan_limit: u64) -> Result<SolveOutcome, QuadFormError> {
    let n = q.n();
    let diag = diagonalize(q);
    // A degenerate direction is already a zero: take that basis vector.
    if let Some(i) = diag.degenerate_directions().first().copied() {
        let col: Vec<Rat> = (0..n).map(|r| diag.transform[r][i].clone()).collect();
        return finish(q, col);
    }
    // dᵢ = sᵢ·σᵢ² with sᵢ a squarefree integer: writing the diagonal
    // coordinates as yᵢ = zᵢ/σᵢ turns Σ dᵢ yᵢ² into Σ sᵢ zᵢ².
    let mut s: Vec<Int> = Vec::with_capacity(n);
    let mut sigma: Vec<Rat> = Vec::with_capacity(n);
    for d in &diag.coeffs {
        let split = squarefree_split(&(d.numer() * d.denom()))?;
        s.push(split.squarefree);
        sigma.push(Rat::new(split.cofactor, d.denom().clone()));
    }
    match solve_squarefree(&s, scan_limit)? {
        Inner::Witness(w) => Ok(SolveOutcome::Anisotropic(w)),
        Inner::Zero(z) => {
            let y: Vec<Rat> = z.iter().zip(&sigma).map(|(zi, si)| zi / si).collect();
            finish(q, linalg::mat_vec(&diag.transform, &y))
        }
    }
}

fn finish(q: &QuadForm, x: Vec<Rat>) -> Result<SolveOutcome, QuadFormError> {
    let v = primitive_integer_vector(&x);
    assert!(v.iter().any(|t| !t.is_zero()), "zero vector is never a solution");
    assert!(
        q.evaluate_int(&v).expect("dimensions agree").is_zero(),
        "constructed solution must evaluate to zero"
    );
    Ok(SolveOutcome::Isotropic(IsotropicVector { coords: v }))
}

/// A zero in the current diagonal coordinates, or a witness.
enum Inner {
    Zero(Vec<Rat>),
    Witness(AnisotropyWitness),
}

/// Solves Σ sᵢ zᵢ² = 0 for nonzero integers sᵢ, 2 ≤ n ≤ 6.
fn solve_squarefree(s: &[Int], scan_limit: u64) -> Result<Inner, QuadFormError> {
    match s.len() {
        2 => binary(s),
        3 => ternary(s),
        _ => higher(s, scan_limit),
    }
}

fn binary(s: &[Int]) -> Result<Inner, QuadFormError> {
    let prod = -(&s[0] * &s[1]);
    if let Some(r) = exact_sqrt(&prod) {
        // s₀ + s₁·(r/s₁)² = s₀ + (−s₀s₁)/s₁ = 0.
        return Ok(Inner::Zero(vec![Rat::one(), Rat::new(r, s[1].clone())]));
    }
    if prod.is_negative() {
        return Ok(Inner::Witness(AnisotropyWitness {
            place: Place::Inf,
            reason: Obstruction::Definite,
        }));
    }
    // −s₀s₁ > 0 but not a square: its squarefree part has odd valuation
    // at its smallest prime, so it is not a square there either.
    let split = squarefree_split(&prod)?;
    let p = factor(&split.squarefree)?
        .primes()
        .next()
        .expect("a positive non-square has a squarefree part > 1")
        .clone();
    Ok(Inner::Witness(AnisotropyWitness {
        place: Place::Finite(p),
        reason: Obstruction::NonSquareClass { value: split.squarefree },
    }))
}

fn ternary(s: &[Int]) -> Result<Inner, QuadFormError> {
    let coeffs = [
        Rat::from(s[0].clone()),
        Rat::from(s[1].clone()),
        Rat::from(s[2].clone()),
    ];
    match minimize_ternary(&coeffs)? {
        TernaryOutcome::Definite(w) => Ok(Inner::Witness(w)),
        TernaryOutcome::Reduced(form) => match solve_ternary(&form)? {
            SolveOutcome::Anisotropic(w) => Ok(Inner::Witness(w)),
            SolveOutcome::Isotropic(v) => {
                let z: Vec<Rat> = v.coords.iter().map(|t| Rat::from(t.clone())).collect();
                Ok(Inner::Zero(linalg::mat_vec(&form.back_transform, &z)))
            }
        },
    }
}

/// Dimensions 4 to 6, by splitting into two halves of dimension ≤ 3 that
/// are glued through a value t represented by the first half and by the
/// negated second half simultaneously.
fn higher(s: &[Int], scan_limit: u64) -> Result<Inner, QuadFormError> {
    let n = s.len();
    // Structural zeros cost nothing to try: an opposite pair or a
    // vanishing triple sum is a zero over {0, 1}ⁿ.
    for i in 0..n {
        for j in i + 1..n {
            if (&s[i] + &s[j]).is_zero() {
                return Ok(Inner::Zero(unit_sum(n, &[i, j])));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if (&s[i] + &s[j] + &s[k]).is_zero() {
                    return Ok(Inner::Zero(unit_sum(n, &[i, j, k])));
                }
            }
        }
    }

    let cut = if n == 4 { 2 } else { 3 };
    let (h1, h2) = s.split_at(cut);
    // A half with its own zero settles the whole form, and ruling that
    // out guarantees the glue coordinates below are nonzero.
    if let Some(z) = half_zero(h1, scan_limit)? {
        return Ok(Inner::Zero(pad(&z, n, 0)));
    }
    if let Some(z) = half_zero(h2, scan_limit)? {
        return Ok(Inner::Zero(pad(&z, n, cut)));
    }

    // The places that matter: 2, the odd primes of the coefficients, ∞.
    // The coefficients are factored one by one; factoring their product
    // would redo the same work on a number with as many digits as all of
    // them together.
    let mut odd: BTreeSet<Int> = BTreeSet::new();
    for c in s {
        odd.extend(factor(c)?.odd_primes().cloned());
    }
    let mut places = vec![Place::finite(2)];
    places.extend(odd.into_iter().map(Place::Finite));
    places.push(Place::Inf);

    // At each place pick the smallest square class represented by the
    // first half and, negated, by the second; an empty intersection is a
    // local obstruction to the whole form.
    let mut chosen: Vec<(Place, Int)> = Vec::with_capacity(places.len());
    for v in &places {
        let mut found = None;
        for rep in square_class_reps(v)? {
            let c = Rat::from(rep.clone());
            if coeffs_isotropic_local(&with_coeff(h1, -&c), v)?
                && coeffs_isotropic_local(&with_coeff(h2, c), v)?
            {
                found = Some(rep);
                break;
            }
        }
        match found {
            Some(rep) => chosen.push((v.clone(), rep)),
            None => return no_common_class(s, v),
        }
    }

    let t = glue_value(&chosen, scan_limit)?;

    let mut left: Vec<Int> = h1.to_vec();
    left.push(-&t);
    let mut right: Vec<Int> = h2.to_vec();
    right.push(t);
    let z1 = match solve_squarefree(&left, scan_limit)? {
        Inner::Zero(z) => z,
        // The glue value represents both halves at every place, so the
        // sub-forms are isotropic; a witness here is an internal error.
        Inner::Witness(_) => return Err(QuadFormError::SearchExhausted),
    };
    let z2 = match solve_squarefree(&right, scan_limit)? {
        Inner::Zero(z) => z,
        Inner::Witness(_) => return Err(QuadFormError::SearchExhausted),
    };
    let w1 = z1.last().expect("nonempty").clone();
    let w2 = z2.last().expect("nonempty").clone();
    // Both halves are anisotropic over Q, so neither sub-zero can have a
    // vanishing t-coordinate.
    assert!(!w1.is_zero() && !w2.is_zero(), "glue coordinates must be nonzero");
    let mut out: Vec<Rat> = Vec::with_capacity(n);
    for zi in &z1[..cut] {
        out.push(zi * &w2);
    }
    for zj in &z2[..n - cut] {
        out.push(zj * &w1);
    }
    Ok(Inner::Zero(out))
}

fn unit_sum(n: usize, idx: &[usize]) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    for &i in idx {
        v[i] = Rat::one();
    }
    v
}

fn pad(z: &[Rat], n: usize, offset: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    for (i, zi) in z.iter().enumerate() {
        v[offset + i] = zi.clone();
    }
    v
}

fn with_coeff(half: &[Int], extra: Rat) -> Vec<Rat> {
    let mut v: Vec<Rat> = half.iter().map(|x| Rat::from(x.clone())).collect();
    v.push(extra);
    v
}

/// A global zero of a half of dimension 2 or 3, if one exists.
fn half_zero(half: &[Int], scan_limit: u64) -> Result<Option<Vec<Rat>>, QuadFormError> {
    if half.len() == 2 {
        let prod = -(&half[0] * &half[1]);
        return Ok(exact_sqrt(&prod)
            .map(|r| vec![Rat::one(), Rat::new(r, half[1].clone())]));
    }
    match solve_squarefree(half, scan_limit)? {
        Inner::Zero(z) => Ok(Some(z)),
        Inner::Witness(_) => Ok(None),
    }
}

/// No square class at `v` is represented by both pieces: in dimension 4
/// this certifies a local obstruction, which the Hasse data must confirm.
fn no_common_class(s: &[Int], v: &Place) -> Result<Inner, QuadFormError> {
    if matches!(v, Place::Inf) {
        // Over the reals an empty intersection means one sign overall.
        assert!(
            s.iter().all(|x| x.is_positive()) || s.iter().all(|x| x.is_negative()),
            "real obstruction must come from a definite form"
        );
        return Ok(Inner::Witness(AnisotropyWitness {
            place: Place::Inf,
            reason: Obstruction::Definite,
        }));
    }
    if s.len() > 4 {
        // Forms in five or more variables are isotropic over every Q_p,
        // so an empty intersection at a finite place cannot happen.
        return Err(QuadFormError::SearchExhausted);
    }
    let coeffs: Vec<Rat> = s.iter().map(|x| Rat::from(x.clone())).collect();
    let eps = hasse_invariant(&coeffs, v)?;
    let required = hilbert(&-Rat::one(), &-Rat::one(), v)?;
    if eps != -required {
        return Err(QuadFormError::SearchExhausted);
    }
    Ok(Inner::Witness(AnisotropyWitness {
        place: v.clone(),
        reason: Obstruction::HasseMismatch { epsilon: eps, required },
    }))
}

/// Builds t = sign · 2^e₂ · ∏ p^eₚ · m matching the prescribed square
/// class at every listed place, with m ≡ fixed units mod 8 and mod each
/// odd p, scanned upward until m is 1 or a prime. Any prime m outside the
/// listed places keeps both ternary halves solvable there: the extra
/// congruences are met automatically because a ternary form is
/// anisotropic at an even number of places and a quaternary form with
/// non-square determinant is isotropic everywhere.
fn glue_value(chosen: &[(Place, Int)], scan_limit: u64) -> Result<Int, QuadFormError> {
    let mut sign = Int::one();
    let mut base = Int::one();
    let mut units: Vec<(Int, Int)> = Vec::new(); // (unit class, p or 8)
    for (place, rep) in chosen {
        match place {
            Place::Inf => {
                if rep.is_negative() {
                    sign = -Int::one();
                }
            }
            Place::Finite(p) if p.is_odd() => {
                if (rep % p).is_zero() {
                    base *= p;
                    units.push((rep / p, p.clone()));
                } else {
                    units.push((rep.clone(), p.clone()));
                }
            }
            Place::Finite(_) => {
                if rep.is_even() {
                    base *= 2;
                    units.push((rep / 2, Int::from(8)));
                } else {
                    units.push((rep.clone(), Int::from(8)));
                }
            }
        }
    }
    let t_base = &sign * &base;
    // m must turn the unit part of t at each listed place into the
    // prescribed class: m ≡ u · (t_base / p^eₚ)⁻¹ at each modulus.
    let mut congr: Vec<(Int, Int)> = Vec::new();
    for (u, modulus) in &units {
        let p_power = if *modulus == Int::from(8) {
            if base.is_even() { Int::from(2) } else { Int::one() }
        } else if (&base % modulus).is_zero() {
            modulus.clone()
        } else {
            Int::one()
        };
        let rest = (&t_base / &p_power).mod_floor(modulus);
        let inv = inv_mod(&rest, modulus).expect("unit part is invertible");
        congr.push(((u * inv).mod_floor(modulus), modulus.clone()));
    }
    let (m0, step) = crt(&congr).expect("moduli are coprime");
    debug_assert!(!m0.is_zero(), "m is a unit mod 8, never zero");
    let mut m = m0;
    let mut tries: u64 = 0;
    loop {
        if m.is_one() || is_prime(&m) {
            return Ok(&t_base * &m);
        }
        tries += 1;
        if tries >= scan_limit {
            return Err(QuadFormError::SearchExhausted);
        }
        m += &step;
    }
}
