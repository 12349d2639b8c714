//! Exact isotropy tests over the completions of Q, decided through
//! Hilbert symbols and the Hasse invariant of a diagonal form.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{DiagonalForm, QuadFormError};
use crate::arith::{hilbert, legendre, val_unit, ArithError, Place};
use crate::{Int, Rat};

/// Whether a nonzero rational is a square in the completion at `place`.
pub(crate) fn local_square(r: &Rat, place: &Place) -> Result<bool, ArithError> {
    if r.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    match place {
        Place::Inf => Ok(r.is_positive()),
        Place::Finite(p) => {
            let (v, u) = val_unit(r, p);
            if v % 2 != 0 {
                return Ok(false);
            }
            if p.is_odd() {
                Ok(legendre(&u, p)? == 1)
            } else {
                Ok(u.mod_floor(&Int::from(8)).is_one())
            }
        }
    }
}

/// Hasse invariant ε(q) = ∏_{i<j} (aᵢ, aⱼ)_v of a diagonal form.
pub(crate) fn hasse_invariant(coeffs: &[Rat], place: &Place) -> Result<i8, ArithError> {
    let mut eps = 1i8;
    for i in 0..coeffs.len() {
        for j in i + 1..coeffs.len() {
            eps *= hilbert(&coeffs[i], &coeffs[j], place)?;
        }
    }
    Ok(eps)
}

/// Whether a nondegenerate diagonal form has a nontrivial zero over the
/// completion at `place`. Degenerate forms are rejected with the index of
/// the first vanishing coefficient.
pub fn is_isotropic_local(form: &DiagonalForm, place: &Place) -> Result<bool, QuadFormError> {
    if let Some(&i) = form.degenerate_directions().first() {
        return Err(QuadFormError::Degenerate(i));
    }
    coeffs_isotropic_local(&form.coeffs, place).map_err(QuadFormError::from)
}

/// The same test on a bare list of nonzero diagonal coefficients.
pub(crate) fn coeffs_isotropic_local(coeffs: &[Rat], place: &Place) -> Result<bool, ArithError> {
    let n = coeffs.len();
    if matches!(place, Place::Inf) {
        let pos = coeffs.iter().any(|c| c.is_positive());
        let neg = coeffs.iter().any(|c| c.is_negative());
        return Ok(pos && neg);
    }
    match n {
        2 => local_square(&-(&coeffs[0] * &coeffs[1]), place),
        3 => {
            // ⟨a₁,a₂,a₃⟩ is isotropic over Q_p exactly when the Hasse
            // invariant equals (−1, −d)_p, d the determinant.
            let d: Rat = coeffs.iter().product();
            let eps = hasse_invariant(coeffs, place)?;
            Ok(eps == hilbert(&-Rat::one(), &-d, place)?)
        }
        4 => {
            // Anisotropic over Q_p exactly when d is a square and the
            // Hasse invariant equals −(−1, −1)_p.
            let d: Rat = coeffs.iter().product();
            let eps = hasse_invariant(coeffs, place)?;
            let aniso = local_square(&d, place)? && eps == -hilbert(&-Rat::one(), &-Rat::one(), place)?;
            Ok(!aniso)
        }
        _ => Ok(true), // five or more variables over Q_p
    }
}

/// Representatives of the square classes of the completion's units, in
/// ascending order: {−1, 1} at ∞, the eight classes {1,2,3,5,6,7,10,14}
/// at 2, and {1, n, p, n·p} at an odd p with n the least non-residue.
pub(crate) fn square_class_reps(place: &Place) -> Result<Vec<Int>, ArithError> {
    match place {
        Place::Inf => Ok(vec![Int::from(-1), Int::one()]),
        Place::Finite(p) if p.is_odd() => {
            let mut n = Int::from(2);
            while legendre(&n, p)? != -1 {
                n += 1;
            }
            let mut reps = vec![Int::one(), n.clone(), p.clone(), n * p];
            reps.sort();
            Ok(reps)
        }
        Place::Finite(_) => Ok([1, 2, 3, 5, 6, 7, 10, 14].map(Int::from).to_vec()),
    }
}
