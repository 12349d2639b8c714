//! Rational quadratic forms in dimensions 2 through 6: diagonalization,
//! Legendre normalization, local solvability tests, and deterministic
//! construction of isotropic vectors.
//!
//! A returned [`IsotropicVector`] always satisfies q(v) = 0 exactly and
//! has coprime entries; a returned [`AnisotropyWitness`] names a place
//! (a prime or ∞) at which the form verifiably has no nontrivial zero
//! over the completion. Everything is exact: no floating point enters at
//! any stage, and identical inputs produce identical outputs.

mod local;
mod solve;
mod ternary;

pub use local::is_isotropic_local;
pub use solve::{solve, solve_with_scan_limit, SCAN_LIMIT_DEFAULT};
pub use ternary::{lagrange_descent, minimize_ternary, solve_ternary, LegendreTernary, TernaryOutcome};

use crate::arith::{ArithError, Place};
use crate::rat::{Int, Rat};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadFormError {
    #[error("dimension {0} is outside the supported range 2..=6")]
    BadDimension(usize),
    #[error("gram matrix must be symmetric")]
    NotSymmetric,
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coefficient {0} of a ternary form is zero")]
    ZeroCoefficient(usize),
    #[error("diagonal form is degenerate at position {0}")]
    Degenerate(usize),
    #[error("ternary form ({0}, {1}, {2}) is not Legendre-reduced")]
    NotReduced(Int, Int, Int),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("isotropic vector search exhausted; input believed solvable")]
    SearchExhausted,
}

/// A quadratic form q(v) = vᵀ·G·v given by its symmetric Gram matrix,
/// dimension 2 through 6.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadForm {
    gram: Vec<Vec<Rat>>,
}

impl QuadForm {
    pub fn new(gram: Vec<Vec<Rat>>) -> Result<QuadForm, QuadFormError> {
        let n = gram.len();
        if !(2..=6).contains(&n) {
            return Err(QuadFormError::BadDimension(n));
        }
        if gram.iter().any(|row| row.len() != n) {
            return Err(QuadFormError::NotSymmetric);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(QuadFormError::NotSymmetric);
                }
            }
        }
        Ok(QuadForm { gram })
    }

    pub fn from_diagonal(coeffs: &[Rat]) -> Result<QuadForm, QuadFormError> {
        let n = coeffs.len();
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { coeffs[i].clone() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        QuadForm::new(gram)
    }

    pub fn n(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Vec<Vec<Rat>> {
        &self.gram
    }

    /// q(v) = vᵀ·G·v.
    pub fn evaluate(&self, v: &[Rat]) -> Result<Rat, QuadFormError> {
        let n = self.n();
        if v.len() != n {
            return Err(QuadFormError::DimensionMismatch { expected: n, got: v.len() });
        }
        let mut acc = Rat::zero();
        for i in 0..n {
            for j in 0..n {
                acc += &v[i] * &v[j] * &self.gram[i][j];
            }
        }
        Ok(acc)
    }

    /// Evaluate at an integer vector.
    pub fn evaluate_int(&self, v: &[Int]) -> Result<Rat, QuadFormError> {
        let rational: Vec<Rat> = v.iter().map(|x| Rat::from(x.clone())).collect();
        self.evaluate(&rational)
    }
}

/// A congruence diagonalization: `transform` is an invertible U with
/// Uᵀ·G·U = diag(coeffs). Zero coefficients mark degenerate directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalForm {
    pub coeffs: Vec<Rat>,
    pub transform: Vec<Vec<Rat>>,
}

impl DiagonalForm {
    pub fn is_degenerate(&self) -> bool {
        self.coeffs.iter().any(|c| c.is_zero())
    }

    /// Indices of zero diagonal coefficients.
    pub fn degenerate_directions(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i].is_zero()).collect()
    }
}

/// Symmetric Gaussian congruence reduction. The transform columns are the
/// new basis vectors expressed in the original coordinates; when a pivot
/// can be taken directly the step is a plain shear, and when the whole
/// remaining diagonal vanishes a hyperbolic pair x ± y is introduced, so
/// already-diagonal inputs pass through with the identity transform.
pub fn diagonalize(q: &QuadForm) -> DiagonalForm {
    let n = q.n();
    let mut u = crate::linalg::identity_like(&Rat::zero(), n);
    let gram_of = |u: &Vec<Vec<Rat>>| -> Vec<Vec<Rat>> {
        let ut = crate::linalg::transpose(u);
        crate::linalg::mat_mul(&crate::linalg::mat_mul(&ut, &q.gram), u)
    };
    let mut g = q.gram.clone();

    for k in 0..n {
        if g[k][k].is_zero() {
            if let Some(l) = (k + 1..n).find(|&l| !g[l][l].is_zero()) {
                for row in u.iter_mut() {
                    row.swap(k, l);
                }
            } else if let Some(l) = (k + 1..n).find(|&l| !g[k][l].is_zero()) {
                // The whole remaining diagonal vanishes: take the
                // hyperbolic pair (x_k + x_l, x_k − x_l), an orthogonal
                // pair with values ±2·g[k][l].
                for row in u.iter_mut() {
                    let ck = row[k].clone();
                    let cl = row[l].clone();
                    row[k] = &ck + &cl;
                    row[l] = ck - cl;
                }
            } else {
                // Entire row/column is zero: a degenerate direction.
                continue;
            }
            g = gram_of(&u);
        }
        let pivot = g[k][k].clone();
        if pivot.is_zero() {
            continue;
        }
        // Shear the later columns orthogonal to the pivot. Eliminating
        // column j only alters row/column j of the Gram matrix, so the
        // remaining g[k][·] reads stay valid; refresh once afterwards.
        let mut changed = false;
        for j in k + 1..n {
            if !g[k][j].is_zero() {
                let f = -(&g[k][j] / &pivot);
                for row in u.iter_mut() {
                    let t = &row[k] * &f;
                    row[j] += t;
                }
                changed = true;
            }
        }
        if changed {
            g = gram_of(&u);
        }
    }

    let coeffs = (0..n).map(|i| g[i][i].clone()).collect();
    DiagonalForm { coeffs, transform: u }
}

/// A nonzero integer vector with coprime entries satisfying q(v) = 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsotropicVector {
    pub coords: Vec<Int>,
}

/// Local obstruction evidence attached to an [`AnisotropyWitness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// All diagonal coefficients share one sign: definite over the reals.
    Definite,
    /// For a binary form, −a₁a₂ has this squarefree part ≠ 1, hence is
    /// not a square in the completion at the witness place.
    NonSquareClass { value: Int },
    /// For a ternary form, `value` is a quadratic non-residue modulo the
    /// (odd) witness prime, violating the Legendre solvability condition.
    NonResidue { value: Int },
    /// The Hasse invariant ε equals the negation of the value required
    /// for isotropy at the witness place.
    HasseMismatch { epsilon: i8, required: i8 },
}

/// A place at which the form is verifiably anisotropic over the
/// completion, together with the evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnisotropyWitness {
    pub place: Place,
    pub reason: Obstruction,
}

/// Outcome of an isotropy search: an exact zero or a local obstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Isotropic(IsotropicVector),
    Anisotropic(AnisotropyWitness),
}

impl SolveOutcome {
    pub fn vector(&self) -> Option<&IsotropicVector> {
        match self {
            SolveOutcome::Isotropic(v) => Some(v),
            SolveOutcome::Anisotropic(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&AnisotropyWitness> {
        match self {
            SolveOutcome::Isotropic(_) => None,
            SolveOutcome::Anisotropic(w) => Some(w),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{irat, rat};

    fn diag(coeffs: &[i64]) -> QuadForm {
        let c: Vec<Rat> = coeffs.iter().map(|&x| irat(x)).collect();
        QuadForm::from_diagonal(&c).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let q = diag(&[1, 1, -2]);
        assert_eq!(q.evaluate(&[irat(1), irat(1), irat(1)]).unwrap(), irat(0));
        assert_eq!(q.evaluate(&[irat(0), irat(0), irat(0)]).unwrap(), irat(0));
        assert!(q.evaluate(&[irat(1)]).is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            QuadForm::from_diagonal(&[irat(1)]),
            Err(QuadFormError::BadDimension(1))
        ));
        let seven: Vec<Rat> = (0..7).map(|_| irat(1)).collect();
        assert!(matches!(
            QuadForm::from_diagonal(&seven),
            Err(QuadFormError::BadDimension(7))
        ));
        let asym = vec![vec![irat(1), irat(2)], vec![irat(3), irat(1)]];
        assert!(matches!(QuadForm::new(asym), Err(QuadFormError::NotSymmetric)));
    }

    #[test]
    fn diagonalize_already_diagonal_is_identity() {
        let q = diag(&[3, -5, 7]);
        let d = diagonalize(&q);
        assert_eq!(d.transform, crate::linalg::identity_like(&Rat::zero(), 3));
        assert_eq!(d.coeffs, vec![irat(3), irat(-5), irat(7)]);
        assert!(!d.is_degenerate());
    }

    #[test]
    fn diagonalize_hyperbolic_plane() {
        let q = QuadForm::new(vec![vec![irat(0), irat(1)], vec![irat(1), irat(0)]]).unwrap();
        let d = diagonalize(&q);
        assert_eq!(d.coeffs, vec![irat(2), irat(-2)]);
        assert_eq!(d.transform, vec![vec![irat(1), irat(1)], vec![irat(1), irat(-1)]]);
    }

    #[test]
    fn diagonalize_triangular_substitution() {
        // Gram [[1,f,0,0],[f,d,0,0],[0,0,−a,−af],[0,0,−af,−ad]] reduces to
        // (1, d−f², −a, −a(d−f²)) with a unit upper-triangular transform.
        let (dv, f, a) = (irat(13), rat(5, 2), irat(3));
        let gram = vec![
            vec![irat(1), f.clone(), irat(0), irat(0)],
            vec![f.clone(), dv.clone(), irat(0), irat(0)],
            vec![irat(0), irat(0), -a.clone(), -(&a * &f)],
            vec![irat(0), irat(0), -(&a * &f), -(&a * &dv)],
        ];
        let q = QuadForm::new(gram).unwrap();
        let d = diagonalize(&q);
        let disc = &dv - &f * &f;
        assert_eq!(d.coeffs, vec![irat(1), disc.clone(), -a.clone(), -(&a * &disc)]);
        for i in 0..4 {
            assert_eq!(d.transform[i][i], irat(1));
            for j in 0..i {
                assert_eq!(d.transform[i][j], irat(0), "lower part must vanish");
            }
        }
    }

    #[test]
    fn diagonalize_degenerate_flags_direction() {
        let q = QuadForm::new(vec![
            vec![irat(1), irat(1)],
            vec![irat(1), irat(1)],
        ])
        .unwrap();
        let d = diagonalize(&q);
        assert!(d.is_degenerate());
        assert_eq!(d.degenerate_directions(), vec![1]);
    }
}
