//! Exact arithmetic in Q(√d) for squarefree d.
//!
//! Elements are pairs a + b√d of rationals tagged with their field, so
//! mixing elements of Q(√2) and Q(√3) is caught at runtime instead of
//! silently producing nonsense. d is validated as squarefree at
//! construction; non-squarefree input is rejected rather than reduced,
//! since callers state their structure constants against their own √d and
//! an implicit change of basis would be a trap.

use crate::arith::{squarefree_split, ArithError};
use crate::rat::{rat_sqrt, Int, Rat};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QuadFieldError {
    #[error("d = {0} is excluded; the field would be degenerate")]
    ExcludedD(Int),
    #[error("d = {0} is not squarefree (divisible by {1}²)")]
    NotSquarefree(Int, Int),
    #[error("could not validate d: {0}")]
    Arith(#[from] ArithError),
    #[error("elements belong to different fields: Q(√{0}) vs Q(√{1})")]
    FieldMismatch(Int, Int),
    #[error("division by zero")]
    DivisionByZero,
}

/// The field Q(√d) for a squarefree integer d ∉ {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: Int,
}

impl QuadField {
    /// Validates that d is squarefree and not 0 or 1.
    pub fn new(d: Int) -> Result<QuadField, QuadFieldError> {
        if d.is_zero() || d.is_one() {
            return Err(QuadFieldError::ExcludedD(d));
        }
        let split = squarefree_split(&d)?;
        if !split.cofactor.is_one() {
            return Err(QuadFieldError::NotSquarefree(d, split.cofactor));
        }
        Ok(QuadField { d })
    }

    pub fn d(&self) -> &Int {
        &self.d
    }

    pub fn zero(&self) -> QFElem {
        QFElem { a: Rat::zero(), b: Rat::zero(), field: self.clone() }
    }

    pub fn one(&self) -> QFElem {
        QFElem { a: Rat::one(), b: Rat::zero(), field: self.clone() }
    }

    /// The generator √d.
    pub fn sqrt_d(&self) -> QFElem {
        QFElem { a: Rat::zero(), b: Rat::one(), field: self.clone() }
    }

    pub fn elem(&self, a: Rat, b: Rat) -> QFElem {
        QFElem { a, b, field: self.clone() }
    }

    pub fn from_rational(&self, a: Rat) -> QFElem {
        QFElem { a, b: Rat::zero(), field: self.clone() }
    }
}

impl std::fmt::Display for QuadField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Q(sqrt({}))", self.d)
    }
}

/// An element a + b√d of a specific quadratic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFElem {
    pub a: Rat,
    pub b: Rat,
    pub field: QuadField,
}

impl QFElem {
    fn same_field(&self, rhs: &QFElem) -> Result<(), QuadFieldError> {
        if self.field == rhs.field {
            Ok(())
        } else {
            Err(QuadFieldError::FieldMismatch(self.field.d.clone(), rhs.field.d.clone()))
        }
    }

    pub fn add(&self, rhs: &QFElem) -> Result<QFElem, QuadFieldError> {
        self.same_field(rhs)?;
        Ok(self.field.elem(&self.a + &rhs.a, &self.b + &rhs.b))
    }

    pub fn sub(&self, rhs: &QFElem) -> Result<QFElem, QuadFieldError> {
        self.same_field(rhs)?;
        Ok(self.field.elem(&self.a - &rhs.a, &self.b - &rhs.b))
    }

    pub fn neg(&self) -> QFElem {
        self.field.elem(-&self.a, -&self.b)
    }

    pub fn mul(&self, rhs: &QFElem) -> Result<QFElem, QuadFieldError> {
        self.same_field(rhs)?;
        let d = Rat::from(self.field.d.clone());
        Ok(self.field.elem(
            &self.a * &rhs.a + &d * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        ))
    }

    /// Scale by a rational.
    pub fn scale(&self, c: &Rat) -> QFElem {
        self.field.elem(&self.a * c, &self.b * c)
    }

    /// Multiplicative inverse via the conjugate: x⁻¹ = conj(x)/norm(x).
    pub fn inv(&self) -> Result<QFElem, QuadFieldError> {
        if self.is_zero() {
            return Err(QuadFieldError::DivisionByZero);
        }
        let n = self.norm();
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn div(&self, rhs: &QFElem) -> Result<QFElem, QuadFieldError> {
        self.same_field(rhs)?;
        self.mul(&rhs.inv()?)
    }

    /// The Galois conjugate a − b√d.
    pub fn conj(&self) -> QFElem {
        self.field.elem(self.a.clone(), -&self.b)
    }

    /// The field norm a² − d·b², a rational.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - Rat::from(self.field.d.clone()) * &self.b * &self.b
    }

    /// The field trace 2a, a rational.
    pub fn tr(&self) -> Rat {
        &self.a + &self.a
    }

    /// A square root inside the field, if one exists. For b = 0 this is
    /// a rational root of a or a rational multiple of √d squaring to a;
    /// otherwise x + y√d squares to a + b√d exactly when y = b/(2x) and
    /// x² is one of (a ± √(a²−db²))/2, which pins down finitely many
    /// candidates to test.
    pub fn sqrt(&self) -> Option<QFElem> {
        let d = Rat::from(self.field.d.clone());
        if self.b.is_zero() {
            if let Some(r) = rat_sqrt(&self.a) {
                return Some(self.field.elem(r, Rat::zero()));
            }
            if let Some(r) = rat_sqrt(&(&self.a / &d)) {
                return Some(self.field.elem(Rat::zero(), r));
            }
            return None;
        }
        let t = rat_sqrt(&self.norm())?;
        let two = Rat::from(Int::from(2));
        for candidate in [(&self.a + &t) / &two, (&self.a - &t) / &two] {
            let Some(x) = rat_sqrt(&candidate) else { continue };
            if x.is_zero() {
                continue;
            }
            let y = &self.b / (&two * &x);
            let root = self.field.elem(x, y);
            if root.mul(&root).expect("same field") == *self {
                return Some(root);
            }
        }
        None
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }
}

impl std::fmt::Display for QFElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({})", self.b, self.field.d);
        }
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.field.d)
    }
}

impl crate::linalg::FieldElem for QFElem {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn is_zero(&self) -> bool {
        QFElem::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        QFElem::add(self, rhs).expect("matrix scalars share one field")
    }
    fn sub(&self, rhs: &Self) -> Self {
        QFElem::sub(self, rhs).expect("matrix scalars share one field")
    }
    fn neg(&self) -> Self {
        QFElem::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        QFElem::mul(self, rhs).expect("matrix scalars share one field")
    }
    fn inv(&self) -> Option<Self> {
        QFElem::inv(self).ok()
    }
}
