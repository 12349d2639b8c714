//! Four-dimensional associative algebras given by structure constants over
//! an arbitrary base field: multiplication, the regular representation,
//! reduced traces, validation, and deterministic extraction of a
//! quaternion basis.
//!
//! Conventions. A basis a₁, a₂, a₃, a₄ is fixed and `gamma[i][j][k]` is the
//! coefficient of aₖ₊₁ in the product aᵢ₊₁·aⱼ₊₁ (indices are 0-based in
//! code, 1-based in error reports). The regular representation records left
//! multiplication row-wise: row i of `regular_rep(x)` holds the
//! coordinates of x·aᵢ₊₁. With rows as coordinate vectors this makes
//! `regular_rep(x·y) = regular_rep(y)·regular_rep(x)`.

use crate::linalg::{self, FieldElem};
use thiserror::Error;

pub const DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("structure constants must form a 4×4×4 array with a length-4 identity vector")]
    BadShape,
    #[error("associativity fails on the basis triple (a{i}, a{j}, a{k})")]
    Associativity { i: usize, j: usize, k: usize },
    #[error("the declared identity fails on basis element a{index}")]
    NoIdentity { index: usize },
    #[error("not a quaternion algebra presentation: {0}")]
    NotQuaternion(&'static str),
    #[error("change of basis matrix is singular")]
    SingularTransform,
}

/// An element written against the algebra's basis: four base-field coords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgElem<S: FieldElem> {
    pub coords: Vec<S>,
}

impl<S: FieldElem> AlgElem<S> {
    pub fn new(coords: Vec<S>) -> Result<AlgElem<S>, AlgebraError> {
        if coords.len() != DIM {
            return Err(AlgebraError::BadShape);
        }
        Ok(AlgElem { coords })
    }

    pub fn add(&self, rhs: &AlgElem<S>) -> AlgElem<S> {
        AlgElem {
            coords: self.coords.iter().zip(&rhs.coords).map(|(x, y)| x.add(y)).collect(),
        }
    }

    pub fn sub(&self, rhs: &AlgElem<S>) -> AlgElem<S> {
        AlgElem {
            coords: self.coords.iter().zip(&rhs.coords).map(|(x, y)| x.sub(y)).collect(),
        }
    }

    pub fn neg(&self) -> AlgElem<S> {
        AlgElem { coords: self.coords.iter().map(|x| x.neg()).collect() }
    }

    pub fn scale(&self, c: &S) -> AlgElem<S> {
        AlgElem { coords: self.coords.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }
}

/// A quaternion presentation found inside an algebra: elements u, v with
/// u² = alpha·1, v² = beta·1, uv = −vu, and the change of basis whose
/// columns are the coordinates of 1, u, v, uv in the original basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuatBasis<S: FieldElem> {
    pub u: AlgElem<S>,
    pub v: AlgElem<S>,
    pub alpha: S,
    pub beta: S,
    pub change_of_basis: Vec<Vec<S>>,
}

/// Outcome of the quaternion-basis search: either a full basis, or a
/// nonzero element squaring to zero that was found along the way (already
/// a zero divisor, so the search stops early).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuatBasisOutcome<S: FieldElem> {
    Basis(QuatBasis<S>),
    EarlyZeroDivisor(AlgElem<S>),
}

/// A four-dimensional algebra defined by structure constants, validated at
/// construction: the product is associative on all 64 basis triples and
/// `one` is an exact two-sided identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SCAlgebra<S: FieldElem> {
    gamma: Vec<Vec<Vec<S>>>,
    one: Vec<S>,
}

impl<S: FieldElem> SCAlgebra<S> {
    pub fn new(gamma: Vec<Vec<Vec<S>>>, one: Vec<S>) -> Result<SCAlgebra<S>, AlgebraError> {
        if gamma.len() != DIM
            || gamma.iter().any(|p| p.len() != DIM || p.iter().any(|r| r.len() != DIM))
            || one.len() != DIM
        {
            return Err(AlgebraError::BadShape);
        }
        let algebra = SCAlgebra { gamma, one };
        algebra.validate()?;
        Ok(algebra)
    }

    /// The quaternion algebra with basis 1, u, v, uv where u² = alpha,
    /// v² = beta, and uv = −vu.
    pub fn quaternion(alpha: &S, beta: &S) -> SCAlgebra<S> {
        let zero = alpha.zero_like();
        let id = alpha.one_like();
        let mut gamma = vec![vec![vec![zero.clone(); DIM]; DIM]; DIM];
        let mut put = |i: usize, j: usize, k: usize, c: S| gamma[i][j][k] = c;
        for j in 0..DIM {
            put(0, j, j, id.clone());
            if j > 0 {
                put(j, 0, j, id.clone());
            }
        }
        put(1, 1, 0, alpha.clone());
        put(1, 2, 3, id.clone());
        put(1, 3, 2, alpha.clone());
        put(2, 1, 3, id.neg());
        put(2, 2, 0, beta.clone());
        put(2, 3, 1, beta.neg());
        put(3, 1, 2, alpha.neg());
        put(3, 2, 1, beta.clone());
        put(3, 3, 0, alpha.mul(beta).neg());
        let mut one = vec![zero; DIM];
        one[0] = id;
        SCAlgebra::new(gamma, one).expect("the quaternion table is associative and unital")
    }

    /// The 2×2 matrix algebra in the elementary-matrix basis
    /// E₁₁, E₁₂, E₂₁, E₂₂ with EᵢⱼEₖₗ = δⱼₖ·Eᵢₗ. `sample` supplies the
    /// base-field constants.
    pub fn m2_elementary(sample: &S) -> SCAlgebra<S> {
        let zero = sample.zero_like();
        let id = sample.one_like();
        // Index m encodes E with row m/2 and column m%2.
        let mut gamma = vec![vec![vec![zero.clone(); DIM]; DIM]; DIM];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        if j == k {
                            gamma[2 * i + j][2 * k + l][2 * i + l] = id.clone();
                        }
                    }
                }
            }
        }
        let mut one = vec![zero; DIM];
        one[0] = id.clone();
        one[3] = id;
        SCAlgebra::new(gamma, one).expect("matrix units are associative and unital")
    }

    fn sample(&self) -> &S {
        &self.gamma[0][0][0]
    }

    pub fn gamma(&self) -> &Vec<Vec<Vec<S>>> {
        &self.gamma
    }

    pub fn one(&self) -> AlgElem<S> {
        AlgElem { coords: self.one.clone() }
    }

    /// The k-th basis vector (0-based).
    pub fn basis_elem(&self, k: usize) -> AlgElem<S> {
        let zero = self.sample().zero_like();
        let mut coords = vec![zero; DIM];
        coords[k] = self.sample().one_like();
        AlgElem { coords }
    }

    pub fn element(&self, coords: Vec<S>) -> Result<AlgElem<S>, AlgebraError> {
        AlgElem::new(coords)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let one = self.one();
        for i in 0..DIM {
            let a = self.basis_elem(i);
            if self.multiply(&one, &a) != a || self.multiply(&a, &one) != a {
                return Err(AlgebraError::NoIdentity { index: i + 1 });
            }
        }
        for i in 0..DIM {
            for j in 0..DIM {
                let ai = self.basis_elem(i);
                let aj = self.basis_elem(j);
                let ij = self.multiply(&ai, &aj);
                for k in 0..DIM {
                    let ak = self.basis_elem(k);
                    let left = self.multiply(&ij, &ak);
                    let right = self.multiply(&ai, &self.multiply(&aj, &ak));
                    if left != right {
                        return Err(AlgebraError::Associativity { i: i + 1, j: j + 1, k: k + 1 });
                    }
                }
            }
        }
        Ok(())
    }

    /// The bilinear product determined by the structure constants.
    pub fn multiply(&self, x: &AlgElem<S>, y: &AlgElem<S>) -> AlgElem<S> {
        let zero = self.sample().zero_like();
        let mut out = vec![zero; DIM];
        for i in 0..DIM {
            if x.coords[i].is_zero() {
                continue;
            }
            for j in 0..DIM {
                if y.coords[j].is_zero() {
                    continue;
                }
                let f = x.coords[i].mul(&y.coords[j]);
                for (k, slot) in out.iter_mut().enumerate() {
                    let term = f.mul(&self.gamma[i][j][k]);
                    if !term.is_zero() {
                        *slot = slot.add(&term);
                    }
                }
            }
        }
        AlgElem { coords: out }
    }

    /// Matrix of left multiplication by x: row i holds the coordinates of
    /// x·aᵢ₊₁, so `regular_rep(x·y) = regular_rep(y)·regular_rep(x)`.
    pub fn regular_rep(&self, x: &AlgElem<S>) -> Vec<Vec<S>> {
        (0..DIM)
            .map(|i| {
                (0..DIM)
                    .map(|j| {
                        let mut acc = self.sample().zero_like();
                        for k in 0..DIM {
                            acc = acc.add(&x.coords[k].mul(&self.gamma[k][i][j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    /// Half the trace of the regular representation. On a quaternion
    /// algebra this is the reduced trace: 1 ↦ 2 and u, v, uv ↦ 0.
    pub fn reduced_trace(&self, x: &AlgElem<S>) -> S {
        let mut acc = self.sample().zero_like();
        for i in 0..DIM {
            for k in 0..DIM {
                acc = acc.add(&x.coords[k].mul(&self.gamma[k][i][i]));
            }
        }
        let two = acc.one_like().add(&acc.one_like());
        acc.mul(&two.inv().expect("2 is invertible in characteristic zero"))
    }

    /// If x = λ·1, returns λ.
    pub fn scalar_of(&self, x: &AlgElem<S>) -> Option<S> {
        let m = self.one.iter().position(|c| !c.is_zero())?;
        let lambda = x.coords[m].mul(&self.one[m].inv()?);
        for k in 0..DIM {
            if x.coords[k] != lambda.mul(&self.one[k]) {
                return None;
            }
        }
        Some(lambda)
    }

    /// The trace-zero part x − (tr(x)/2)·1.
    fn traceless_part(&self, x: &AlgElem<S>) -> AlgElem<S> {
        let tr = self.reduced_trace(x);
        let two = tr.one_like().add(&tr.one_like());
        let half_tr = tr.mul(&two.inv().expect("2 is invertible in characteristic zero"));
        let one = self.one();
        x.sub(&one.scale(&half_tr))
    }

    /// Deterministic quaternion-basis extraction.
    ///
    /// Scans basis vectors a₂, a₃, a₄, then sums aᵢ+aⱼ (i<j), then
    /// aᵢ+aⱼ+aₖ, projecting each candidate to its trace-zero part; the
    /// first nonzero projection squares to a scalar α. If α = 0 the
    /// projection is itself a zero divisor and the search returns it
    /// early. Otherwise it becomes u, and v is sought in the plane
    /// {y : uy + yu = 0, tr(y) = 0}: the kernel basis vectors y₁, y₂
    /// and their sum y₁+y₂ are tried in order for a nonzero square; if
    /// all three square to zero, y₁ is returned as an early zero divisor.
    pub fn quaternion_basis(&self) -> Result<QuatBasisOutcome<S>, AlgebraError> {
        let mut candidates: Vec<Vec<usize>> = vec![vec![1], vec![2], vec![3]];
        for i in 0..DIM {
            for j in i + 1..DIM {
                candidates.push(vec![i, j]);
            }
        }
        for i in 0..DIM {
            for j in i + 1..DIM {
                for k in j + 1..DIM {
                    candidates.push(vec![i, j, k]);
                }
            }
        }

        let mut chosen: Option<(AlgElem<S>, S)> = None;
        for support in candidates {
            let mut x = self.basis_elem(support[0]);
            for &idx in &support[1..] {
                x = x.add(&self.basis_elem(idx));
            }
            let x0 = self.traceless_part(&x);
            if x0.is_zero() {
                continue;
            }
            let square = self.multiply(&x0, &x0);
            let Some(alpha) = self.scalar_of(&square) else {
                return Err(AlgebraError::NotQuaternion(
                    "a trace-zero element has a non-scalar square",
                ));
            };
            if alpha.is_zero() {
                return Ok(QuatBasisOutcome::EarlyZeroDivisor(x0));
            }
            chosen = Some((x0, alpha));
            break;
        }
        let Some((u, alpha)) = chosen else {
            return Err(AlgebraError::NotQuaternion("no candidate has a trace-zero part"));
        };

        let kernel = self.anticommutant_basis(&u);
        if kernel.len() != 2 {
            return Err(AlgebraError::NotQuaternion("the anticommutant is not 2-dimensional"));
        }
        let y1 = kernel[0].clone();
        let y2 = kernel[1].clone();
        let mut pick: Option<(AlgElem<S>, S)> = None;
        for y in [y1.clone(), y2.clone(), y1.add(&y2)] {
            let square = self.multiply(&y, &y);
            let Some(beta) = self.scalar_of(&square) else {
                return Err(AlgebraError::NotQuaternion(
                    "an anticommuting element has a non-scalar square",
                ));
            };
            if !beta.is_zero() {
                pick = Some((y, beta));
                break;
            }
        }
        let Some((v, beta)) = pick else {
            return Ok(QuatBasisOutcome::EarlyZeroDivisor(y1));
        };

        let uv = self.multiply(&u, &v);
        let vu = self.multiply(&v, &u);
        if uv != vu.neg() {
            return Err(AlgebraError::NotQuaternion("uv ≠ −vu after extraction"));
        }
        let one = self.one();
        let columns = [&one, &u, &v, &uv];
        let change_of_basis: Vec<Vec<S>> = (0..DIM)
            .map(|i| (0..DIM).map(|j| columns[j].coords[i].clone()).collect())
            .collect();
        if linalg::det(&change_of_basis).is_zero() {
            return Err(AlgebraError::NotQuaternion("1, u, v, uv are linearly dependent"));
        }
        Ok(QuatBasisOutcome::Basis(QuatBasis { u, v, alpha, beta, change_of_basis }))
    }

    /// Basis of {y : xy + yx = 0, tr(y) = 0}, the anticommutant of x
    /// intersected with the trace-zero hyperplane. Rows m = 0..4 of the
    /// linear system express the coordinates of xy + yx, the last row
    /// expresses tr(y) = 0; the kernel basis order is the deterministic
    /// one produced by row reduction.
    pub fn anticommutant_basis(&self, x: &AlgElem<S>) -> Vec<AlgElem<S>> {
        let zero = self.sample().zero_like();
        let mut system = vec![vec![zero.clone(); DIM]; DIM + 1];
        for (m, row) in system.iter_mut().take(DIM).enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let mut acc = zero.clone();
                for k in 0..DIM {
                    let both = self.gamma[k][j][m].add(&self.gamma[j][k][m]);
                    acc = acc.add(&x.coords[k].mul(&both));
                }
                *slot = acc;
            }
        }
        for (j, slot) in system[DIM].iter_mut().enumerate() {
            let mut acc = zero.clone();
            for i in 0..DIM {
                acc = acc.add(&self.gamma[j][i][i]);
            }
            *slot = acc;
        }
        linalg::kernel_basis(&system)
            .into_iter()
            .map(|coords| AlgElem { coords })
            .collect()
    }

    /// The same algebra written against the new basis bᵢ = Σⱼ t[i][j]·aⱼ.
    /// Rows of `t` are the new basis vectors in old coordinates; the
    /// result is validated like any other presentation.
    pub fn change_basis(&self, t: &[Vec<S>]) -> Result<SCAlgebra<S>, AlgebraError> {
        if t.len() != DIM || t.iter().any(|row| row.len() != DIM) {
            return Err(AlgebraError::BadShape);
        }
        // Old coordinates are Tᵀ·new, so new = (Tᵀ)⁻¹·old.
        let tt = linalg::transpose(t);
        let Some(tt_inv) = linalg::inverse(&tt) else {
            return Err(AlgebraError::SingularTransform);
        };
        let to_new = |x: &AlgElem<S>| linalg::mat_vec(&tt_inv, &x.coords);
        let b: Vec<AlgElem<S>> = (0..DIM).map(|i| AlgElem { coords: t[i].clone() }).collect();
        let gamma: Vec<Vec<Vec<S>>> = (0..DIM)
            .map(|i| (0..DIM).map(|j| to_new(&self.multiply(&b[i], &b[j]))).collect())
            .collect();
        let one = to_new(&self.one());
        SCAlgebra::new(gamma, one)
    }
}
