//! Dense exact linear algebra over an arbitrary field.
//!
//! Row reduction always picks the first nonzero pivot, so reduced forms,
//! kernels, determinants and inverses are deterministic functions of the
//! input. Matrices are row-major `Vec<Vec<S>>` and small (dimension ≤ 8),
//! which keeps the textbook algorithms entirely adequate.

use crate::rat::Rat;
use num_traits::{One, Zero};

/// A field element that can mint its own zero and one.
///
/// Scalars that carry runtime context (such as elements of a specific
/// quadratic field) produce constants from an existing value, which is why
/// these are methods rather than associated functions.
pub trait FieldElem: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Multiplicative inverse; `None` exactly for zero.
    fn inv(&self) -> Option<Self>;
}

impl FieldElem for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// n×n identity with constants minted from `sample`.
pub fn identity_like<S: FieldElem>(sample: &S, n: usize) -> Vec<Vec<S>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { sample.one_like() } else { sample.zero_like() })
                .collect()
        })
        .collect()
}

/// Matrix product a·b; panics on shape mismatch.
pub fn mat_mul<S: FieldElem>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    assert!(!a.is_empty() && !b.is_empty());
    assert_eq!(a[0].len(), b.len(), "inner dimensions must agree");
    let cols = b[0].len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = row[0].mul(&b[0][j]);
                    for (k, item) in row.iter().enumerate().skip(1) {
                        acc = acc.add(&item.mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Matrix–vector product a·x.
pub fn mat_vec<S: FieldElem>(a: &[Vec<S>], x: &[S]) -> Vec<S> {
    assert!(!a.is_empty());
    assert_eq!(a[0].len(), x.len());
    a.iter()
        .map(|row| {
            let mut acc = row[0].mul(&x[0]);
            for (k, item) in row.iter().enumerate().skip(1) {
                acc = acc.add(&item.mul(&x[k]));
            }
            acc
        })
        .collect()
}

pub fn transpose<S: Clone>(a: &[Vec<S>]) -> Vec<Vec<S>> {
    assert!(!a.is_empty());
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// In-place reduced row echelon form; returns the pivot columns in order.
pub fn rref<S: FieldElem>(m: &mut [Vec<S>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let pinv = m[r][c].inv().expect("pivot is nonzero");
        for k in c..cols {
            m[r][k] = m[r][k].mul(&pinv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..cols {
                    m[i][k] = m[i][k].sub(&f.mul(&m[r][k]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<S: FieldElem>(m: &[Vec<S>]) -> usize {
    let mut copy = m.to_vec();
    rref(&mut copy).len()
}

/// Basis of the right kernel {x : m·x = 0}, one vector per free column of
/// the reduced row echelon form, in ascending free-column order.
pub fn kernel_basis<S: FieldElem>(m: &[Vec<S>]) -> Vec<Vec<S>> {
    assert!(!m.is_empty() && !m[0].is_empty());
    let sample = m[0][0].clone();
    let cols = m[0].len();
    let mut red = m.to_vec();
    let pivots = rref(&mut red);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![sample.zero_like(); cols];
        v[free] = sample.one_like();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = red[i][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Determinant by Gaussian elimination; panics on non-square input.
pub fn det<S: FieldElem>(m: &[Vec<S>]) -> S {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|row| row.len() == n), "square matrix required");
    let mut a = m.to_vec();
    let mut result = a[0][0].one_like();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return a[0][0].zero_like();
        };
        if pr != col {
            a.swap(pr, col);
            result = result.neg();
        }
        let pivot = a[col][col].clone();
        result = result.mul(&pivot);
        let pinv = pivot.inv().expect("pivot is nonzero");
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let f = a[row][col].mul(&pinv);
            for k in col..n {
                a[row][k] = a[row][k].sub(&f.mul(&a[col][k]));
            }
        }
    }
    result
}

/// Inverse via Gauss–Jordan on the augmented matrix; `None` when singular.
pub fn inverse<S: FieldElem>(m: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|row| row.len() == n), "square matrix required");
    let sample = m[0][0].clone();
    let mut aug: Vec<Vec<S>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { sample.one_like() } else { sample.zero_like() });
            }
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots != (0..n).collect::<Vec<_>>() {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}
