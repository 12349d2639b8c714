//! LLL reduction: reduced bases span the same lattice and satisfy the
//! size-reduction and Lovász conditions, checked here with a
//! straightforward Gram–Schmidt recomputation independent of the library
//! internals.

use num_traits::{One, Signed, Zero};
use quatsplit::lattice::{default_delta, lll_reduce, lll_reduce_default, IntLattice};
use quatsplit::linalg;
use quatsplit::rat::{rat, Int, Rat};

fn iv(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn to_rat_matrix(m: &[Vec<Int>]) -> Vec<Vec<Rat>> {
    m.iter().map(|row| row.iter().map(|x| Rat::from(x.clone())).collect()).collect()
}

fn dot(x: &[Rat], y: &[Rat], gram: Option<&Vec<Vec<Int>>>) -> Rat {
    match gram {
        None => x.iter().zip(y).map(|(a, b)| a * b).sum(),
        Some(g) => {
            let mut acc = Rat::zero();
            for (i, xi) in x.iter().enumerate() {
                for (j, yj) in y.iter().enumerate() {
                    acc += xi * yj * Rat::from(g[i][j].clone());
                }
            }
            acc
        }
    }
}

/// Checks |μᵢⱼ| ≤ 1/2 and ‖b*ᵢ‖² ≥ (δ − μ²ᵢ,ᵢ₋₁)·‖b*ᵢ₋₁‖² from scratch.
fn assert_lll_conditions(basis: &[Vec<Int>], gram: Option<&Vec<Vec<Int>>>, delta: &Rat) {
    let b = to_rat_matrix(basis);
    let n = b.len();
    let mut bstar: Vec<Vec<Rat>> = Vec::new();
    let mut mu = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            let denom = dot(&bstar[j], &bstar[j], gram);
            mu[i][j] = dot(&b[i], &bstar[j], gram) / denom;
            for (vk, sk) in v.iter_mut().zip(&bstar[j]) {
                *vk -= &mu[i][j] * sk;
            }
        }
        bstar.push(v);
    }
    for i in 0..n {
        for j in 0..i {
            assert!(mu[i][j].abs() <= rat(1, 2), "size reduction fails at mu[{i}][{j}]");
        }
    }
    for i in 1..n {
        let prev = dot(&bstar[i - 1], &bstar[i - 1], gram);
        let cur = dot(&bstar[i], &bstar[i], gram);
        assert!(
            cur >= (delta - &mu[i][i - 1] * &mu[i][i - 1]) * prev,
            "Lovász condition fails between rows {} and {i}",
            i - 1
        );
    }
}

/// Same lattice ⟺ the recorded transform is unimodular, maps input to
/// output exactly, and its inverse is integral.
fn assert_same_lattice(input: &[Vec<Int>], output: &[Vec<Int>], transform: &[Vec<Int>]) {
    let t = to_rat_matrix(transform);
    let reproduced = linalg::mat_mul(&t, &to_rat_matrix(input));
    assert_eq!(reproduced, to_rat_matrix(output), "transform does not map input to output");
    let dt = linalg::det(&t);
    assert!(dt == Rat::one() || dt == -Rat::one(), "transform determinant is {dt}");
    let tinv = linalg::inverse(&t).unwrap();
    for row in &tinv {
        for x in row {
            assert!(x.is_integer(), "inverse transform is not integral");
        }
    }
}

#[test]
fn size_reduction_example() {
    let lat = IntLattice::new(vec![iv(&[1, 0]), iv(&[4, 1])]);
    let red = lll_reduce_default(&lat).unwrap();
    assert_eq!(red.lattice.basis, vec![iv(&[1, 0]), iv(&[0, 1])]);
    assert_same_lattice(&lat.basis, &red.lattice.basis, &red.transform);
    assert_lll_conditions(&red.lattice.basis, None, &default_delta());
}

#[test]
fn unimodular_scramble_of_identity_reduces_to_signed_unit_vectors() {
    // det = 1, built from elementary row operations on the identity.
    let lat = IntLattice::new(vec![iv(&[2, 4, 1]), iv(&[4, 9, 5]), iv(&[1, 2, 1])]);
    let rational = to_rat_matrix(&lat.basis);
    assert_eq!(linalg::det(&rational).abs(), Rat::one(), "fixture must be unimodular");

    let red = lll_reduce_default(&lat).unwrap();
    assert_same_lattice(&lat.basis, &red.lattice.basis, &red.transform);
    assert_lll_conditions(&red.lattice.basis, None, &default_delta());
    for row in &red.lattice.basis {
        for x in row {
            assert!(x.abs() <= Int::one(), "entry {x} outside {{-1,0,1}}");
        }
    }
    let out_det = linalg::det(&to_rat_matrix(&red.lattice.basis)).abs();
    assert_eq!(out_det, Rat::one(), "reduced basis must span the same Z^3");
}

#[test]
fn first_vector_obeys_lll_length_bound() {
    // ‖b₁‖ ≤ 2^((n−1)/2)·|det|^(1/n), i.e. ‖b₁‖²ⁿ ≤ 2^(n(n−1))·det².
    let cases = vec![
        vec![iv(&[12, 5, 0]), iv(&[7, 3, 1]), iv(&[4, 9, 11])],
        vec![iv(&[101, 0, 0]), iv(&[57, 1, 0]), iv(&[88, 0, 1])],
        vec![iv(&[3, 1, 4, 1]), iv(&[5, 9, 2, 6]), iv(&[5, 3, 5, 8]), iv(&[9, 7, 9, 3])],
    ];
    for basis in cases {
        let n = basis.len() as u32;
        let lat = IntLattice::new(basis);
        let red = lll_reduce_default(&lat).unwrap();
        let b1 = &red.lattice.basis[0];
        let norm2: Int = b1.iter().map(|x| x * x).sum();
        let d = linalg::det(&to_rat_matrix(&red.lattice.basis)).to_integer();
        assert!(
            norm2.pow(n) <= (&d * &d) << (n * (n - 1)),
            "LLL bound violated: ‖b1‖²={norm2}, det={d}"
        );
        assert_same_lattice(&lat.basis, &red.lattice.basis, &red.transform);
    }
}

#[test]
fn weighted_gram_reduction() {
    // Reduce with respect to 6x² + 10y² + 15z²; conditions must hold in
    // that inner product, not the standard one.
    let gram = vec![iv(&[6, 0, 0]), iv(&[0, 10, 0]), iv(&[0, 0, 15])];
    let lat = IntLattice::with_gram(
        vec![iv(&[1, 30, 0]), iv(&[0, 30, 1]), iv(&[0, 60, 0])],
        gram.clone(),
    );
    let red = lll_reduce_default(&lat).unwrap();
    assert_same_lattice(&lat.basis, &red.lattice.basis, &red.transform);
    assert_lll_conditions(&red.lattice.basis, Some(&gram), &default_delta());
    assert_eq!(red.lattice.gram, Some(gram));
}

#[test]
fn tighter_delta_still_reduces() {
    let lat = IntLattice::new(vec![iv(&[15, 23, 11]), iv(&[46, 15, 3]), iv(&[32, 1, 1])]);
    let delta = rat(99, 100);
    let red = lll_reduce(&lat, &delta).unwrap();
    assert_same_lattice(&lat.basis, &red.lattice.basis, &red.transform);
    assert_lll_conditions(&red.lattice.basis, None, &delta);
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-30i64..=30, n), n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reduction_preserves_lattice_and_satisfies_conditions(rows in small_matrix(3)) {
            let basis: Vec<Vec<Int>> = rows.iter().map(|r| iv(r)).collect();
            let d = linalg::det(&to_rat_matrix(&basis));
            prop_assume!(!d.is_zero());
            let lat = IntLattice::new(basis);
            let red = lll_reduce_default(&lat).unwrap();
            assert_same_lattice(&lat.basis, &red.lattice.basis, &red.transform);
            assert_lll_conditions(&red.lattice.basis, None, &default_delta());
            let out = linalg::det(&to_rat_matrix(&red.lattice.basis));
            prop_assert_eq!(out.abs(), d.abs());
        }

        #[test]
        fn reduction_is_deterministic(rows in small_matrix(3)) {
            let basis: Vec<Vec<Int>> = rows.iter().map(|r| iv(r)).collect();
            prop_assume!(!linalg::det(&to_rat_matrix(&basis)).is_zero());
            let lat = IntLattice::new(basis);
            prop_assert_eq!(lll_reduce_default(&lat).unwrap(), lll_reduce_default(&lat).unwrap());
        }
    }
}
