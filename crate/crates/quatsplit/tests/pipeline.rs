//! End-to-end tests for the splitting pipeline: the staged construction
//! of traceless and anticommuting elements, the rational subalgebra,
//! zero divisors with verified certificates on division input, explicit
//! isomorphisms, and the conic solver over Q(√d).

use quatsplit::algebra::SCAlgebra;
use quatsplit::arith::Place;
use quatsplit::pipeline::{
    build_rational_subalgebra, explicit_isomorphism, solve_conic_quadfield,
    step1_traceless_rational_square, step2_anticommutant, zero_divisor,
    zero_divisor_with_isomorphism, AnticommutantForm, Branch, ConicOutcome, PipelineError,
    Step1Outcome, Step2Outcome, TracelessSquareForm,
};
use quatsplit::quadfield::{QFElem, QuadField};
use quatsplit::quadform::{diagonalize, is_isotropic_local, QuadForm};
use quatsplit::rat::{irat, rat, Rat};
use quatsplit::Int;

fn field(d: i64) -> QuadField {
    QuadField::new(Int::from(d)).unwrap()
}

fn qe(f: &QuadField, a: i64, b: i64) -> QFElem {
    f.elem(irat(a), irat(b))
}

fn quat_algebra(alpha: &QFElem, beta: &QFElem) -> SCAlgebra<QFElem> {
    SCAlgebra::quaternion(alpha, beta)
}

/// Re-verification used across the tests: nonzero, singular regular
/// representation, primitive integer coordinates with positive leading
/// nonzero component.
fn assert_zero_divisor(alg: &SCAlgebra<QFElem>, x: &quatsplit::algebra::AlgElem<QFElem>) {
    assert!(!x.is_zero());
    let rep = alg.regular_rep(x);
    assert!(quatsplit::linalg::det(&rep).is_zero());
    let flat: Vec<Rat> = x.coords.iter().flat_map(|c| [c.a.clone(), c.b.clone()]).collect();
    assert!(flat.iter().all(|r| r.is_integer()));
    let lead = flat.iter().find(|r| !num_traits::Zero::is_zero(*r)).unwrap();
    assert!(num_traits::Signed::is_positive(lead));
}

#[test]
fn step1_uses_the_special_cases_in_order() {
    // t₁ = 0: u² is already rational, so l = u.
    let f3 = field(3);
    let a = quat_algebra(&qe(&f3, 2, 0), &f3.sqrt_d());
    match step1_traceless_rational_square(&a).unwrap() {
        Step1Outcome::Element { l, square } => {
            assert_eq!(square, irat(2));
            assert_eq!(l.coords, vec![qe(&f3, 0, 0), qe(&f3, 1, 0), qe(&f3, 0, 0), qe(&f3, 0, 0)]);
        }
        other => panic!("expected u itself, got {other:?}"),
    }

    // r₁t₂ + r₂t₁ = 0 with t₁, t₂ ≠ 0: l = ww′ and l² = −w²w′² ∈ Q.
    let f2 = field(2);
    let a = quat_algebra(&f2.sqrt_d(), &f2.sqrt_d());
    match step1_traceless_rational_square(&a).unwrap() {
        Step1Outcome::Element { l, square } => {
            assert_eq!(square, irat(-2));
            assert_eq!(l.coords, vec![qe(&f2, 0, 0), qe(&f2, 0, 0), qe(&f2, 0, 0), qe(&f2, 1, 0)]);
        }
        other => panic!("expected ww′, got {other:?}"),
    }
}

#[test]
fn step1_general_branch_solves_the_six_variable_form() {
    let f3 = field(3);
    let a = quat_algebra(&qe(&f3, 1, 1), &f3.sqrt_d());
    match step1_traceless_rational_square(&a).unwrap() {
        Step1Outcome::Element { l, square } => {
            assert!(!l.is_zero());
            assert!(a.reduced_trace(&l).is_zero());
            let observed = a.scalar_of(&a.multiply(&l, &l)).unwrap();
            assert!(observed.is_rational());
            assert_eq!(observed.a, square);
            assert!(!num_traits::Zero::is_zero(&square));
        }
        other => panic!("expected a traceless element, got {other:?}"),
    }
}

#[test]
fn step2_takes_the_anticommutant_generator_when_its_square_is_rational() {
    let f5 = field(5);
    let a = quat_algebra(&qe(&f5, 2, 0), &qe(&f5, 3, 0));
    let l = match step1_traceless_rational_square(&a).unwrap() {
        Step1Outcome::Element { l, square } => {
            assert_eq!(square, irat(2));
            l
        }
        other => panic!("unexpected {other:?}"),
    };
    match step2_anticommutant(&a, &l, &irat(2)).unwrap() {
        Step2Outcome::Element { lprime, square } => {
            assert_eq!(square, irat(-3));
            let anti = a.multiply(&l, &lprime).add(&a.multiply(&lprime, &l));
            assert!(anti.is_zero());
        }
        other => panic!("expected the kernel generator, got {other:?}"),
    }
}

#[test]
fn step2_certifies_division_algebras_at_stage_two() {
    let f5 = field(5);
    let a = quat_algebra(&qe(&f5, -1, 0), &f5.sqrt_d());
    let l = match step1_traceless_rational_square(&a).unwrap() {
        Step1Outcome::Element { l, .. } => l,
        other => panic!("unexpected {other:?}"),
    };
    match step2_anticommutant(&a, &l, &irat(-1)).unwrap() {
        Step2Outcome::NotSplit(cert) => {
            assert_eq!(cert.stage, 2);
            assert_eq!(cert.witness.place, Place::finite(2));
            // The witness speaks about the conic of H(−5, −1) over Q.
            let conic = QuadForm::from_diagonal(&[irat(-5), irat(-1), irat(-1)]).unwrap();
            assert_eq!(cert.form, conic);
            assert!(!is_isotropic_local(&diagonalize(&conic), &cert.witness.place).unwrap());
        }
        other => panic!("expected a stage-2 certificate, got {other:?}"),
    }
}

#[test]
fn dependent_generators_are_rejected() {
    let f5 = field(5);
    let a = quat_algebra(&qe(&f5, 2, 0), &qe(&f5, 3, 0));
    let l = a.basis_elem(1);
    assert_eq!(
        build_rational_subalgebra(&a, &l, &l).unwrap_err(),
        PipelineError::IndependenceFailure
    );
}

#[test]
fn sqrt_embedding_branch_produces_the_expected_divisor() {
    let f = field(-1);
    let a = quat_algebra(&qe(&f, -3, 0), &qe(&f, -1, 0));
    let result = zero_divisor(&a).unwrap();
    assert_eq!(result.branch, Branch::SqrtEmbedding);
    assert_eq!(result.branch.tag(), "sqrt-embedding");
    // The divisor is s − √d·1 for the embedded square root s of d,
    // scaled to primitive coordinates with positive lead.
    assert_eq!(
        result.zero_divisor.coords,
        vec![qe(&f, 0, 1), qe(&f, 0, 0), qe(&f, -2, 0), qe(&f, 0, 1)]
    );
    assert_zero_divisor(&a, &result.zero_divisor);
}

#[test]
fn elementary_matrix_constants_exit_through_the_nilpotent_shortcut() {
    let f5 = field(5);
    let a = SCAlgebra::m2_elementary(&f5.one());
    let result = zero_divisor(&a).unwrap();
    assert_eq!(result.branch, Branch::EarlyNilpotent);
    assert_eq!(result.branch.tag(), "early-nilpotent");
    assert_eq!(
        result.zero_divisor.coords,
        vec![qe(&f5, 0, 0), qe(&f5, 1, 0), qe(&f5, 0, 0), qe(&f5, 0, 0)]
    );
    assert_zero_divisor(&a, &result.zero_divisor);
}

#[test]
fn division_input_yields_a_certificate_not_a_divisor() {
    // H(−1,−1) over the real field Q(√2) stays definite at the real
    // places, so the pipeline must refuse with a verified witness.
    let f2 = field(2);
    let a = quat_algebra(&qe(&f2, -1, 0), &qe(&f2, -1, 0));
    match zero_divisor(&a) {
        Err(PipelineError::NotSplit(cert)) => {
            assert_eq!(cert.stage, 4);
            let coeffs = [irat(-1), irat(-1), irat(-1), irat(-2)];
            let form = QuadForm::from_diagonal(&coeffs).unwrap();
            assert_eq!(cert.form, form);
            assert!(!is_isotropic_local(&diagonalize(&form), &cert.witness.place).unwrap());
        }
        other => panic!("expected a certificate, got {other:?}"),
    }
}

#[test]
fn natural_matrix_units_give_the_natural_isomorphism() {
    let f5 = field(5);
    let a = SCAlgebra::m2_elementary(&f5.one());
    let r = a.basis_elem(1);
    let iso = explicit_isomorphism(&a, &r).unwrap();
    let m = |entries: [[i64; 2]; 2]| -> Vec<Vec<QFElem>> {
        entries.iter().map(|row| row.iter().map(|&e| qe(&f5, e, 0)).collect()).collect()
    };
    assert_eq!(iso.images[0], m([[1, 0], [0, 0]]));
    assert_eq!(iso.images[1], m([[0, 1], [0, 0]]));
    assert_eq!(iso.images[2], m([[0, 0], [1, 0]]));
    assert_eq!(iso.images[3], m([[0, 0], [0, 1]]));
}

#[test]
fn non_divisors_are_rejected_by_ideal_dimension() {
    let f5 = field(5);
    let a = SCAlgebra::m2_elementary(&f5.one());
    match explicit_isomorphism(&a, &a.one()) {
        Err(PipelineError::BadIdealDimension { dim }) => assert_eq!(dim, 4),
        other => panic!("expected dimension 4 rejection, got {other:?}"),
    }
    let zero = a.element(vec![f5.zero(), f5.zero(), f5.zero(), f5.zero()]).unwrap();
    match explicit_isomorphism(&a, &zero) {
        Err(PipelineError::BadIdealDimension { dim }) => assert_eq!(dim, 0),
        other => panic!("expected dimension 0 rejection, got {other:?}"),
    }
}

#[test]
fn basis_changed_matrix_algebras_split_end_to_end() {
    for d in [5i64, -3] {
        let f = field(d);
        let a = SCAlgebra::m2_elementary(&f.one());
        let t = vec![
            vec![qe(&f, 1, 0), qe(&f, 0, 1), qe(&f, 0, 0), qe(&f, 1, 0)],
            vec![qe(&f, 0, 0), qe(&f, 1, 0), qe(&f, 2, 0), qe(&f, 0, 0)],
            vec![qe(&f, 0, 0), qe(&f, 0, 0), qe(&f, 1, 0), qe(&f, 0, 1)],
            vec![qe(&f, 3, 0), qe(&f, 0, 0), qe(&f, 0, 0), qe(&f, 1, 0)],
        ];
        let b = a.change_basis(&t).unwrap();
        let result = zero_divisor_with_isomorphism(&b).unwrap();
        assert_zero_divisor(&b, &result.zero_divisor);
        assert!(result.isomorphism.is_some());
        // Determinism: the full run reproduces itself.
        assert_eq!(zero_divisor_with_isomorphism(&b).unwrap(), result);
    }
}

#[test]
fn conic_with_square_alpha_solves_trivially() {
    let f5 = field(5);
    match solve_conic_quadfield(&f5.one(), &qe(&f5, 1, 0)).unwrap() {
        ConicOutcome::Solution(t) => {
            assert_eq!(t, vec![f5.one(), f5.zero(), f5.one()]);
        }
        other => panic!("expected (1, 0, 1), got {other:?}"),
    }
}

#[test]
fn conic_with_irrational_coefficients_solves_and_verifies() {
    let f5 = field(5);
    let alpha = f5.sqrt_d();
    let beta = qe(&f5, 1, -1);
    match solve_conic_quadfield(&alpha, &beta).unwrap() {
        ConicOutcome::Solution(t) => {
            assert!(t.iter().any(|c| !c.is_zero()));
            let val = alpha
                .mul(&t[0])
                .unwrap()
                .mul(&t[0])
                .unwrap()
                .add(&beta.mul(&t[1]).unwrap().mul(&t[1]).unwrap())
                .unwrap()
                .sub(&t[2].mul(&t[2]).unwrap())
                .unwrap();
            assert!(val.is_zero());
        }
        other => panic!("expected a solution, got {other:?}"),
    }
}

#[test]
fn conic_without_points_returns_a_verified_certificate() {
    let f2 = field(2);
    match solve_conic_quadfield(&qe(&f2, -1, 0), &qe(&f2, -1, 0)).unwrap() {
        ConicOutcome::NoSolution(cert) => {
            let coeffs = [irat(-1), irat(-1), irat(-1), irat(-2)];
            let form = QuadForm::from_diagonal(&coeffs).unwrap();
            assert_eq!(cert.form, form);
            assert!(!is_isotropic_local(&diagonalize(&form), &cert.witness.place).unwrap());
        }
        other => panic!("expected no solution, got {other:?}"),
    }
}

#[test]
fn six_variable_form_block_determinant_identity() {
    let samples = [
        (irat(1), irat(2), irat(3), irat(4), 5i64),
        (rat(1, 2), rat(-3, 4), irat(7), rat(2, 5), -11),
        (irat(-2), irat(1), rat(5, 3), rat(-1, 6), 13),
        (irat(0), irat(1), irat(1), irat(0), 2),
    ];
    for (r1, t1, r2, t2, d) in samples {
        let data =
            TracelessSquareForm::new(&Int::from(d), r1.clone(), t1.clone(), r2, t2).unwrap();
        let [d1, d2, d3] = data.block_determinants();
        assert_eq!(&d1 * &d2, -&d3);
        // The Gram matrix really is block diagonal.
        let gram = data.form.gram();
        for i in 0..6 {
            for j in 0..6 {
                if i / 2 != j / 2 {
                    assert!(num_traits::Zero::is_zero(&gram[i][j]));
                }
            }
        }
    }
}

#[test]
fn four_variable_form_matches_its_companion_quaternion() {
    let data = AnticommutantForm::new(&Int::from(5), irat(-1), irat(3), irat(2)).unwrap();
    assert_eq!(data.f, rat(3, 2));
    let diag = data.diagonal_coefficients();
    let quat = data.companion_quaternion().unwrap();
    let probes: [[i64; 4]; 4] = [[1, 0, 2, -1], [0, 1, 1, 1], [3, -2, 0, 5], [2, 2, 2, 2]];
    for probe in probes {
        let n: Vec<Rat> = probe.iter().map(|&x| irat(x)).collect();
        let diag_value: Rat = diag
            .iter()
            .zip(&n)
            .map(|(c, x)| c * x * x)
            .fold(irat(0), |acc, term| acc + term);
        // The form value at the pulled-back point equals the diagonal
        // value, which is the companion algebra's quaternion norm.
        let pulled = data.pullback(&[n[0].clone(), n[1].clone(), n[2].clone(), n[3].clone()]);
        assert_eq!(data.form.evaluate(&pulled).unwrap(), diag_value);
        let q = quat.element(n.clone()).unwrap();
        assert_eq!(quat.norm(&q), diag_value);
    }
}
