//! Acceptance battery. Each test checks one advertised guarantee of the
//! toolkit end to end, compares it against an independent oracle where
//! one exists, and enforces the stated time budget. One test per
//! guarantee, so the test runner's report reads as a pass/fail line per
//! criterion.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use quatsplit::algebra::SCAlgebra;
use quatsplit::arith::{factor, finite_bad_places, hilbert, legendre, Place};
use quatsplit::json::{
    algebra_to_doc, certificate_to_doc, certificate_to_outcome_doc, factorization_to_doc,
    form_to_doc, format_int, result_to_outcome_doc, solution_to_doc, to_json, Body, ConicExtDoc,
    ConicExtOutcome, ConicExtProblem, Document, QuadformSolveDoc, ScalarDoc, SplitDoc,
};
use quatsplit::linalg;
use quatsplit::pipeline::{
    check_isomorphism, solve_conic_quadfield, zero_divisor, zero_divisor_with_isomorphism,
    ConicOutcome, PipelineError, TracelessSquareForm,
};
use quatsplit::quadfield::{QFElem, QuadField};
use quatsplit::quadform::{
    diagonalize, is_isotropic_local, solve, solve_ternary, LegendreTernary, QuadForm, SolveOutcome,
};
use quatsplit::quaternion::{EmbedOutcome, QuatAlgebra};
use quatsplit::rat::{irat, rat};
use quatsplit::{Int, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Squarefree integers up to 30.
const SQUAREFREE: [i64; 19] =
    [1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30];

/// Every diagonal ternary ax² + by² + cz² with squarefree, pairwise
/// coprime coefficients of absolute value at most 30 and mixed signs.
fn reduced_triples() -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for &va in &SQUAREFREE {
        for &vb in &SQUAREFREE {
            if va.gcd(&vb) != 1 {
                continue;
            }
            for &vc in &SQUAREFREE {
                if va.gcd(&vc) != 1 || vb.gcd(&vc) != 1 {
                    continue;
                }
                for signs in 0..8u8 {
                    let a = if signs & 1 == 0 { va } else { -va };
                    let b = if signs & 2 == 0 { vb } else { -vb };
                    let c = if signs & 4 == 0 { vc } else { -vc };
                    let positives = [a, b, c].iter().filter(|x| **x > 0).count();
                    if positives == 0 || positives == 3 {
                        continue;
                    }
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

fn reduced_ternary(a: i64, b: i64, c: i64) -> LegendreTernary {
    LegendreTernary {
        a: Int::from(a),
        b: Int::from(b),
        c: Int::from(c),
        back_transform: linalg::identity_like(&Rat::zero(), 3),
    }
}

/// Whether target is a square modulo |m|, by enumerating every residue.
fn is_square_mod(target: i64, m: i64) -> bool {
    let m = m.abs();
    if m <= 1 {
        return true;
    }
    let t = target.rem_euclid(m);
    (0..m).any(|x| (x * x - t).rem_euclid(m) == 0)
}

/// The classical solvability conditions for a reduced mixed-sign ternary:
/// -bc, -ca, and -ab must be squares modulo |a|, |b|, and |c|. Decided
/// here purely by residue enumeration, independent of the solver.
fn legendre_conditions(a: i64, b: i64, c: i64) -> bool {
    is_square_mod(-b * c, a) && is_square_mod(-a * c, b) && is_square_mod(-a * b, c)
}

/// Confirms by exhaustive residue search that ax² + by² + cz² = 0 has no
/// solution modulo p² (modulo 16 for p = 2) in which some coordinate is
/// a unit. Absence of such a solution rules out any p-adic zero, so this
/// certifies an anisotropy witness without trusting the solver's local
/// analysis.
fn anisotropic_mod_prime_power(a: i64, b: i64, c: i64, p: i64) -> bool {
    let t = if p == 2 { 16 } else { p * p };
    let table = |coeff: i64| {
        let mut unit = vec![false; t as usize];
        let mut any = vec![false; t as usize];
        for x in 0..t {
            let v = (coeff * x * x).rem_euclid(t) as usize;
            any[v] = true;
            if x % p != 0 {
                unit[v] = true;
            }
        }
        (unit, any)
    };
    let (ua, wa) = table(a);
    let (ub, wb) = table(b);
    let (uc, wc) = table(c);
    let t = t as usize;
    for va in 0..t {
        if !wa[va] {
            continue;
        }
        for vb in 0..t {
            if !wb[vb] {
                continue;
            }
            let vc = (2 * t - va - vb) % t;
            if wc[vc] && (ua[va] || ub[vb] || uc[vc]) {
                return false;
            }
        }
    }
    true
}

fn eval_ternary(a: i64, b: i64, c: i64, v: &[Int]) -> Int {
    Int::from(a) * (&v[0] * &v[0]) + Int::from(b) * (&v[1] * &v[1]) + Int::from(c) * (&v[2] * &v[2])
}

#[test]
fn criterion_1_ternary_solver_matches_the_residue_oracle() {
    let start = Instant::now();
    let triples = reduced_triples();
    let mut isotropic = 0usize;
    let mut anisotropic = 0usize;
    let mut witness_cache: HashMap<(i64, i64, i64, i64), bool> = HashMap::new();
    for &(a, b, c) in &triples {
        let expected = legendre_conditions(a, b, c);
        match solve_ternary(&reduced_ternary(a, b, c)).unwrap() {
            SolveOutcome::Isotropic(v) => {
                assert!(
                    expected,
                    "solver found a root of ({a}, {b}, {c}) but the residue oracle says anisotropic"
                );
                assert!(
                    v.coords.iter().any(|x| !x.is_zero()),
                    "trivial vector returned for ({a}, {b}, {c})"
                );
                assert!(
                    eval_ternary(a, b, c, &v.coords).is_zero(),
                    "vector {:?} does not annihilate ({a}, {b}, {c})",
                    v.coords
                );
                isotropic += 1;
            }
            SolveOutcome::Anisotropic(w) => {
                assert!(
                    !expected,
                    "residue oracle finds ({a}, {b}, {c}) isotropic but the solver refused"
                );
                let p = match &w.place {
                    Place::Finite(p) => p.to_i64().unwrap(),
                    Place::Inf => {
                        panic!("mixed-sign ternary ({a}, {b}, {c}) cannot fail at the real place")
                    }
                };
                assert!(p <= 29, "witness prime {p} does not divide 2abc for ({a}, {b}, {c})");
                let t = if p == 2 { 16 } else { p * p };
                let key = (a.rem_euclid(t), b.rem_euclid(t), c.rem_euclid(t), p);
                let confirmed = *witness_cache
                    .entry(key)
                    .or_insert_with(|| anisotropic_mod_prime_power(a, b, c, p));
                assert!(
                    confirmed,
                    "witness at {p} for ({a}, {b}, {c}) does not re-verify modulo {t}"
                );
                anisotropic += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "exceeded the five-minute budget: {elapsed:?}");
    println!(
        "criterion 1: PASS ({} forms, {isotropic} isotropic, {anisotropic} anisotropic, decisions and witnesses all confirmed) in {elapsed:?}",
        triples.len()
    );
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

/// Searches for a nontrivial root with |x| ≤ √|bc|, |y| ≤ √|ac|,
/// |z| ≤ √|ab|. The form is diagonal, so signs never matter and the
/// search can stay in the nonnegative octant.
fn holzer_search(a: i64, b: i64, c: i64) -> bool {
    for x in 0..=isqrt((b * c).abs()) {
        for y in 0..=isqrt((a * c).abs()) {
            for z in 0..=isqrt((a * b).abs()) {
                if (x, y, z) != (0, 0, 0) && a * x * x + b * y * y + c * z * z == 0 {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn criterion_2_holzer_bounds_contain_a_root_for_every_isotropic_form() {
    let start = Instant::now();
    let mut checked = 0usize;
    for &(a, b, c) in &reduced_triples() {
        if (a * b * c).abs() > 2000 {
            continue;
        }
        if let SolveOutcome::Isotropic(_) = solve_ternary(&reduced_ternary(a, b, c)).unwrap() {
            assert!(
                holzer_search(a, b, c),
                "solver calls ({a}, {b}, {c}) isotropic but no root exists within the Holzer bounds"
            );
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(600), "exceeded the ten-minute budget: {elapsed:?}");
    println!(
        "criterion 2: PASS ({checked} isotropy claims confirmed by exhaustive bounded search) in {elapsed:?}"
    );
}

#[test]
fn criterion_3_six_variable_form_identities_hold_on_random_input() {
    let start = Instant::now();
    let ds = [-11i64, -7, -3, -2, -1, 2, 3, 5, 13, 101];
    let mut rng = ChaCha8Rng::seed_from_u64(0x0003);
    let mut instances = 0usize;
    let mut indefinite = 0usize;
    for _ in 0..100 {
        let mut draw = || rat(rng.gen_range(-100..=100), rng.gen_range(1..=100));
        let (r1, t1, r2, t2) = (draw(), draw(), draw(), draw());
        for &d in &ds {
            let form = TracelessSquareForm::new(
                &Int::from(d),
                r1.clone(),
                t1.clone(),
                r2.clone(),
                t2.clone(),
            )
            .unwrap();
            let dets = form.block_determinants();
            let dr = Rat::from(Int::from(d));
            assert_eq!(dets[0], &(&t1 * &t1) * &dr - &r1 * &r1);
            assert_eq!(dets[1], &(&t2 * &t2) * &dr - &r2 * &r2);
            assert_eq!(
                &dets[0] * &dets[1],
                -dets[2].clone(),
                "block-determinant identity fails for d = {d}, r1 = {r1}, t1 = {t1}, r2 = {r2}, t2 = {t2}"
            );
            let gate = &(&t1 * &t2) * &(&(&r1 * &t2) + &(&r2 * &t1));
            if !gate.is_zero() {
                let diag = diagonalize(&form.form);
                assert!(
                    !diag.is_degenerate(),
                    "degenerate despite nonzero t1 t2 (r1 t2 + r2 t1) for d = {d}"
                );
                assert!(
                    diag.coeffs.iter().any(|c| c.is_positive())
                        && diag.coeffs.iter().any(|c| c.is_negative()),
                    "diagonalization is not indefinite for d = {d}, r1 = {r1}, t1 = {t1}, r2 = {r2}, t2 = {t2}"
                );
                indefinite += 1;
            }
            instances += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "exceeded the one-minute budget: {elapsed:?}");
    println!(
        "criterion 3: PASS ({instances} instances, determinant identity exact, {indefinite} indefinite diagonalizations) in {elapsed:?}"
    );
}

fn random_scalar(rng: &mut ChaCha8Rng, field: &QuadField, bound: i64) -> QFElem {
    field.elem(
        rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound)),
        rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound)),
    )
}

type Mat2 = [[QFElem; 2]; 2];

fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let entry = |i: usize, j: usize| {
        x[i][0].mul(&y[0][j]).unwrap().add(&x[i][1].mul(&y[1][j]).unwrap()).unwrap()
    };
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

fn mat2_inv(x: &Mat2) -> Option<Mat2> {
    let det = x[0][0].mul(&x[1][1]).unwrap().sub(&x[0][1].mul(&x[1][0]).unwrap()).unwrap();
    let inv = det.inv().ok()?;
    let e = |v: &QFElem| v.mul(&inv).unwrap();
    Some([[e(&x[1][1]), e(&x[0][1].neg())], [e(&x[1][0].neg()), e(&x[0][0])]])
}

/// A presentation of M₂(Q(√d)) produced by conjugating each elementary
/// matrix by its own pseudorandom invertible 2×2 matrix over the field
/// and reading the structure constants off the conjugated basis. Draws
/// are repeated until every conjugator is invertible and the four
/// conjugates are linearly independent.
fn random_presentation(
    rng: &mut ChaCha8Rng,
    field: &QuadField,
    bound: i64,
    resamples: &mut usize,
) -> SCAlgebra<QFElem> {
    let base = SCAlgebra::m2_elementary(&field.one());
    let zero = field.zero();
    let one = field.one();
    let unit = |i: usize, j: usize| {
        let mut m = [[zero.clone(), zero.clone()], [zero.clone(), zero.clone()]];
        m[i][j] = one.clone();
        m
    };
    let elementary = [unit(0, 0), unit(0, 1), unit(1, 0), unit(1, 1)];
    loop {
        let mut rows: Vec<Vec<QFElem>> = Vec::with_capacity(4);
        for e in &elementary {
            loop {
                let t: Mat2 = [
                    [random_scalar(rng, field, bound), random_scalar(rng, field, bound)],
                    [random_scalar(rng, field, bound), random_scalar(rng, field, bound)],
                ];
                let Some(tinv) = mat2_inv(&t) else {
                    *resamples += 1;
                    continue;
                };
                let conj = mat2_mul(&mat2_mul(&t, e), &tinv);
                rows.push(vec![
                    conj[0][0].clone(),
                    conj[0][1].clone(),
                    conj[1][0].clone(),
                    conj[1][1].clone(),
                ]);
                break;
            }
        }
        if linalg::det(&rows).is_zero() {
            *resamples += 1;
            continue;
        }
        match base.change_basis(&rows) {
            Ok(alg) => return alg,
            Err(_) => *resamples += 1,
        }
    }
}

#[test]
fn criterion_4_random_presentations_of_m2_split_within_budget() {
    let start = Instant::now();
    let ds = [-11i64, -7, -3, -1, 2, 3, 5, 13];
    let mut rng = ChaCha8Rng::seed_from_u64(0x0004);
    let mut resamples = 0usize;
    let mut slowest = Duration::ZERO;
    let mut instances = 0usize;
    for &d in &ds {
        let field = QuadField::new(Int::from(d)).unwrap();
        for _ in 0..20 {
            let alg = random_presentation(&mut rng, &field, 20, &mut resamples);
            let t0 = Instant::now();
            let res = zero_divisor_with_isomorphism(&alg)
                .unwrap_or_else(|e| panic!("presentation over d = {d} failed to split: {e}"));
            let spent = t0.elapsed();
            assert!(!res.zero_divisor.is_zero(), "zero divisor is the zero element for d = {d}");
            assert!(
                linalg::det(&alg.regular_rep(&res.zero_divisor)).is_zero(),
                "claimed zero divisor is invertible for d = {d}"
            );
            let iso = res.isomorphism.as_ref().expect("isomorphism requested but missing");
            check_isomorphism(&alg, iso)
                .unwrap_or_else(|e| panic!("isomorphism fails its checks for d = {d}: {e}"));
            assert!(spent < Duration::from_secs(10), "instance over d = {d} took {spent:?}");
            slowest = slowest.max(spent);
            instances += 1;
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 4: PASS ({instances} presentations split with verified isomorphisms, slowest instance {slowest:?}, {resamples} resamples) in {elapsed:?}"
    );
}

/// Decides by local analysis whether H(α, β) ⊗ Q(√d) is a division
/// algebra: the tensor stays division exactly when some place at which
/// H(α, β) ramifies splits in Q(√d). This route never runs the pipeline,
/// so it is an independent ground truth for rational α, β.
fn division_expected(d: i64, alpha: i64, beta: i64) -> bool {
    let (a, b) = (irat(alpha), irat(beta));
    let mut ramified: Vec<Place> = Vec::new();
    if hilbert(&a, &b, &Place::Inf).unwrap() == -1 {
        ramified.push(Place::Inf);
    }
    for p in finite_bad_places(&a, &b).unwrap() {
        if hilbert(&a, &b, &Place::Finite(p.clone())).unwrap() == -1 {
            ramified.push(Place::Finite(p));
        }
    }
    let d_int = Int::from(d);
    let two = Int::from(2);
    ramified.iter().any(|place| match place {
        Place::Inf => d > 0,
        Place::Finite(p) if *p == two => d.rem_euclid(8) == 1,
        Place::Finite(p) => !(&d_int % p).is_zero() && legendre(&d_int, p).unwrap() == 1,
    })
}

fn expect_certificate(alg: &SCAlgebra<QFElem>, label: &str) {
    match zero_divisor(alg) {
        Err(PipelineError::NotSplit(cert)) => {
            assert!(
                cert.stage == 2 || cert.stage == 4,
                "unexpected certificate stage {} for {label}",
                cert.stage
            );
            let diag = diagonalize(&cert.form);
            assert!(
                !is_isotropic_local(&diag, &cert.witness.place).unwrap(),
                "certificate witness for {label} does not re-verify at {}",
                cert.witness.place
            );
        }
        Ok(_) => panic!("found a zero divisor in the division algebra {label}"),
        Err(e) => panic!("pipeline error on {label}: {e}"),
    }
}

#[test]
fn criterion_5_division_algebras_get_verified_certificates() {
    let start = Instant::now();
    let division: [(i64, i64, i64); 8] = [
        (2, -1, -1),
        (3, -1, -1),
        (5, -1, -1),
        (13, -1, -1),
        (-7, -1, -1),
        (2, -1, -2),
        (5, -2, -3),
        (13, -1, 3),
    ];
    for &(d, a, b) in &division {
        assert!(
            division_expected(d, a, b),
            "local analysis says H({a}, {b}) over d = {d} splits; bad fixture"
        );
        let field = QuadField::new(Int::from(d)).unwrap();
        let alg =
            SCAlgebra::quaternion(&field.from_rational(irat(a)), &field.from_rational(irat(b)));
        expect_certificate(&alg, &format!("H({a}, {b}) over d = {d}"));
    }
    // Two instances with an irrational structure constant: beta = sqrt(d)
    // is negative under one real embedding while alpha = -1, so the
    // algebra ramifies at that real place and must stay division.
    for &(d, a) in &[(5i64, -1i64), (2, -1)] {
        let field = QuadField::new(Int::from(d)).unwrap();
        let alg = SCAlgebra::quaternion(&field.from_rational(irat(a)), &field.sqrt_d());
        expect_certificate(&alg, &format!("H({a}, sqrt({d}))"));
    }
    // Split controls: the same local analysis says these are full matrix
    // algebras, and the pipeline must produce a zero divisor, never a
    // certificate.
    let controls: [(i64, i64, i64); 3] = [(5, -1, 3), (-3, -1, -1), (3, 2, 3)];
    for &(d, a, b) in &controls {
        assert!(
            !division_expected(d, a, b),
            "local analysis says H({a}, {b}) over d = {d} is division; bad control"
        );
        let field = QuadField::new(Int::from(d)).unwrap();
        let alg =
            SCAlgebra::quaternion(&field.from_rational(irat(a)), &field.from_rational(irat(b)));
        let res = zero_divisor(&alg)
            .unwrap_or_else(|e| panic!("split control H({a}, {b}) over d = {d} rejected: {e}"));
        assert!(!res.zero_divisor.is_zero());
        assert!(linalg::det(&alg.regular_rep(&res.zero_divisor)).is_zero());
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 5: PASS (10 division algebras certified with re-verified witnesses, 3 split controls produced zero divisors) in {elapsed:?}"
    );
}

#[test]
fn criterion_6_regular_representation_matches_the_printed_matrices() {
    let start = Instant::now();
    let samples = [
        (irat(-1), irat(-1)),
        (irat(2), irat(3)),
        (irat(-7), irat(5)),
        (rat(1, 2), rat(-3, 4)),
        (irat(-11), irat(13)),
    ];
    for (alpha, beta) in samples {
        let alg = SCAlgebra::quaternion(&alpha, &beta);
        let z = || irat(0);
        let o = || irat(1);
        let expected: [Vec<Vec<Rat>>; 4] = [
            vec![
                vec![o(), z(), z(), z()],
                vec![z(), o(), z(), z()],
                vec![z(), z(), o(), z()],
                vec![z(), z(), z(), o()],
            ],
            vec![
                vec![z(), o(), z(), z()],
                vec![alpha.clone(), z(), z(), z()],
                vec![z(), z(), z(), o()],
                vec![z(), z(), alpha.clone(), z()],
            ],
            vec![
                vec![z(), z(), o(), z()],
                vec![z(), z(), z(), -o()],
                vec![beta.clone(), z(), z(), z()],
                vec![z(), -beta.clone(), z(), z()],
            ],
            vec![
                vec![z(), z(), z(), o()],
                vec![z(), z(), -alpha.clone(), z()],
                vec![z(), beta.clone(), z(), z()],
                vec![-(&alpha * &beta), z(), z(), z()],
            ],
        ];
        for (k, want) in expected.iter().enumerate() {
            assert_eq!(
                &alg.regular_rep(&alg.basis_elem(k)),
                want,
                "matrix of basis element {k} for alpha = {alpha}, beta = {beta}"
            );
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 6: PASS (regular representation matches the four reference matrices on {} parameter pairs) in {elapsed:?}",
        5
    );
}

#[test]
fn criterion_7_embedding_fixtures_for_hamilton_quaternions() {
    let start = Instant::now();
    let h = QuatAlgebra::new(irat(-1), irat(-1)).unwrap();
    match h.embed_sqrt(&Int::from(-1)).unwrap() {
        EmbedOutcome::Sqrt(s) => {
            assert_eq!(s.coords, vec![irat(0), irat(1), irat(0), irat(0)], "sqrt(-1) must be u")
        }
        other => panic!("expected a square root of -1, got {other:?}"),
    }
    match h.embed_sqrt(&Int::from(-2)).unwrap() {
        EmbedOutcome::Sqrt(s) => {
            assert_eq!(s.coords[0], irat(0), "the square root of -2 must be trace-zero");
            assert_eq!(
                h.mul(&s, &s).coords,
                vec![irat(-2), irat(0), irat(0), irat(0)],
                "claimed element does not square to -2"
            );
        }
        other => panic!("expected a square root of -2, got {other:?}"),
    }
    match h.embed_sqrt(&Int::from(-7)).unwrap() {
        EmbedOutcome::NotSplitByField(w) => {
            assert_eq!(w.place, Place::Finite(Int::from(2)), "the obstruction lives at 2");
            let form =
                QuadForm::from_diagonal(&[irat(-1), irat(-1), irat(-1), irat(7)]).unwrap();
            assert!(
                !is_isotropic_local(&diagonalize(&form), &w.place).unwrap(),
                "witness does not re-verify against the embedding form"
            );
        }
        other => panic!("expected a field obstruction for -7, got {other:?}"),
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 7: PASS (sqrt(-1) is u, sqrt(-2) is trace-zero, -7 is obstructed at 2) in {elapsed:?}"
    );
}

/// A representative slice of the library surface, rendered to the JSON
/// document format: factorizations, form solutions, splitting outcomes
/// on fixed and pseudorandom presentations, and conic outcomes.
fn battery() -> String {
    let mut out = String::new();
    let mut emit = |body: Body| {
        out.push_str(&to_json(&Document::new(body)));
        out.push('\n');
    };
    for n in [360i64, -987654321, 97] {
        let n = Int::from(n);
        let f = factor(&n).unwrap();
        emit(Body::Factor(factorization_to_doc(&n, &f)));
    }
    for coeffs in [
        vec![1i64, 1, -2],
        vec![1, 1, 1, 1],
        vec![3, -5, 7],
        vec![2, 3, -1, 5, -7],
        vec![1, 2, 3, 4, 5, 6],
    ] {
        let diag: Vec<Rat> = coeffs.iter().map(|&x| irat(x)).collect();
        let form = QuadForm::from_diagonal(&diag).unwrap();
        let outcome = solve(&form).unwrap();
        emit(Body::QuadformSolve(QuadformSolveDoc {
            problem: form_to_doc(&form),
            outcome: solution_to_doc(&outcome),
        }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0008);
    let mut resamples = 0usize;
    for &d in &[5i64, -7, 13] {
        let field = QuadField::new(Int::from(d)).unwrap();
        let alg = random_presentation(&mut rng, &field, 10, &mut resamples);
        let res = zero_divisor_with_isomorphism(&alg).unwrap();
        emit(Body::Isomorphism(SplitDoc {
            problem: algebra_to_doc(&alg),
            outcome: result_to_outcome_doc(&res),
        }));
    }
    let field = QuadField::new(Int::from(2)).unwrap();
    let ham =
        SCAlgebra::quaternion(&field.from_rational(irat(-1)), &field.from_rational(irat(-1)));
    match zero_divisor(&ham) {
        Err(PipelineError::NotSplit(cert)) => emit(Body::Zerodiv(SplitDoc {
            problem: algebra_to_doc(&ham),
            outcome: certificate_to_outcome_doc(&cert),
        })),
        other => panic!("expected a certificate for Hamilton quaternions over d = 2: {other:?}"),
    }
    for (d, a, b) in [(5i64, 2i64, 3i64), (2, -1, -1), (13, -1, 3)] {
        let field = QuadField::new(Int::from(d)).unwrap();
        let alpha = field.from_rational(irat(a));
        let beta = field.from_rational(irat(b));
        let outcome = match solve_conic_quadfield(&alpha, &beta).unwrap() {
            ConicOutcome::Solution(sol) => ConicExtOutcome::Solution {
                solution: sol.iter().map(ScalarDoc::from_qf).collect(),
            },
            ConicOutcome::NoSolution(cert) => {
                ConicExtOutcome::Certificate { certificate: certificate_to_doc(&cert) }
            }
        };
        emit(Body::ConicExt(ConicExtDoc {
            problem: ConicExtProblem {
                d: format_int(field.d()),
                alpha: ScalarDoc::from_qf(&alpha),
                beta: ScalarDoc::from_qf(&beta),
            },
            outcome,
        }));
    }
    out
}

#[test]
fn criterion_8_the_full_battery_is_deterministic() {
    let start = Instant::now();
    let first = battery();
    let second = battery();
    assert!(!first.is_empty());
    assert_eq!(first, second, "two identical runs must produce byte-identical output");
    let elapsed = start.elapsed();
    println!(
        "criterion 8: PASS (two runs of a {}-byte document battery are byte-identical) in {elapsed:?}",
        first.len()
    );
}
