//! End-to-end splitting over a quadratic field K = Q(√d): given a
//! validated four-dimensional K-algebra isomorphic to M₂(K), find a
//! verified zero divisor and, on request, an explicit isomorphism onto
//! 2×2 matrices. Inputs that are not split produce a locally verified
//! certificate instead. The same machinery solves ternary conic
//! equations αx² + βy² = z² over K.
//!
//! The route: extract a quaternion presentation of the input, find a
//! traceless element l with l² ∈ Q by solving a six-variable rational
//! quadratic form, find an anticommuting l′ with l′² ∈ Q through a
//! four-variable form, pass to the rational quaternion subalgebra
//! spanned by 1, l, l′, ll′, and split that over Q directly or via an
//! embedded √d. Nilpotent elements discovered along the way are already
//! zero divisors and exit early.

use std::fmt;

use num_integer::Integer;
use num_traits::One;

use crate::algebra::{AlgElem, AlgebraError, QuatBasisOutcome, SCAlgebra, DIM};
use crate::arith::square_divisor_root_budgeted;
use crate::lattice::{congruence_kernel, lll_reduce_default, IntLattice};
use crate::linalg::{self, FieldElem};
use crate::quadfield::{QFElem, QuadField, QuadFieldError};
use crate::quadform::{solve, AnisotropyWitness, QuadForm, QuadFormError, SolveOutcome};
use crate::quaternion::{EmbedOutcome, QuatAlgebra, QuatError, Quaternion, SplitOutcome};
use crate::rat::{irat, primitive_integer_vector, Int, Rat};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("the algebra is not split: stage-{} witness at {}", .0.stage, .0.witness.place)]
    NotSplit(NotSplitCertificate),
    #[error("1, l, l′, ll′ are linearly dependent")]
    IndependenceFailure,
    #[error("the left ideal has dimension {dim}, expected 2")]
    BadIdealDimension { dim: usize },
    #[error("internal invariant breached: {0}")]
    InternalInconsistency(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Field(#[from] QuadFieldError),
    #[error(transparent)]
    Form(#[from] QuadFormError),
    #[error(transparent)]
    Quaternion(#[from] QuatError),
}

/// Which shortcut or main route produced the zero divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    EarlyNilpotent,
    RationalSubalgebraSplit,
    SqrtEmbedding,
    X4ZeroRemark,
}

impl Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Branch::EarlyNilpotent => "early-nilpotent",
            Branch::RationalSubalgebraSplit => "rational-subalgebra-split",
            Branch::SqrtEmbedding => "sqrt-embedding",
            Branch::X4ZeroRemark => "x4-zero-remark",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A verified zero divisor together with the branch that produced it and
/// an optional explicit isomorphism (images of the four input basis
/// elements as 2×2 matrices over K).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineResult {
    pub zero_divisor: AlgElem<QFElem>,
    pub branch: Branch,
    pub isomorphism: Option<Isomorphism>,
}

/// Images of the four input basis elements under an isomorphism onto
/// M₂(K): `images[k][i][j]` is the (i, j) entry of the image of the k-th
/// basis element. The map is unital and multiplicative on all pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub images: Vec<Vec<Vec<QFElem>>>,
}

/// Proof that the input algebra is a division algebra: the stage that
/// failed (2 or 4), the rational quadratic form that would otherwise
/// have produced the next element of the construction, and a locally
/// verified anisotropy witness for that form. The certificate carries
/// the form itself so a consumer can recheck the witness with nothing
/// but the certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotSplitCertificate {
    pub stage: u8,
    pub form: QuadForm,
    pub witness: AnisotropyWitness,
}

/// The six-variable rational quadratic form whose zeros give traceless
/// elements l = (s₁+s₂√d)w + (s₃+s₄√d)w′ + (s₅+s₆√d)ww′ with l² ∈ Q,
/// where w² = r₁+t₁√d and w′² = r₂+t₂√d. The Gram matrix is block
/// diagonal with three 2×2 blocks, one per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracelessSquareForm {
    pub r1: Rat,
    pub t1: Rat,
    pub r2: Rat,
    pub t2: Rat,
    pub d: Rat,
    pub form: QuadForm,
}

impl TracelessSquareForm {
    pub fn new(
        d: &Int,
        r1: Rat,
        t1: Rat,
        r2: Rat,
        t2: Rat,
    ) -> Result<TracelessSquareForm, QuadFormError> {
        let d = Rat::from(d.clone());
        let p = &r1 * &t2 + &r2 * &t1;
        let q = &r1 * &r2 + &t1 * &t2 * &d;
        let blocks = [(t1.clone(), r1.clone()), (t2.clone(), r2.clone()), (-p, -q)];
        let mut gram = vec![vec![irat(0); 6]; 6];
        for (k, (t, r)) in blocks.iter().enumerate() {
            gram[2 * k][2 * k] = t.clone();
            gram[2 * k][2 * k + 1] = r.clone();
            gram[2 * k + 1][2 * k] = r.clone();
            gram[2 * k + 1][2 * k + 1] = t * &d;
        }
        let form = QuadForm::new(gram)?;
        Ok(TracelessSquareForm { r1, t1, r2, t2, d, form })
    }

    /// Determinants of the three 2×2 blocks: tᵢ²d − rᵢ² for the first
    /// two; their product is the negation of the third.
    pub fn block_determinants(&self) -> [Rat; 3] {
        let det = |t: &Rat, r: &Rat| t * t * &self.d - r * r;
        let p = &self.r1 * &self.t2 + &self.r2 * &self.t1;
        let q = &self.r1 * &self.r2 + &self.t1 * &self.t2 * &self.d;
        [det(&self.t1, &self.r1), det(&self.t2, &self.r2), det(&-p, &-q)]
    }
}

/// The four-variable rational quadratic form whose zeros give elements
/// l′ = (x+y√d)v₀ + (z+w√d)lv₀ with l′² ∈ Q, given l² = a ∈ Q and
/// v₀² = b + c√d with c ≠ 0; f = b/c. The triangular substitution
/// n₁ = x+fy, n₂ = y, n₃ = z+fw, n₄ = w diagonalizes it to
/// (1, d−f², −a, −a(d−f²)), which is exactly the norm form of the
/// rational quaternion algebra H(f²−d, a).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnticommutantForm {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub f: Rat,
    pub d: Rat,
    pub form: QuadForm,
}

impl AnticommutantForm {
    pub fn new(d: &Int, a: Rat, b: Rat, c: Rat) -> Result<AnticommutantForm, PipelineError> {
        if c.is_zero() {
            return Err(PipelineError::InternalInconsistency(
                "the anticommutant form needs c ≠ 0",
            ));
        }
        if a.is_zero() {
            return Err(PipelineError::InternalInconsistency(
                "the anticommutant form needs a ≠ 0",
            ));
        }
        let d = Rat::from(d.clone());
        let f = &b / &c;
        let gram = vec![
            vec![irat(1), f.clone(), irat(0), irat(0)],
            vec![f.clone(), d.clone(), irat(0), irat(0)],
            vec![irat(0), irat(0), -&a, -(&a * &f)],
            vec![irat(0), irat(0), -(&a * &f), -(&a * &d)],
        ];
        let form = QuadForm::new(gram)?;
        Ok(AnticommutantForm { a, b, c, f, d, form })
    }

    /// Diagonal coefficients after the triangular substitution.
    pub fn diagonal_coefficients(&self) -> [Rat; 4] {
        let e = &self.d - &self.f * &self.f;
        [irat(1), e.clone(), -&self.a, -(&self.a * &e)]
    }

    /// The rational quaternion algebra whose norm form coincides with the
    /// diagonalized form, so a zero divisor in it is a zero of the form.
    pub fn companion_quaternion(&self) -> Result<QuatAlgebra<Rat>, QuatError> {
        QuatAlgebra::new(&self.f * &self.f - &self.d, self.a.clone())
    }

    /// Pull a zero (n₁,n₂,n₃,n₄) of the diagonalized form back to
    /// coordinates (x,y,z,w) of this form.
    pub fn pullback(&self, n: &[Rat; 4]) -> [Rat; 4] {
        [&n[0] - &self.f * &n[1], n[1].clone(), &n[2] - &self.f * &n[3], n[3].clone()]
    }
}

/// Outcome of the first stage: a traceless element with nonzero rational
/// square, or a nilpotent found on the way (already a zero divisor).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step1Outcome {
    Element { l: AlgElem<QFElem>, square: Rat },
    Nilpotent(AlgElem<QFElem>),
}

/// Outcome of the second stage: an element anticommuting with l whose
/// square is rational and nonzero, a nilpotent, or a certificate that
/// the algebra is division.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step2Outcome {
    Element { lprime: AlgElem<QFElem>, square: Rat },
    Nilpotent(AlgElem<QFElem>),
    NotSplit(NotSplitCertificate),
}

/// The rational quaternion subalgebra spanned by 1, l, l′, ll′ inside
/// the input algebra, with l² = a and l′² = b̂ rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSubalgebra {
    pub quat: QuatAlgebra<Rat>,
    pub basis: Vec<AlgElem<QFElem>>,
}

impl RationalSubalgebra {
    /// The element q₁·1 + q₂·l + q₃·l′ + q₄·ll′ of the ambient algebra.
    pub fn embed(&self, field: &QuadField, q: &Quaternion<Rat>) -> AlgElem<QFElem> {
        let mut acc = self.basis[0].scale(&field.from_rational(q.coords[0].clone()));
        for k in 1..DIM {
            acc = acc.add(&self.basis[k].scale(&field.from_rational(q.coords[k].clone())));
        }
        acc
    }
}

fn base_field(alg: &SCAlgebra<QFElem>) -> QuadField {
    alg.one().coords[0].field.clone()
}

/// Scales an element to primitive integer coordinates: the eight
/// rational components are cleared of denominators, divided by their
/// content, and sign-normalized so the first nonzero one is positive.
fn canonical_elem(field: &QuadField, x: &AlgElem<QFElem>) -> AlgElem<QFElem> {
    let flat: Vec<Rat> = x.coords.iter().flat_map(|c| [c.a.clone(), c.b.clone()]).collect();
    let ints = primitive_integer_vector(&flat);
    let coords = ints
        .chunks(2)
        .map(|pair| field.elem(Rat::from(pair[0].clone()), Rat::from(pair[1].clone())))
        .collect();
    AlgElem { coords }
}

/// Exact basis of the saturation (plane ∩ Z⁸) of the K-plane through two
/// independent elements, viewed as a 4-dimensional Q-subspace of the
/// rational coordinate space. Integer combinations of the given spanning
/// vectors only reach a finite-index sublattice of the saturation, and
/// the index routinely hides exactly the short integral elements the
/// scans are after, so the saturation is computed exactly: in reduced
/// echelon form an element of the subspace is determined by its pivot
/// coordinates c, and it is integral precisely when c is integral and
/// the free-column block maps c into Z, a congruence A·c ≡ 0 (mod q)
/// after clearing the block's denominator q. The congruence lattice
/// comes out of an extended-gcd elimination whose cost scales with the
/// bit length of q rather than with any lattice geometry, so arbitrarily
/// polluted spanning pairs stay cheap to saturate.
fn saturated_plane_rows(
    field: &QuadField,
    plane: &[AlgElem<QFElem>; 2],
) -> Option<Vec<Vec<Int>>> {
    let sqrt_d = field.sqrt_d();
    let mut m: Vec<Vec<Rat>> = plane
        .iter()
        .flat_map(|g| [g.clone(), g.scale(&sqrt_d)])
        .map(|h| h.coords.iter().flat_map(|c| [c.a.clone(), c.b.clone()]).collect())
        .collect();
    let pivots = linalg::rref(&mut m);
    if pivots.len() != 4 {
        return None;
    }
    let free: Vec<usize> = (0..8).filter(|c| !pivots.contains(c)).collect();
    let mut q = Int::one();
    for row in &m {
        for &f in &free {
            q = q.lcm(row[f].denom());
        }
    }
    let combos: Vec<Vec<Int>> = if q.is_one() {
        (0..4)
            .map(|i| {
                let mut c = vec![Int::from(0); 4];
                c[i] = Int::one();
                c
            })
            .collect()
    } else {
        let qr = Rat::from(q.clone());
        // Only the residue of the free block matters for the congruence.
        let a: Vec<Vec<Int>> = m
            .iter()
            .map(|row| {
                free.iter().map(|&f| (&row[f] * &qr).to_integer().mod_floor(&q)).collect()
            })
            .collect();
        congruence_kernel(&a, &q)
    };
    let sat = combos
        .iter()
        .map(|c| {
            (0..8)
                .map(|col| {
                    let mut acc = irat(0);
                    for (ci, row) in c.iter().zip(&m) {
                        acc += &row[col] * Rat::from(ci.clone());
                    }
                    acc.to_integer()
                })
                .collect()
        })
        .collect();
    Some(sat)
}

/// Short integral spanning elements for the plane through two
/// K-independent elements, shortest first: the saturated integer lattice
/// of the plane is LLL-reduced and its rows mapped back to elements.
fn short_plane_elements(
    field: &QuadField,
    plane: &[AlgElem<QFElem>; 2],
) -> Vec<AlgElem<QFElem>> {
    let rebuild = |row: &[Int]| {
        let primitive = primitive_integer_vector(
            &row.iter().map(|x| Rat::from(x.clone())).collect::<Vec<_>>(),
        );
        let coords = primitive
            .chunks(2)
            .map(|pair| field.elem(Rat::from(pair[0].clone()), Rat::from(pair[1].clone())))
            .collect();
        AlgElem { coords }
    };
    let fallback = || plane.iter().map(|g| canonical_elem(field, g)).collect();
    let Some(sat) = saturated_plane_rows(field, plane) else {
        return fallback();
    };
    match lll_reduce_default(&IntLattice::new(sat)) {
        Ok(reduction) => reduction.lattice.basis.iter().map(|r| rebuild(r)).collect(),
        Err(_) => fallback(),
    }
}

/// Pool of rho iterations granted to each top-level square-stripping
/// task; a pooled allowance keeps whole candidate scans bounded.
const PLANE_RHO_STEPS: u64 = 200_000;

/// A positive rational ρ such that x/ρ² keeps the square class of x
/// while shedding the square content that bounded factoring certifies:
/// writing x = (r + t√d)/m over the least common denominator, ρ = s/m
/// where s² is the certified largest square divisor of gcd(r, t)·m.
fn square_content_scale(x: &QFElem, steps: &mut u64) -> Rat {
    let m = x.a.denom().lcm(x.b.denom());
    let rn = x.a.numer() * (&m / x.a.denom());
    let tn = x.b.numer() * (&m / x.b.denom());
    let g = rn.gcd(&tn);
    if num_traits::Zero::is_zero(&g) {
        return Rat::one();
    }
    let s = square_divisor_root_budgeted(&(&g * &m), steps);
    Rat::new(s, m)
}

/// Scales x to x/ρ so that its square sq/ρ² sheds easy square content.
/// The squares of the constructed elements are what the form solvers
/// later factor; raw eliminations inflate them by huge square factors,
/// and dividing those out keeps every downstream coefficient near its
/// intrinsic size. The scaled pair (x/ρ, sq/ρ²) is returned.
fn strip_square(
    field: &QuadField,
    x: &AlgElem<QFElem>,
    sq: &QFElem,
    steps: &mut u64,
) -> (AlgElem<QFElem>, QFElem) {
    let rho = square_content_scale(sq, steps);
    if rho.is_one() {
        return (x.clone(), sq.clone());
    }
    let inv = rho.recip();
    let scaled = x.scale(&field.from_rational(inv.clone()));
    let sq2 = field.elem(&sq.a * &inv * &inv, &sq.b * &inv * &inv);
    // Clearing a denominator whose square content is only partial can
    // inflate the numerators past the original height; keep the smaller.
    if scalar_height_bits(&sq2) >= scalar_height_bits(sq) {
        return (x.clone(), sq.clone());
    }
    (scaled, sq2)
}

/// The variant of [`strip_square`] for an element with rational square.
fn strip_square_rational(
    field: &QuadField,
    x: &AlgElem<QFElem>,
    sq: &Rat,
    steps: &mut u64,
) -> (AlgElem<QFElem>, Rat) {
    let (scaled, sq2) = strip_square(field, x, &field.from_rational(sq.clone()), steps);
    (scaled, sq2.a)
}

/// Total bit size of a field scalar, the score for plane candidates.
fn scalar_height_bits(x: &QFElem) -> u64 {
    let rat_bits = |r: &Rat| r.numer().bits() + r.denom().bits();
    rat_bits(&x.a) + rat_bits(&x.b)
}

/// Outcome of scanning a plane whose elements all square to scalars.
enum PlanePick {
    /// A candidate squared to zero: an immediate zero divisor.
    Nilpotent(AlgElem<QFElem>),
    /// The candidate whose stripped square is smallest, with that square.
    Pick { elem: AlgElem<QFElem>, square: QFElem },
}

/// Chooses from the plane spanned by two K-independent elements the
/// candidate whose square, after shedding certified square content, is
/// smallest. Candidates are the primitive {-2, ..., 2} coefficient
/// vectors over the LLL-reduced saturated lattice rows, up to sign. An
/// arbitrary short vector tends to have a square whose huge coordinates
/// share no useful content, while the right combination recovers an
/// element that is a rational multiple of something intrinsically small;
/// the stripped height tells the two apart. Squares come from the
/// plane's symmetrized product table, so scoring a candidate costs a few
/// scalar operations, and stripping runs lazily in ascending order of
/// raw height, stopping once no later candidate can beat the best
/// stripped height. Ties keep the earliest candidate, and the rho
/// allowance for stripping is pooled across the scan, so the search is
/// deterministic and bounded.
fn best_plane_element(
    alg: &SCAlgebra<QFElem>,
    field: &QuadField,
    plane: &[AlgElem<QFElem>; 2],
) -> Result<PlanePick, PipelineError> {
    // Dividing a generator by a rational leaves the plane unchanged, so
    // each spanning element sheds the square content of its own square
    // before any lattice work; that alone shrinks the saturation numbers.
    let mut steps = PLANE_RHO_STEPS;
    let shrink = |g: &AlgElem<QFElem>, steps: &mut u64| {
        let g = canonical_elem(field, g);
        match alg.scalar_of(&alg.multiply(&g, &g)) {
            Some(sq) => strip_square(field, &g, &sq, steps).0,
            None => g,
        }
    };
    let plane = [shrink(&plane[0], &mut steps), shrink(&plane[1], &mut steps)];
    let rows = short_plane_elements(field, &plane);
    let k = rows.len();
    let non_scalar = || {
        PipelineError::InternalInconsistency("a plane element has a non-scalar square")
    };
    let mut diag = Vec::with_capacity(k);
    for row in &rows {
        diag.push(alg.scalar_of(&alg.multiply(row, row)).ok_or_else(non_scalar)?);
    }
    let mut sym = vec![vec![field.from_rational(irat(0)); k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let p = alg
                .multiply(&rows[i], &rows[j])
                .add(&alg.multiply(&rows[j], &rows[i]));
            sym[i][j] = alg.scalar_of(&p).ok_or_else(non_scalar)?;
        }
    }
    let decode = |code: usize| {
        let mut digits = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            digits.push((c % 5) as i64 - 2);
            c /= 5;
        }
        digits
    };
    let build = |digits: &[i64]| {
        let mut y: Option<AlgElem<QFElem>> = None;
        for (row, &a) in rows.iter().zip(digits) {
            if a == 0 {
                continue;
            }
            let term = row.scale(&field.from_rational(irat(a)));
            y = Some(match y {
                Some(acc) => acc.add(&term),
                None => term,
            });
        }
        y.expect("a nonzero coefficient vector yields a nonzero element")
    };
    let mut candidates: Vec<(u64, usize, QFElem)> = Vec::new();
    for code in 0..5usize.pow(k as u32) {
        let digits = decode(code);
        // y and -y square alike, so only vectors whose first nonzero
        // coefficient is positive are scored, and imprimitive vectors
        // only rescale a primitive candidate's square upward.
        match digits.iter().find(|&&a| a != 0) {
            Some(&a) if a > 0 => {}
            _ => continue,
        }
        if digits.iter().fold(0i64, |g, &a| g.gcd(&a)) != 1 {
            continue;
        }
        let mut la = irat(0);
        let mut lb = irat(0);
        for i in 0..k {
            if digits[i] == 0 {
                continue;
            }
            let cii = irat(digits[i] * digits[i]);
            la += &diag[i].a * &cii;
            lb += &diag[i].b * &cii;
            for j in (i + 1)..k {
                if digits[j] == 0 {
                    continue;
                }
                let cij = irat(digits[i] * digits[j]);
                la += &sym[i][j].a * &cij;
                lb += &sym[i][j].b * &cij;
            }
        }
        let lambda = field.elem(la, lb);
        if lambda.is_zero() {
            return Ok(PlanePick::Nilpotent(build(&digits)));
        }
        candidates.push((scalar_height_bits(&lambda), code, lambda));
    }
    candidates.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    let mut steps = PLANE_RHO_STEPS;
    let mut best: Option<(u64, AlgElem<QFElem>, QFElem)> = None;
    for (h, code, lambda) in candidates {
        if best.as_ref().is_some_and(|(bh, _, _)| *bh <= h) {
            break;
        }
        let y = build(&decode(code));
        debug_assert!(alg.scalar_of(&alg.multiply(&y, &y)).as_ref() == Some(&lambda));
        let (y, lambda) = strip_square(field, &y, &lambda, &mut steps);
        let h = scalar_height_bits(&lambda);
        if best.as_ref().map_or(true, |(bh, _, _)| h < *bh) {
            best = Some((h, y, lambda));
        }
    }
    match best {
        Some((_, elem, square)) => Ok(PlanePick::Pick { elem, square }),
        None => Err(PipelineError::InternalInconsistency(
            "a plane scan found no nonzero candidate",
        )),
    }
}

/// Canonicalizes, then confirms the element is a genuine zero divisor:
/// nonzero with singular regular representation.
fn verified(
    alg: &SCAlgebra<QFElem>,
    x: &AlgElem<QFElem>,
    branch: Branch,
) -> Result<PipelineResult, PipelineError> {
    let x = canonical_elem(&base_field(alg), x);
    if x.is_zero() {
        return Err(PipelineError::InternalInconsistency("produced the zero element"));
    }
    if !linalg::det(&alg.regular_rep(&x)).is_zero() {
        return Err(PipelineError::InternalInconsistency("the produced element is invertible"));
    }
    Ok(PipelineResult { zero_divisor: x, branch, isomorphism: None })
}

/// The scalar λ with x² = λ·1, required to lie in Q.
fn rational_square(
    alg: &SCAlgebra<QFElem>,
    x: &AlgElem<QFElem>,
) -> Result<Rat, PipelineError> {
    let square = alg.multiply(x, x);
    let Some(lambda) = alg.scalar_of(&square) else {
        return Err(PipelineError::InternalInconsistency("a constructed square is not scalar"));
    };
    if !lambda.is_rational() {
        return Err(PipelineError::InternalInconsistency("a constructed square is not rational"));
    }
    Ok(lambda.a)
}

/// Finds a nonzero traceless l with l² ∈ Q·1, or a nilpotent zero
/// divisor discovered on the way.
///
/// After extracting a quaternion presentation w, w′ with w² = r₁+t₁√d
/// and w′² = r₂+t₂√d, the special cases are handled in order: t₁ = 0
/// gives l = w, t₂ = 0 gives l = w′, and r₁t₂+r₂t₁ = 0 gives l = ww′
/// (whose square −w²w′² is then rational). Otherwise the six-variable
/// form is solved; it is indefinite and nondegenerate in this branch, so
/// a zero always exists.
pub fn step1_traceless_rational_square(
    alg: &SCAlgebra<QFElem>,
) -> Result<Step1Outcome, PipelineError> {
    let basis = match alg.quaternion_basis()? {
        QuatBasisOutcome::EarlyZeroDivisor(x) => return Ok(Step1Outcome::Nilpotent(x)),
        QuatBasisOutcome::Basis(b) => b,
    };
    let field = base_field(alg);

    // The presentation is free up to rational scaling of each generator
    // and up to replacing w′ within the anticommutant plane span{w′, ww′},
    // where every element squares to a scalar. Downstream factoring cost
    // tracks the size of the two squares, so w sheds the square content
    // of its square and w′ is swapped for the plane candidate whose
    // stripped square is smallest. A plane element squaring to zero is a
    // nilpotent zero divisor and exits immediately.
    let mut steps = PLANE_RHO_STEPS;
    let (u, alpha) = strip_square(&field, &basis.u, &basis.alpha, &mut steps);
    let plane = [basis.v.clone(), alg.multiply(&u, &basis.v)];
    let (v, beta) = match best_plane_element(alg, &field, &plane)? {
        PlanePick::Nilpotent(y) => return Ok(Step1Outcome::Nilpotent(y)),
        PlanePick::Pick { elem, square } => (elem, square),
    };

    let (r1, t1) = (alpha.a.clone(), alpha.b.clone());
    let (r2, t2) = (beta.a.clone(), beta.b.clone());

    let l = if t1.is_zero() {
        u.clone()
    } else if t2.is_zero() {
        v.clone()
    } else if (&r1 * &t2 + &r2 * &t1).is_zero() {
        alg.multiply(&u, &v)
    } else {
        let data = TracelessSquareForm::new(field.d(), r1, t1, r2, t2)?;
        let sol = match solve(&data.form)? {
            SolveOutcome::Isotropic(sol) => sol,
            SolveOutcome::Anisotropic(_) => {
                return Err(PipelineError::InternalInconsistency(
                    "the six-variable form is indefinite yet came back anisotropic",
                ));
            }
        };
        let s: Vec<Rat> = sol.coords.iter().map(|c| Rat::from(c.clone())).collect();
        let ww = alg.multiply(&u, &v);
        let parts = [
            u.scale(&field.elem(s[0].clone(), s[1].clone())),
            v.scale(&field.elem(s[2].clone(), s[3].clone())),
            ww.scale(&field.elem(s[4].clone(), s[5].clone())),
        ];
        parts[0].add(&parts[1]).add(&parts[2])
    };

    if l.is_zero() {
        return Err(PipelineError::InternalInconsistency("stage 1 produced zero"));
    }
    debug_assert!(alg.reduced_trace(&l).is_zero());
    let square = rational_square(alg, &l)?;
    if square.is_zero() {
        return Ok(Step1Outcome::Nilpotent(l));
    }
    let mut steps = PLANE_RHO_STEPS;
    let (l, square) = strip_square_rational(&field, &l, &square, &mut steps);
    Ok(Step1Outcome::Element { l, square })
}

/// Finds a nonzero l′ with ll′ + l′l = 0 and l′² ∈ Q·1, given l from
/// stage 1 with l² = a ≠ 0.
///
/// The anticommutant of l meets the trace-zero hyperplane in a plane
/// spanned by v₀ and lv₀. If v₀² is already rational it serves as l′.
/// Otherwise v₀² = b + c√d with c ≠ 0 and l′ is sought as a combination
/// (x+y√d)v₀ + (z+w√d)lv₀; the rationality constraint on l′² is the
/// four-variable form above, solved through its companion quaternion
/// algebra H(f²−d, a) over Q. A division witness there certifies that
/// the input algebra is not split.
pub fn step2_anticommutant(
    alg: &SCAlgebra<QFElem>,
    l: &AlgElem<QFElem>,
    a: &Rat,
) -> Result<Step2Outcome, PipelineError> {
    let field = base_field(alg);
    let kernel = alg.anticommutant_basis(l);
    if kernel.len() != 2 {
        return Err(PipelineError::InternalInconsistency(
            "the anticommutant of l is not 2-dimensional",
        ));
    }
    // Same plane freedom as in stage 1: any nonzero element of the
    // anticommutant plane can serve as v₀, and the candidate with the
    // smallest stripped square keeps the companion algebra's invariants
    // small. An element squaring to zero is an immediate exit, and one
    // squaring to a rational already is the l′ sought.
    let plane = [kernel[0].clone(), kernel[1].clone()];
    let (v0, lambda) = match best_plane_element(alg, &field, &plane)? {
        PlanePick::Nilpotent(y) => return Ok(Step2Outcome::Nilpotent(y)),
        PlanePick::Pick { elem, square } => (elem, square),
    };
    if lambda.is_rational() {
        return Ok(Step2Outcome::Element { lprime: v0, square: lambda.a });
    }

    let data = AnticommutantForm::new(field.d(), a.clone(), lambda.a, lambda.b)?;
    let companion = data.companion_quaternion()?;
    let n = match companion.split_rational()? {
        SplitOutcome::Division(witness) => {
            let form = QuadForm::from_diagonal(&[
                companion.alpha().clone(),
                companion.beta().clone(),
                -irat(1),
            ])?;
            return Ok(Step2Outcome::NotSplit(NotSplitCertificate { stage: 2, form, witness }));
        }
        SplitOutcome::ZeroDivisor(n) => n,
    };
    let [x, y, z, w] = data.pullback(&[
        n.coords[0].clone(),
        n.coords[1].clone(),
        n.coords[2].clone(),
        n.coords[3].clone(),
    ]);
    let lv0 = alg.multiply(l, &v0);
    let lprime = v0.scale(&field.elem(x, y)).add(&lv0.scale(&field.elem(z, w)));
    if lprime.is_zero() {
        return Err(PipelineError::InternalInconsistency("stage 2 produced zero"));
    }
    let square = rational_square(alg, &lprime)?;
    if square.is_zero() {
        return Ok(Step2Outcome::Nilpotent(lprime));
    }
    let mut steps = PLANE_RHO_STEPS;
    let (lprime, square) = strip_square_rational(&field, &lprime, &square, &mut steps);
    Ok(Step2Outcome::Element { lprime, square })
}

/// The rational quaternion subalgebra on the basis 1, l, l′, ll′, with
/// multiplication table H(a, b̂) for a = l², b̂ = l′².
pub fn build_rational_subalgebra(
    alg: &SCAlgebra<QFElem>,
    l: &AlgElem<QFElem>,
    lprime: &AlgElem<QFElem>,
) -> Result<RationalSubalgebra, PipelineError> {
    let a = rational_square(alg, l)?;
    let bhat = rational_square(alg, lprime)?;
    if a.is_zero() || bhat.is_zero() {
        return Err(PipelineError::InternalInconsistency(
            "subalgebra generators must have nonzero squares",
        ));
    }
    let basis =
        vec![alg.one(), l.clone(), lprime.clone(), alg.multiply(l, lprime)];
    let columns: Vec<Vec<QFElem>> = (0..DIM)
        .map(|i| (0..DIM).map(|j| basis[j].coords[i].clone()).collect())
        .collect();
    if linalg::det(&columns).is_zero() {
        return Err(PipelineError::IndependenceFailure);
    }
    let quat = QuatAlgebra::new(a, bhat)?;
    Ok(RationalSubalgebra { quat, basis })
}

/// Splits the ambient algebra through its rational subalgebra H: a zero
/// divisor of H maps straight into the algebra; otherwise √d is embedded
/// into H as an element s, and s − √d·1 is the zero divisor. A division
/// algebra is detected when √d does not embed either.
pub fn finish(
    alg: &SCAlgebra<QFElem>,
    sub: &RationalSubalgebra,
) -> Result<PipelineResult, PipelineError> {
    let field = base_field(alg);
    match sub.quat.split_rational()? {
        SplitOutcome::ZeroDivisor(s) => {
            verified(alg, &sub.embed(&field, &s), Branch::RationalSubalgebraSplit)
        }
        SplitOutcome::Division(_) => match sub.quat.embed_sqrt(field.d())? {
            EmbedOutcome::Sqrt(s) => {
                let root = sub.embed(&field, &s);
                let x = root.sub(&alg.one().scale(&field.sqrt_d()));
                verified(alg, &x, Branch::SqrtEmbedding)
            }
            EmbedOutcome::ZeroDivisorInstead(s) => {
                verified(alg, &sub.embed(&field, &s), Branch::X4ZeroRemark)
            }
            EmbedOutcome::NotSplitByField(witness) => {
                let form = QuadForm::from_diagonal(&[
                    sub.quat.alpha().clone(),
                    sub.quat.beta().clone(),
                    -(sub.quat.alpha() * sub.quat.beta()),
                    -Rat::from(field.d().clone()),
                ])?;
                Err(PipelineError::NotSplit(NotSplitCertificate { stage: 4, form, witness }))
            }
        },
    }
}

/// Finds a verified zero divisor in a four-dimensional K-algebra
/// isomorphic to M₂(K), or a certificate that none exists. The returned
/// element is nonzero, has singular regular representation, and is
/// scaled to primitive integer coordinates.
pub fn zero_divisor(alg: &SCAlgebra<QFElem>) -> Result<PipelineResult, PipelineError> {
    let l = match step1_traceless_rational_square(alg)? {
        Step1Outcome::Nilpotent(x) => return verified(alg, &x, Branch::EarlyNilpotent),
        Step1Outcome::Element { l, square } => (l, square),
    };
    let lprime = match step2_anticommutant(alg, &l.0, &l.1)? {
        Step2Outcome::Nilpotent(x) => return verified(alg, &x, Branch::EarlyNilpotent),
        Step2Outcome::NotSplit(cert) => return Err(PipelineError::NotSplit(cert)),
        Step2Outcome::Element { lprime, .. } => lprime,
    };
    let sub = build_rational_subalgebra(alg, &l.0, &lprime)?;
    finish(alg, &sub)
}

/// [`zero_divisor`] followed by [`explicit_isomorphism`] on its output.
pub fn zero_divisor_with_isomorphism(
    alg: &SCAlgebra<QFElem>,
) -> Result<PipelineResult, PipelineError> {
    let mut result = zero_divisor(alg)?;
    result.isomorphism = Some(explicit_isomorphism(alg, &result.zero_divisor)?);
    Ok(result)
}

/// Turns a zero divisor r into an explicit isomorphism onto M₂(K): the
/// left ideal generated by r is two-dimensional, and left multiplication
/// on a reduced basis of it represents each basis element of the algebra
/// as a 2×2 matrix. The output is checked to be unital and
/// multiplicative on all 16 basis pairs before it is returned.
pub fn explicit_isomorphism(
    alg: &SCAlgebra<QFElem>,
    r: &AlgElem<QFElem>,
) -> Result<Isomorphism, PipelineError> {
    let mut rows: Vec<Vec<QFElem>> =
        (0..DIM).map(|i| alg.multiply(&alg.basis_elem(i), r).coords).collect();
    let pivots = linalg::rref(&mut rows);
    if pivots.len() != 2 {
        return Err(PipelineError::BadIdealDimension { dim: pivots.len() });
    }
    let ideal_basis = [
        AlgElem { coords: rows[0].clone() },
        AlgElem { coords: rows[1].clone() },
    ];

    let mut images: Vec<Vec<Vec<QFElem>>> = Vec::with_capacity(DIM);
    for k in 0..DIM {
        let ak = alg.basis_elem(k);
        let mut mat = vec![vec![base_field(alg).zero(); 2]; 2];
        for (j, e) in ideal_basis.iter().enumerate() {
            let product = alg.multiply(&ak, e);
            // The reduced basis has unit pivots with zeros above and
            // below, so coordinates in it are read off at the pivots.
            let c = [product.coords[pivots[0]].clone(), product.coords[pivots[1]].clone()];
            let recombined = ideal_basis[0].scale(&c[0]).add(&ideal_basis[1].scale(&c[1]));
            if recombined.coords != product.coords {
                return Err(PipelineError::InternalInconsistency(
                    "left multiplication does not preserve the ideal",
                ));
            }
            mat[0][j] = c[0].clone();
            mat[1][j] = c[1].clone();
        }
        images.push(mat);
    }

    let iso = Isomorphism { images };
    check_isomorphism(alg, &iso)?;
    Ok(iso)
}

/// Checks that candidate images define a unital homomorphism: the image
/// of 1 is the identity matrix and the image of every product of basis
/// elements (all 16 pairs) equals the product of the images.
pub fn check_isomorphism(
    alg: &SCAlgebra<QFElem>,
    iso: &Isomorphism,
) -> Result<(), PipelineError> {
    let images = &iso.images;
    if images.len() != DIM
        || images.iter().any(|m| m.len() != 2 || m.iter().any(|row| row.len() != 2))
    {
        return Err(PipelineError::InternalInconsistency(
            "the images are not four 2-by-2 matrices",
        ));
    }
    let field = base_field(alg);
    let identity = linalg::identity_like(&field.one(), 2);
    let mut phi_one = vec![vec![field.zero(); 2]; 2];
    let one = alg.one();
    for k in 0..DIM {
        phi_one = mat_sum(&phi_one, &mat_scale(&images[k], &one.coords[k]));
    }
    if phi_one != identity {
        return Err(PipelineError::InternalInconsistency("the image of 1 is not the identity"));
    }
    for i in 0..DIM {
        for j in 0..DIM {
            let lhs = linalg::mat_mul(&images[i], &images[j]);
            let mut rhs = vec![vec![field.zero(); 2]; 2];
            for k in 0..DIM {
                rhs = mat_sum(&rhs, &mat_scale(&images[k], &alg.gamma()[i][j][k]));
            }
            if lhs != rhs {
                return Err(PipelineError::InternalInconsistency(
                    "the images are not multiplicative",
                ));
            }
        }
    }
    Ok(())
}

fn mat_scale(m: &[Vec<QFElem>], c: &QFElem) -> Vec<Vec<QFElem>> {
    m.iter().map(|row| row.iter().map(|e| FieldElem::mul(e, c)).collect()).collect()
}

fn mat_sum(a: &[Vec<QFElem>], b: &[Vec<QFElem>]) -> Vec<Vec<QFElem>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| FieldElem::add(x, y)).collect())
        .collect()
}

/// Outcome of the conic solver over K: a nonzero triple with
/// αx² + βy² = z², or a certificate that none exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConicOutcome {
    Solution(Vec<QFElem>),
    NoSolution(NotSplitCertificate),
}

/// Solves αx² + βy² = z² over K = Q(√d) by finding a zero divisor in the
/// quaternion algebra H_K(α, β): a norm-zero element converts to a conic
/// point by a two-square composition identity, and a non-split
/// certificate means the conic has no rational point over K.
pub fn solve_conic_quadfield(
    alpha: &QFElem,
    beta: &QFElem,
) -> Result<ConicOutcome, PipelineError> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(PipelineError::Quaternion(QuatError::ZeroStructureConstant));
    }
    if let Some(rho) = alpha.sqrt() {
        return Ok(ConicOutcome::Solution(vec![alpha.field.one(), alpha.field.zero(), rho]));
    }
    let alg = SCAlgebra::quaternion(alpha, beta);
    let result = match zero_divisor(&alg) {
        Ok(result) => result,
        Err(PipelineError::NotSplit(cert)) => return Ok(ConicOutcome::NoSolution(cert)),
        Err(other) => return Err(other),
    };
    // The zero divisor x₁ + x₂u + x₃v + x₄uv has norm zero, i.e.
    // x₁² − αx₂² = β(x₃² − αx₄²). Multiplying both sides by the right
    // factor and composing the two-square products on the left yields
    // the conic point below; when that factor vanishes, α is already a
    // square ρ² and (1, 0, ρ) works.
    let [p, q, r, s] = [
        &result.zero_divisor.coords[0],
        &result.zero_divisor.coords[1],
        &result.zero_divisor.coords[2],
        &result.zero_divisor.coords[3],
    ];
    let y = FieldElem::sub(&FieldElem::mul(r, r), &FieldElem::mul(&FieldElem::mul(alpha, s), s));
    let triple = if y.is_zero() {
        let rho = if !s.is_zero() {
            r.div(s)?
        } else if !q.is_zero() {
            p.div(q)?
        } else {
            return Err(PipelineError::InternalInconsistency(
                "a nonzero zero divisor cannot have p = q = r = s = 0",
            ));
        };
        vec![alpha.field.one(), alpha.field.zero(), rho]
    } else {
        let x = FieldElem::add(&FieldElem::mul(p, s), &FieldElem::mul(q, r));
        let z = FieldElem::add(&FieldElem::mul(p, r), &FieldElem::mul(&FieldElem::mul(alpha, q), s));
        vec![x, y, z]
    };
    let check = FieldElem::sub(
        &FieldElem::add(
            &FieldElem::mul(&FieldElem::mul(alpha, &triple[0]), &triple[0]),
            &FieldElem::mul(&FieldElem::mul(beta, &triple[1]), &triple[1]),
        ),
        &FieldElem::mul(&triple[2], &triple[2]),
    );
    if !check.is_zero() || triple.iter().all(|c| c.is_zero()) {
        return Err(PipelineError::InternalInconsistency("the conic point does not verify"));
    }
    Ok(ConicOutcome::Solution(triple))
}
