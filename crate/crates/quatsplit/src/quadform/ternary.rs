//! Ternary forms a·x² + b·y² + c·z² = 0: Legendre normalization, a
//! deterministic congruence-lattice search for a smallest zero, and
//! classical Lagrange descent as a fallback path.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AnisotropyWitness, IsotropicVector, Obstruction, QuadFormError, SolveOutcome};
use crate::arith::{crt, factor, inv_mod, legendre, sqrt_mod, squarefree_split, ArithError, Place};
use crate::lattice::{gram_schmidt, lll_reduce_default, IntLattice};
use crate::linalg;
use crate::rat::{int_sqrt, primitive_integer_vector};
use crate::{Int, Rat};

/// A Legendre-reduced ternary form: integer coefficients, each squarefree,
/// pairwise coprime, and not all of one sign. `back_transform` maps a
/// solution of a·x² + b·y² + c·z² = 0 to a solution of the form that was
/// handed to [`minimize_ternary`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegendreTernary {
    pub a: Int,
    pub b: Int,
    pub c: Int,
    pub back_transform: Vec<Vec<Rat>>,
}

impl LegendreTernary {
    pub fn coeffs(&self) -> [&Int; 3] {
        [&self.a, &self.b, &self.c]
    }

    fn validate(&self) -> Result<(), QuadFormError> {
        let bad = || QuadFormError::NotReduced(self.a.clone(), self.b.clone(), self.c.clone());
        for x in self.coeffs() {
            if x.is_zero() {
                return Err(bad());
            }
            if !squarefree_split(x)?.cofactor.is_one() {
                return Err(bad());
            }
        }
        if !self.a.gcd(&self.b).is_one()
            || !self.a.gcd(&self.c).is_one()
            || !self.b.gcd(&self.c).is_one()
        {
            return Err(bad());
        }
        let all_pos = self.coeffs().iter().all(|x| x.is_positive());
        let all_neg = self.coeffs().iter().all(|x| x.is_negative());
        if all_pos || all_neg {
            return Err(bad());
        }
        Ok(())
    }
}

/// Result of [`minimize_ternary`]: a reduced form, or proof that the input
/// was definite (all coefficients of one sign), hence without real zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TernaryOutcome {
    Reduced(LegendreTernary),
    Definite(AnisotropyWitness),
}

/// Reduces three nonzero rational coefficients to Legendre normal form:
/// clear denominators, drop the content, absorb square parts into the
/// variables, and move common prime factors of pairs onto the third
/// coefficient. Every step is a form scaling or an invertible variable
/// substitution, recorded in the returned `back_transform`.
pub fn minimize_ternary(coeffs: &[Rat; 3]) -> Result<TernaryOutcome, QuadFormError> {
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            return Err(QuadFormError::ZeroCoefficient(i));
        }
    }
    // Scaling the whole form changes no zero: clear denominators, then
    // divide out the content.
    let lcm = coeffs.iter().fold(Int::one(), |l, c| l.lcm(c.denom()));
    let mut s: Vec<Int> = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let g = s.iter().fold(Int::zero(), |g, x| g.gcd(x));
    for x in s.iter_mut() {
        *x /= &g;
    }
    let mut back = linalg::identity_like(&Rat::zero(), 3);
    // (s·f²)·x² = s·(f·x)²: replace the coefficient by its squarefree part
    // and map the new variable back through division by f.
    for i in 0..3 {
        let split = squarefree_split(&s[i])?;
        if !split.cofactor.is_one() {
            s[i] = split.squarefree;
            back[i][i] = Rat::new(Int::one(), split.cofactor);
        }
    }
    // While some pair shares a prime p, pass from ⟨a, b, c⟩ with p | a,
    // p | b to ⟨a/p, b/p, p·c⟩; multiplying that form by p shows (x, y, z)
    // pulls back to (x, y, p·z). Squarefreeness and coprimality-to-the-
    // third are preserved, and |abc| drops, so this terminates.
    loop {
        let mut found = None;
        'pairs: for i in 0..3 {
            for j in i + 1..3 {
                let g = s[i].gcd(&s[j]);
                if !g.is_one() {
                    found = Some((i, j, g));
                    break 'pairs;
                }
            }
        }
        let Some((i, j, g)) = found else { break };
        let p = factor(&g)?.factors[0].0.clone();
        let k = 3 - i - j;
        s[i] /= &p;
        s[j] /= &p;
        s[k] *= &p;
        let mut step = linalg::identity_like(&Rat::zero(), 3);
        step[k][k] = Rat::from(p);
        back = linalg::mat_mul(&back, &step);
    }
    if s.iter().all(|x| x.is_positive()) || s.iter().all(|x| x.is_negative()) {
        return Ok(TernaryOutcome::Definite(AnisotropyWitness {
            place: Place::Inf,
            reason: Obstruction::Definite,
        }));
    }
    Ok(TernaryOutcome::Reduced(LegendreTernary {
        a: s[0].clone(),
        b: s[1].clone(),
        c: s[2].clone(),
        back_transform: back,
    }))
}

/// ⌊√r⌋ for a nonnegative rational: ⌊√(n/d)⌋ = ⌊√(n·d)⌋ div d.
fn floor_sqrt_rat(r: &Rat) -> Int {
    int_sqrt(&(r.numer() * r.denom())).div_floor(r.denom())
}

/// Largest integer t with t ≤ c + √r (r ≥ 0), decided exactly.
fn floor_center_plus_sqrt(c: &Rat, r: &Rat) -> Int {
    let ok = |t: &Int| -> bool {
        let diff = Rat::from(t.clone()) - c;
        !diff.is_positive() || &diff * &diff <= *r
    };
    let mut t = c.floor().to_integer() + floor_sqrt_rat(r) + 2;
    while !ok(&t) {
        t -= 1;
    }
    t
}

/// Smallest integer t with t ≥ c − √r (r ≥ 0), decided exactly.
fn ceil_center_minus_sqrt(c: &Rat, r: &Rat) -> Int {
    let ok = |t: &Int| -> bool {
        let diff = c - Rat::from(t.clone());
        !diff.is_positive() || &diff * &diff <= *r
    };
    let mut t = c.ceil().to_integer() - floor_sqrt_rat(r) - 2;
    while !ok(&t) {
        t += 1;
    }
    t
}

/// All integer combinations of `basis` whose value under the quadratic
/// form given by `gram` is at most `bound`, by exact Fincke–Pohst
/// enumeration over the Gram–Schmidt data of the (reduced) basis.
fn short_vectors(basis: &[Vec<Int>], gram: &[Vec<Int>], bound: &Rat) -> Vec<Vec<Int>> {
    let gram_owned = gram.to_vec();
    let (mu, norm2) = gram_schmidt(basis, Some(&gram_owned))
        .expect("short-vector basis is independent and the form positive definite");
    let n = basis.len();
    let mut coeffs = vec![Int::zero(); n];
    let mut out = Vec::new();
    descend(n, bound.clone(), &mu, &norm2, &mut coeffs, &mut out);
    let mut vectors = Vec::with_capacity(out.len());
    for t in out {
        let mut v = vec![Int::zero(); basis[0].len()];
        for (ti, row) in t.iter().zip(basis) {
            for (vj, bj) in v.iter_mut().zip(row) {
                *vj += ti * bj;
            }
        }
        vectors.push(v);
    }
    vectors
}

fn descend(
    level: usize,
    remaining: Rat,
    mu: &[Vec<Rat>],
    norm2: &[Rat],
    coeffs: &mut Vec<Int>,
    out: &mut Vec<Vec<Int>>,
) {
    if level == 0 {
        out.push(coeffs.clone());
        return;
    }
    let i = level - 1;
    // F(t) = Σᵢ N᙮ᵢ·(tᵢ + Σ_{k>i} μ[k][i]·t_k)²; bound the layer for tᵢ.
    let mut center = Rat::zero();
    for k in i + 1..coeffs.len() {
        center -= &mu[k][i] * Rat::from(coeffs[k].clone());
    }
    let radius2 = &remaining / &norm2[i];
    let lo = ceil_center_minus_sqrt(&center, &radius2);
    let hi = floor_center_plus_sqrt(&center, &radius2);
    let mut t = lo;
    while t <= hi {
        coeffs[i] = t.clone();
        let offset = Rat::from(t.clone()) - &center;
        let used = &norm2[i] * &offset * &offset;
        descend(level - 1, &remaining - used, mu, norm2, coeffs, out);
        t += 1;
    }
    coeffs[i] = Int::zero();
}

/// One congruence `var_kind ≡ coef · other (mod p)` attached to the host
/// coefficient the prime divides.
struct PrimeCondition {
    p: Int,
    host: usize,
    coef: Int,
    flippable: bool,
}

/// Sign-choice sweeps stay within this budget; beyond it the descent
/// route below carries the search instead.
const MASK_SWEEP_MAX_FLIPS: usize = 13;
const MASK_SWEEP_MAX_BITS: u64 = 64;

/// Deterministic solver for a Legendre-reduced ternary form. Returns a
/// primitive zero with nonnegative entries inside the Holzer range
/// (x² ≤ |bc|, y² ≤ |ac|, z² ≤ |ab|), smallest under the auxiliary weight
/// |a|x² + |b|y² + |c|z² with lexicographic tie-break among the lattice
/// candidates considered, or an anisotropy witness naming a place where
/// no zero exists.
///
/// Solutions of the form are, prime by prime, confined to index-p
/// sublattices of Z³ determined by the square roots of −ab, −ac, −bc
/// modulo the primes of c, b, a. For one choice of root signs the
/// resulting lattice has index |abc| in Z³; it is LLL-reduced against the
/// positive form above and all points with weight at most 3|abc| are
/// enumerated, which covers every Holzer-bounded zero the lattice holds.
/// The principal root choice is tried first. If its lattice carries no
/// bounded zero, classical Lagrange descent produces some zero, whose
/// residues single out the root signs of a lattice that provably contains
/// zeros; that lattice is reduced the same way. A full sweep over the
/// remaining sign choices backstops small forms, so for them the search
/// is exhaustive rather than heuristic.
pub fn solve_ternary(form: &LegendreTernary) -> Result<SolveOutcome, QuadFormError> {
    form.validate()?;
    let (a, b, c) = (&form.a, &form.b, &form.c);
    let abs = [a.abs(), b.abs(), c.abs()];
    let others = |host: usize| -> Int {
        let coeffs = form.coeffs();
        -(coeffs[(host + 1) % 3] * coeffs[(host + 2) % 3])
    };

    // The classical solvability conditions: for each odd prime p | a the
    // value −bc must be a residue mod p, and cyclically. Scan the primes
    // in ascending order so a failure names the smallest obstruction.
    let mut odd_primes: Vec<(Int, usize)> = Vec::new();
    let mut two_host: Option<usize> = None;
    for host in 0..3 {
        let f = factor(&abs[host])?;
        for p in f.primes() {
            if p.is_odd() {
                odd_primes.push((p.clone(), host));
            } else {
                two_host = Some(host);
            }
        }
    }
    odd_primes.sort();
    for (p, host) in &odd_primes {
        let value = others(*host);
        if legendre(&value, p)? == -1 {
            return Ok(SolveOutcome::Anisotropic(AnisotropyWitness {
                place: Place::Finite(p.clone()),
                reason: Obstruction::NonResidue { value },
            }));
        }
    }

    // Congruences confining solutions, one per prime. For p | a the pair
    // (y, z) satisfies y ≡ ±w·b⁻¹·z with w² ≡ −bc, and cyclically; at
    // p = 2 the two odd coefficients force the parity relation with
    // coefficient 1, which no sign flip can change.
    let mut conditions: Vec<PrimeCondition> = Vec::new();
    for (p, host) in &odd_primes {
        let w = sqrt_mod(&others(*host).mod_floor(p), p)?;
        let divisor = match host {
            0 => b, // y ≡ w·b⁻¹·z (mod p)
            1 => a, // x ≡ w·a⁻¹·z (mod p)
            _ => a, // x ≡ w·a⁻¹·y (mod p)
        };
        let inv = inv_mod(&divisor.mod_floor(p), p).expect("coefficients are coprime to p");
        conditions.push(PrimeCondition {
            p: p.clone(),
            host: *host,
            coef: (w * inv).mod_floor(p),
            flippable: true,
        });
    }
    if let Some(host) = two_host {
        conditions.push(PrimeCondition {
            p: Int::from(2),
            host,
            coef: Int::one(),
            flippable: false,
        });
    }

    let flips: Vec<usize> =
        (0..conditions.len()).filter(|&i| conditions[i].flippable).collect();
    let gram: Vec<Vec<Int>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| if i == j { abs[i].clone() } else { Int::zero() })
                .collect()
        })
        .collect();
    let abc = &abs[0] * &abs[1] * &abs[2];
    let bound = Rat::from(&abc * 3);
    let holzer = [&abs[1] * &abs[2], &abs[0] * &abs[2], &abs[0] * &abs[1]];

    // Builds the solution lattice for one choice of root signs, reduces
    // it, and sorts the primitive zeros among its short vectors into the
    // Holzer-bounded candidates and the oversized rest.
    let run_signs = |signs: &[bool],
                     candidates: &mut BTreeSet<(Int, Vec<Int>)>,
                     oversized: &mut BTreeSet<(Int, Vec<Int>)>| {
        // Combine the per-prime congruences into one per group: y ≡ B·z
        // (mod |a|), x ≡ C·z (mod |b|), x ≡ A·y (mod |c|); the moduli are
        // the |coefficients| themselves since each is squarefree.
        let mut group: [Vec<(Int, Int)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for (bit, &ci) in flips.iter().enumerate() {
            let cond = &conditions[ci];
            let signed = if signs[bit] {
                (-&cond.coef).mod_floor(&cond.p)
            } else {
                cond.coef.clone()
            };
            group[cond.host].push((signed, cond.p.clone()));
        }
        if let Some(host) = two_host {
            group[host].push((Int::one(), Int::from(2)));
        }
        let combine = |congr: &[(Int, Int)], modulus: &Int| -> Int {
            if congr.is_empty() {
                return Int::zero();
            }
            let (r, m) = crt(congr).expect("moduli are distinct primes");
            debug_assert_eq!(&m, modulus);
            r
        };
        let bb = combine(&group[0], &abs[0]);
        let cc = combine(&group[1], &abs[1]);
        let aa = combine(&group[2], &abs[2]);

        // An explicit triangular basis of the solution lattice: membership
        // is three independent congruences, so the index is |abc| and the
        // rows below clearly lie in it and have determinant |abc|.
        let y3 = bb.mod_floor(&abs[0]);
        let basis = vec![
            vec![&abs[1] * &abs[2], Int::zero(), Int::zero()],
            vec![
                crt(&[((&aa * &abs[0]).mod_floor(&abs[2]), abs[2].clone()), (Int::zero(), abs[1].clone())])
                    .expect("|b| and |c| are coprime")
                    .0,
                abs[0].clone(),
                Int::zero(),
            ],
            vec![
                crt(&[((&aa * &y3).mod_floor(&abs[2]), abs[2].clone()), (cc.mod_floor(&abs[1]), abs[1].clone())])
                    .expect("|b| and |c| are coprime")
                    .0,
                y3,
                Int::one(),
            ],
        ];
        let reduction = lll_reduce_default(&IntLattice::with_gram(basis, gram.clone()))
            .expect("congruence basis is triangular with nonzero diagonal");

        for v in short_vectors(&reduction.lattice.basis, &gram, &bound) {
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            let q = a * &v[0] * &v[0] + b * &v[1] * &v[1] + c * &v[2] * &v[2];
            if !q.is_zero() {
                continue;
            }
            let content = v.iter().fold(Int::zero(), |g, x| g.gcd(x));
            let reduced: Vec<Int> = v.iter().map(|x| (x / &content).abs()).collect();
            let weight: Int = (0..3).map(|i| &abs[i] * &reduced[i] * &reduced[i]).sum();
            if (0..3).any(|i| &reduced[i] * &reduced[i] > holzer[i]) {
                oversized.insert((weight, reduced));
            } else {
                candidates.insert((weight, reduced));
            }
        }
    };
    let mut candidates: BTreeSet<(Int, Vec<Int>)> = BTreeSet::new();
    let mut oversized: BTreeSet<(Int, Vec<Int>)> = BTreeSet::new();
    let best = |set: &BTreeSet<(Int, Vec<Int>)>| {
        set.iter().next().map(|(_, coords)| {
            SolveOutcome::Isotropic(IsotropicVector { coords: coords.clone() })
        })
    };

    // The principal root choice.
    run_signs(&vec![false; flips.len()], &mut candidates, &mut oversized);
    if let Some(found) = best(&candidates) {
        return Ok(found);
    }

    // Lagrange descent yields some zero of the form. Its residues single
    // out one root sign per prime, so the lattice for those signs contains
    // the zero, and its short vectors are where a bounded zero shows up.
    let descent = lagrange_descent(a, b, c)?;
    if let Some(v0) = &descent {
        let signs: Vec<bool> = flips
            .iter()
            .map(|&ci| {
                let cond = &conditions[ci];
                let (target, source) = match cond.host {
                    0 => (&v0.coords[1], &v0.coords[2]),
                    1 => (&v0.coords[0], &v0.coords[2]),
                    _ => (&v0.coords[0], &v0.coords[1]),
                };
                let plus = (target - &cond.coef * source).mod_floor(&cond.p).is_zero();
                debug_assert!(
                    plus || (target + &cond.coef * source).mod_floor(&cond.p).is_zero(),
                    "a zero satisfies the congruence for one of the two root signs"
                );
                !plus
            })
            .collect();
        run_signs(&signs, &mut candidates, &mut oversized);
        if let Some(found) = best(&candidates) {
            return Ok(found);
        }
    }

    // Exhaustive sweep over all sign choices, within a fixed budget. For
    // small forms this restores the unconditional Holzer guarantee: some
    // sign choice contains a smallest zero, and the enumeration bound
    // 3|abc| covers the whole Holzer range.
    if flips.len() <= MASK_SWEEP_MAX_FLIPS && abc.bits() <= MASK_SWEEP_MAX_BITS {
        for mask in 0u64..(1u64 << flips.len()) {
            let signs: Vec<bool> = (0..flips.len()).map(|bit| mask >> bit & 1 == 1).collect();
            run_signs(&signs, &mut candidates, &mut oversized);
        }
        if let Some(found) = best(&candidates) {
            return Ok(found);
        }
    }

    // No zero inside the Holzer range surfaced; fall back to the best
    // oversized lattice zero, then to the raw descent zero.
    if let Some(found) = best(&oversized) {
        return Ok(found);
    }
    match descent {
        Some(v) => Ok(SolveOutcome::Isotropic(v)),
        None => Err(QuadFormError::SearchExhausted),
    }
}

/// Classical Lagrange descent for a·x² + b·y² + c·z² = 0 with nonzero
/// integer coefficients. Returns a primitive zero with nonnegative
/// entries, or `None` when none exists. The zero found here need not
/// satisfy the Holzer bounds.
pub fn lagrange_descent(a: &Int, b: &Int, c: &Int) -> Result<Option<IsotropicVector>, QuadFormError> {
    for (i, x) in [a, b, c].into_iter().enumerate() {
        if x.is_zero() {
            return Err(QuadFormError::ZeroCoefficient(i));
        }
    }
    // a·x² + b·y² + c·z² = 0 ⟺ (a·x)² = (−ab)·y² + (−ac)·z²; absorb the
    // square parts of the right-hand coefficients into y and z.
    let sa = squarefree_split(&-(a * b))?;
    let sb = squarefree_split(&-(a * c))?;
    let Some((x, y, z)) = solve_norm(&sa.squarefree, &sb.squarefree)? else {
        return Ok(None);
    };
    let coords = [
        Rat::new(x, a.clone()),
        Rat::new(y, sa.cofactor),
        Rat::new(z, sb.cofactor),
    ];
    let v: Vec<Int> = primitive_integer_vector(&coords)
        .into_iter()
        .map(|t| t.abs())
        .collect();
    let q = a * &v[0] * &v[0] + b * &v[1] * &v[1] + c * &v[2] * &v[2];
    assert!(q.is_zero(), "descent must return an exact zero");
    Ok(Some(IsotropicVector { coords: v }))
}

/// Nontrivial solution of X² = A·Y² + B·Z² for squarefree nonzero A, B,
/// by descent on |B|: a root w² ≡ A (mod |B|) gives w² − A = B·m with
/// |m| < |B|, and a solution for (A, squarefree part of m) lifts through
/// (w² − A)(x₁² − A·y₁²) = (w·x₁ + A·y₁)² − A·(w·y₁ + x₁)².
fn solve_norm(a: &Int, b: &Int) -> Result<Option<(Int, Int, Int)>, QuadFormError> {
    if a.is_one() {
        return Ok(Some((Int::one(), Int::one(), Int::zero())));
    }
    if b.is_one() {
        return Ok(Some((Int::one(), Int::zero(), Int::one())));
    }
    if *a == Int::from(-1) && *b == Int::from(-1) {
        return Ok(None);
    }
    if a.abs() > b.abs() {
        return Ok(solve_norm(b, a)?.map(|(x, y, z)| (x, z, y)));
    }
    // 2 ≤ |A| ≤ |B| from here on.
    let babs = b.abs();
    let mut congr = Vec::new();
    for p in factor(&babs)?.primes() {
        match sqrt_mod(&a.mod_floor(p), p) {
            Ok(r) => congr.push((r, p.clone())),
            Err(ArithError::NonResidue(..)) => return Ok(None),
            Err(e) => return Err(e.into()),
        }
    }
    let (w0, _) = crt(&congr)?;
    let w = if &w0 + &w0 > babs { w0 - &babs } else { w0 };
    let m = (&w * &w - a) / b;
    if m.is_zero() {
        return Ok(Some((w, Int::one(), Int::zero())));
    }
    let split = squarefree_split(&m)?;
    let Some((x1, y1, z1)) = solve_norm(a, &split.squarefree)? else {
        return Ok(None);
    };
    Ok(Some((
        &w * &x1 + a * &y1,
        &w * &y1 + &x1,
        &split.squarefree * &split.cofactor * &z1,
    )))
}
