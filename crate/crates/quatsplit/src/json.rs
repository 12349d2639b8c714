//! Versioned JSON documents for every tool input and output.
//!
//! All documents carry `"schema": "quatsplit/1"` and a `"command"` tag.
//! Numbers never appear as JSON numbers: integers serialize as decimal
//! strings and rationals as `"p/q"` (with `/q` omitted when the
//! denominator is 1), so no precision is lost and output is reproducible
//! byte for byte. Scalars of a rational algebra are single rational
//! strings; scalars over Q(√d) are `{"a": ..., "b": ...}` pairs meaning
//! a + b√d. Field order is fixed by the struct definitions, so equal
//! values always serialize to equal bytes.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgElem, AlgebraError, SCAlgebra};
use crate::arith::{Factorization, Place};
use crate::pipeline::{Isomorphism, NotSplitCertificate, PipelineResult};
use crate::quadfield::{QFElem, QuadField, QuadFieldError};
use crate::quadform::{
    AnisotropyWitness, Obstruction, QuadForm, QuadFormError, SolveOutcome,
};
use crate::quaternion::{QuatAlgebra, QuatError, Quaternion};
use crate::rat::{Int, Rat};

/// Version tag present in every document.
pub const SCHEMA: &str = "quatsplit/1";

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed number '{0}'")]
    BadNumber(String),
    #[error("unknown base field '{0}': expected \"Q\" or an object with a key \"d\"")]
    BadBase(String),
    #[error("expected a rational scalar, found a nonzero multiple of sqrt(d)")]
    IrrationalScalar,
    #[error("expected {expected} entries, found {found}")]
    BadLength { expected: usize, found: usize },
    #[error("unsupported schema '{0}', expected '{SCHEMA}'")]
    BadSchema(String),
    #[error("invalid document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Field(#[from] QuadFieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Form(#[from] QuadFormError),
    #[error(transparent)]
    Quaternion(#[from] QuatError),
}

/// Renders a rational as `"p"` or `"p/q"` in lowest terms.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"`; the result is reduced and a zero
/// denominator is rejected.
pub fn parse_rat(s: &str) -> Result<Rat, JsonError> {
    let bad = || JsonError::BadNumber(s.to_string());
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let n: Int = numer.trim().parse().map_err(|_| bad())?;
    let d: Int = match denom {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => Int::one(),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

pub fn format_int(n: &Int) -> String {
    n.to_string()
}

pub fn parse_int(s: &str) -> Result<Int, JsonError> {
    s.trim().parse().map_err(|_| JsonError::BadNumber(s.to_string()))
}

/// A place of Q as a string: `"inf"` or the decimal prime.
pub fn format_place(p: &Place) -> String {
    p.to_string()
}

pub fn parse_place(s: &str) -> Result<Place, JsonError> {
    if s == "inf" {
        Ok(Place::Inf)
    } else {
        Ok(Place::Finite(parse_int(s)?))
    }
}

/// One scalar: a rational string, or an `{a, b}` pair meaning a + b√d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarDoc {
    Rational(String),
    Quadratic { a: String, b: String },
}

impl ScalarDoc {
    pub fn from_rat(r: &Rat) -> ScalarDoc {
        ScalarDoc::Rational(format_rat(r))
    }

    pub fn from_qf(x: &QFElem) -> ScalarDoc {
        ScalarDoc::Quadratic { a: format_rat(&x.a), b: format_rat(&x.b) }
    }

    /// Reads the scalar as a plain rational; an `{a, b}` pair is
    /// accepted only when b = 0.
    pub fn to_rat(&self) -> Result<Rat, JsonError> {
        match self {
            ScalarDoc::Rational(s) => parse_rat(s),
            ScalarDoc::Quadratic { a, b } => {
                if !parse_rat(b)?.is_zero() {
                    return Err(JsonError::IrrationalScalar);
                }
                parse_rat(a)
            }
        }
    }

    /// Reads the scalar as an element of the given field.
    pub fn to_qf(&self, field: &QuadField) -> Result<QFElem, JsonError> {
        match self {
            ScalarDoc::Rational(s) => Ok(field.from_rational(parse_rat(s)?)),
            ScalarDoc::Quadratic { a, b } => Ok(field.elem(parse_rat(a)?, parse_rat(b)?)),
        }
    }
}

/// The base field of an algebra: the string `"Q"` or `{"d": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseDoc {
    Name(String),
    Quadratic { d: String },
}

/// A four-dimensional algebra by structure constants: `gamma[i][j][k]`
/// is the coefficient of the k-th basis element in eᵢeⱼ, and `one` is
/// the coordinate vector of the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub base: BaseDoc,
    pub gamma: Vec<Vec<Vec<ScalarDoc>>>,
    pub one: Vec<ScalarDoc>,
}

/// An algebra document parses over Q or over a quadratic field.
#[derive(Debug, Clone)]
pub enum AlgebraInput {
    Rational(SCAlgebra<Rat>),
    Quadratic(SCAlgebra<QFElem>),
}

pub fn algebra_to_doc(alg: &SCAlgebra<QFElem>) -> AlgebraDoc {
    let field = &alg.one().coords[0].field;
    AlgebraDoc {
        base: BaseDoc::Quadratic { d: format_int(field.d()) },
        gamma: alg
            .gamma()
            .iter()
            .map(|plane| {
                plane.iter().map(|row| row.iter().map(ScalarDoc::from_qf).collect()).collect()
            })
            .collect(),
        one: alg.one().coords.iter().map(ScalarDoc::from_qf).collect(),
    }
}

pub fn rational_algebra_to_doc(alg: &SCAlgebra<Rat>) -> AlgebraDoc {
    AlgebraDoc {
        base: BaseDoc::Name("Q".to_string()),
        gamma: alg
            .gamma()
            .iter()
            .map(|plane| {
                plane.iter().map(|row| row.iter().map(ScalarDoc::from_rat).collect()).collect()
            })
            .collect(),
        one: alg.one().coords.iter().map(ScalarDoc::from_rat).collect(),
    }
}

impl AlgebraDoc {
    pub fn parse(&self) -> Result<AlgebraInput, JsonError> {
        match &self.base {
            BaseDoc::Name(name) if name == "Q" => {
                let gamma = map_gamma(&self.gamma, &ScalarDoc::to_rat)?;
                let one =
                    self.one.iter().map(ScalarDoc::to_rat).collect::<Result<Vec<_>, _>>()?;
                Ok(AlgebraInput::Rational(SCAlgebra::new(gamma, one)?))
            }
            BaseDoc::Name(name) => Err(JsonError::BadBase(name.clone())),
            BaseDoc::Quadratic { d } => {
                let field = QuadField::new(parse_int(d)?)?;
                let to_elem = |s: &ScalarDoc| s.to_qf(&field);
                let gamma = map_gamma(&self.gamma, &to_elem)?;
                let one = self.one.iter().map(to_elem).collect::<Result<Vec<_>, _>>()?;
                Ok(AlgebraInput::Quadratic(SCAlgebra::new(gamma, one)?))
            }
        }
    }
}

fn map_gamma<S>(
    gamma: &[Vec<Vec<ScalarDoc>>],
    f: &dyn Fn(&ScalarDoc) -> Result<S, JsonError>,
) -> Result<Vec<Vec<Vec<S>>>, JsonError> {
    gamma
        .iter()
        .map(|plane| {
            plane
                .iter()
                .map(|row| row.iter().map(f).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
        })
        .collect()
}

/// A quadratic form by its symmetric Gram matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDoc {
    pub gram: Vec<Vec<String>>,
}

pub fn form_to_doc(q: &QuadForm) -> FormDoc {
    FormDoc {
        gram: q.gram().iter().map(|row| row.iter().map(format_rat).collect()).collect(),
    }
}

impl FormDoc {
    pub fn parse(&self) -> Result<QuadForm, JsonError> {
        let gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QuadForm::new(gram)?)
    }
}

/// Why a form has no nonzero root in the completion at `place`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ReasonDoc {
    Definite,
    NonSquareClass { value: String },
    NonResidue { value: String },
    HasseMismatch { epsilon: String, required: String },
}

/// A locally checkable anisotropy witness: the place and the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub place: String,
    pub reason: ReasonDoc,
}

pub fn witness_to_doc(w: &AnisotropyWitness) -> WitnessDoc {
    let reason = match &w.reason {
        Obstruction::Definite => ReasonDoc::Definite,
        Obstruction::NonSquareClass { value } => {
            ReasonDoc::NonSquareClass { value: format_int(value) }
        }
        Obstruction::NonResidue { value } => ReasonDoc::NonResidue { value: format_int(value) },
        Obstruction::HasseMismatch { epsilon, required } => ReasonDoc::HasseMismatch {
            epsilon: epsilon.to_string(),
            required: required.to_string(),
        },
    };
    WitnessDoc { place: format_place(&w.place), reason }
}

impl WitnessDoc {
    pub fn parse(&self) -> Result<AnisotropyWitness, JsonError> {
        let parse_sign = |s: &String| -> Result<i8, JsonError> {
            s.parse().map_err(|_| JsonError::BadNumber(s.clone()))
        };
        let reason = match &self.reason {
            ReasonDoc::Definite => Obstruction::Definite,
            ReasonDoc::NonSquareClass { value } => {
                Obstruction::NonSquareClass { value: parse_int(value)? }
            }
            ReasonDoc::NonResidue { value } => {
                Obstruction::NonResidue { value: parse_int(value)? }
            }
            ReasonDoc::HasseMismatch { epsilon, required } => Obstruction::HasseMismatch {
                epsilon: parse_sign(epsilon)?,
                required: parse_sign(required)?,
            },
        };
        Ok(AnisotropyWitness { place: parse_place(&self.place)?, reason })
    }
}

/// The outcome of solving a form: an integer root or a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SolutionDoc {
    Vector { vector: Vec<String> },
    Witness { witness: WitnessDoc },
}

#[derive(Debug, Clone)]
pub enum ParsedSolution {
    Vector(Vec<Int>),
    Witness(AnisotropyWitness),
}

pub fn solution_to_doc(outcome: &SolveOutcome) -> SolutionDoc {
    match outcome {
        SolveOutcome::Isotropic(v) => {
            SolutionDoc::Vector { vector: v.coords.iter().map(format_int).collect() }
        }
        SolveOutcome::Anisotropic(w) => SolutionDoc::Witness { witness: witness_to_doc(w) },
    }
}

impl SolutionDoc {
    pub fn parse(&self) -> Result<ParsedSolution, JsonError> {
        match self {
            SolutionDoc::Vector { vector } => Ok(ParsedSolution::Vector(
                vector.iter().map(|s| parse_int(s)).collect::<Result<Vec<_>, _>>()?,
            )),
            SolutionDoc::Witness { witness } => Ok(ParsedSolution::Witness(witness.parse()?)),
        }
    }
}

/// A quaternion algebra H(α, β) together with one element's coordinates
/// on the basis 1, u, v, uv.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionDoc {
    pub alpha: ScalarDoc,
    pub beta: ScalarDoc,
    pub coords: Vec<ScalarDoc>,
}

pub fn quaternion_to_doc(h: &QuatAlgebra<Rat>, q: &Quaternion<Rat>) -> QuaternionDoc {
    QuaternionDoc {
        alpha: ScalarDoc::from_rat(h.alpha()),
        beta: ScalarDoc::from_rat(h.beta()),
        coords: q.coords.iter().map(ScalarDoc::from_rat).collect(),
    }
}

impl QuaternionDoc {
    pub fn parse_rational(&self) -> Result<(QuatAlgebra<Rat>, Quaternion<Rat>), JsonError> {
        let h = QuatAlgebra::new(self.alpha.to_rat()?, self.beta.to_rat()?)?;
        let coords =
            self.coords.iter().map(ScalarDoc::to_rat).collect::<Result<Vec<_>, _>>()?;
        let q = h.element(coords)?;
        Ok((h, q))
    }
}

/// A division-algebra certificate: the construction stage that failed,
/// the rational form it needed a root of, and the local witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub stage: String,
    pub form: FormDoc,
    pub witness: WitnessDoc,
}

pub fn certificate_to_doc(c: &NotSplitCertificate) -> CertificateDoc {
    CertificateDoc {
        stage: c.stage.to_string(),
        form: form_to_doc(&c.form),
        witness: witness_to_doc(&c.witness),
    }
}

impl CertificateDoc {
    pub fn parse(&self) -> Result<NotSplitCertificate, JsonError> {
        let stage =
            self.stage.parse::<u8>().map_err(|_| JsonError::BadNumber(self.stage.clone()))?;
        Ok(NotSplitCertificate {
            stage,
            form: self.form.parse()?,
            witness: self.witness.parse()?,
        })
    }
}

/// Images of the four input basis elements as 2×2 matrices over K:
/// `doc[k][i][j]` is the (i, j) entry of the image of basis element k.
pub type IsomorphismDoc = Vec<Vec<Vec<ScalarDoc>>>;

pub fn isomorphism_to_doc(iso: &Isomorphism) -> IsomorphismDoc {
    iso.images
        .iter()
        .map(|m| m.iter().map(|row| row.iter().map(ScalarDoc::from_qf).collect()).collect())
        .collect()
}

pub fn parse_isomorphism(doc: &IsomorphismDoc, field: &QuadField) -> Result<Isomorphism, JsonError> {
    if doc.len() != 4 {
        return Err(JsonError::BadLength { expected: 4, found: doc.len() });
    }
    let images = doc
        .iter()
        .map(|m| {
            if m.len() != 2 {
                return Err(JsonError::BadLength { expected: 2, found: m.len() });
            }
            m.iter()
                .map(|row| {
                    if row.len() != 2 {
                        return Err(JsonError::BadLength { expected: 2, found: row.len() });
                    }
                    row.iter().map(|s| s.to_qf(field)).collect()
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<Vec<QFElem>>>, _>>()?;
    Ok(Isomorphism { images })
}

/// The outcome of the splitting pipeline: a zero divisor (optionally
/// with the explicit isomorphism onto M₂(K)) or a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OutcomeDoc {
    Split {
        zero_divisor: Vec<ScalarDoc>,
        branch: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        isomorphism: Option<IsomorphismDoc>,
    },
    Certificate { certificate: CertificateDoc },
}

#[derive(Debug, Clone)]
pub enum ParsedOutcome {
    Split { zero_divisor: AlgElem<QFElem>, branch: String, isomorphism: Option<Isomorphism> },
    Certificate(NotSplitCertificate),
}

pub fn result_to_outcome_doc(result: &PipelineResult) -> OutcomeDoc {
    OutcomeDoc::Split {
        zero_divisor: result.zero_divisor.coords.iter().map(ScalarDoc::from_qf).collect(),
        branch: result.branch.tag().to_string(),
        isomorphism: result.isomorphism.as_ref().map(isomorphism_to_doc),
    }
}

pub fn certificate_to_outcome_doc(c: &NotSplitCertificate) -> OutcomeDoc {
    OutcomeDoc::Certificate { certificate: certificate_to_doc(c) }
}

impl OutcomeDoc {
    pub fn parse(&self, field: &QuadField) -> Result<ParsedOutcome, JsonError> {
        match self {
            OutcomeDoc::Split { zero_divisor, branch, isomorphism } => {
                let coords = zero_divisor
                    .iter()
                    .map(|s| s.to_qf(field))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(ParsedOutcome::Split {
                    zero_divisor: AlgElem::new(coords)?,
                    branch: branch.clone(),
                    isomorphism: isomorphism
                        .as_ref()
                        .map(|doc| parse_isomorphism(doc, field))
                        .transpose()?,
                })
            }
            OutcomeDoc::Certificate { certificate } => {
                Ok(ParsedOutcome::Certificate(certificate.parse()?))
            }
        }
    }
}

/// Problem statement for `factor`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorProblem {
    pub n: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub prime: String,
    pub exponent: String,
}

/// Output of `factor`: sign, prime powers, and whether every factor
/// passed a primality certificate within the factoring budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDoc {
    pub problem: FactorProblem,
    pub sign: String,
    pub factors: Vec<FactorEntry>,
    pub certified: bool,
}

pub fn factorization_to_doc(n: &Int, f: &Factorization) -> FactorDoc {
    FactorDoc {
        problem: FactorProblem { n: format_int(n) },
        sign: f.sign.to_string(),
        factors: f
            .factors
            .iter()
            .map(|(p, e)| FactorEntry { prime: format_int(p), exponent: e.to_string() })
            .collect(),
        certified: f.certified,
    }
}

/// Output of `quadform-solve`: the form and a root or witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadformSolveDoc {
    pub problem: FormDoc,
    #[serde(flatten)]
    pub outcome: SolutionDoc,
}

/// Problem statement for `conic`: the diagonal ternary form
/// ax² + by² + cz².
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicProblem {
    pub a: String,
    pub b: String,
    pub c: String,
}

/// Output of `conic`: the coefficients and a root or witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicDoc {
    pub problem: ConicProblem,
    #[serde(flatten)]
    pub outcome: SolutionDoc,
}

/// Output of `zerodiv` and `isomorphism`: the input algebra and the
/// pipeline outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitDoc {
    pub problem: AlgebraDoc,
    #[serde(flatten)]
    pub outcome: OutcomeDoc,
}

/// Problem statement for `conic-ext`: αx² + βy² = z² over Q(√d).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicExtProblem {
    pub d: String,
    pub alpha: ScalarDoc,
    pub beta: ScalarDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConicExtOutcome {
    Solution { solution: Vec<ScalarDoc> },
    Certificate { certificate: CertificateDoc },
}

/// Output of `conic-ext`: the coefficients and a point or certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicExtDoc {
    pub problem: ConicExtProblem,
    #[serde(flatten)]
    pub outcome: ConicExtOutcome,
}

/// Output of `verify`: which command's document was checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub checked: String,
    pub verified: bool,
}

/// Every document is one of these, tagged by the producing command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Body {
    Factor(FactorDoc),
    QuadformSolve(QuadformSolveDoc),
    Conic(ConicDoc),
    Zerodiv(SplitDoc),
    Isomorphism(SplitDoc),
    ConicExt(ConicExtDoc),
    Verify(VerifyDoc),
}

impl Body {
    pub fn command(&self) -> &'static str {
        match self {
            Body::Factor(_) => "factor",
            Body::QuadformSolve(_) => "quadform-solve",
            Body::Conic(_) => "conic",
            Body::Zerodiv(_) => "zerodiv",
            Body::Isomorphism(_) => "isomorphism",
            Body::ConicExt(_) => "conic-ext",
            Body::Verify(_) => "verify",
        }
    }
}

/// A complete document: the schema tag plus the command body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub schema: String,
    #[serde(flatten)]
    pub body: Body,
}

impl Document {
    pub fn new(body: Body) -> Document {
        Document { schema: SCHEMA.to_string(), body }
    }
}

/// Serializes a document; equal documents produce identical bytes.
pub fn to_json(doc: &Document) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize without error")
}

/// Parses a document and checks its schema tag.
pub fn from_json(s: &str) -> Result<Document, JsonError> {
    let doc: Document =
        serde_json::from_str(s).map_err(|e| JsonError::Malformed(e.to_string()))?;
    if doc.schema != SCHEMA {
        return Err(JsonError::BadSchema(doc.schema));
    }
    Ok(doc)
}
