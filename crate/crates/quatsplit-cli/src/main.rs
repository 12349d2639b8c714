//! Command-line surface for the quatsplit toolkit.
//!
//! Every command prints a one-shot result: a concise summary by default,
//! or the full versioned JSON document with `--json`. Exit code 0 means
//! solved or constructed, 2 means a verified negative certificate
//! (anisotropic form, division algebra, pointless conic), and 1 means an
//! input or internal error. Identical invocations produce byte-identical
//! output, and every success document passes `quatsplit verify`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use thiserror::Error;

use quatsplit::algebra::AlgebraError;
use quatsplit::arith::{factor, is_prime, ArithError, FACTOR_BUDGET_ENV};
use quatsplit::json::{
    self, algebra_to_doc, certificate_to_doc, certificate_to_outcome_doc, factorization_to_doc,
    form_to_doc, from_json, parse_int, parse_rat, result_to_outcome_doc, solution_to_doc,
    to_json, AlgebraInput, Body, CertificateDoc, ConicDoc, ConicExtDoc, ConicExtOutcome,
    ConicExtProblem, ConicProblem, Document, FormDoc, JsonError, ParsedOutcome,
    ParsedSolution, QuadformSolveDoc, ReasonDoc, ScalarDoc, SolutionDoc, SplitDoc, VerifyDoc,
};
use quatsplit::pipeline::{
    check_isomorphism, solve_conic_quadfield, zero_divisor, zero_divisor_with_isomorphism,
    ConicOutcome, NotSplitCertificate, PipelineError,
};
use quatsplit::quadfield::{QFElem, QuadField, QuadFieldError};
use quatsplit::quadform::{diagonalize, is_isotropic_local, solve, QuadForm, QuadFormError};
use quatsplit::quaternion::QuatError;
use quatsplit::rat::irat;
use quatsplit::Int;

#[derive(Parser)]
#[command(
    name = "quatsplit",
    version,
    about = "Zero divisors, splitting certificates, and conics over Q(sqrt(d))",
    after_help = format!(
        "Set {FACTOR_BUDGET_ENV} to bound the time spent factoring large integers."
    )
)]
struct Cli {
    /// Print the full JSON document instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to this file instead of standard output.
    #[arg(short, long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a nonzero integer into primes.
    Factor {
        /// The integer to factor.
        #[arg(allow_hyphen_values = true)]
        n: String,
    },
    /// Find an integer root of a quadratic form, or a local witness that
    /// none exists.
    QuadformSolve {
        /// JSON file with the symmetric Gram matrix: {"gram": [[...]]}.
        #[arg(long, value_name = "FILE")]
        form: PathBuf,
    },
    /// Solve a*x^2 + b*y^2 + c*z^2 = 0 in integers, not all zero.
    Conic {
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        b: String,
        #[arg(short, allow_hyphen_values = true)]
        c: String,
    },
    /// Find a zero divisor in a 4-dimensional algebra over Q(sqrt(d)),
    /// or certify that it is a division algebra.
    Zerodiv {
        /// JSON file with the structure constants: {"base", "gamma", "one"}.
        #[arg(long, value_name = "FILE")]
        algebra: PathBuf,
        /// Also compute the explicit isomorphism onto M2(K).
        #[arg(long)]
        emit_isomorphism: bool,
    },
    /// Find a zero divisor and the explicit isomorphism onto M2(K).
    Isomorphism {
        /// JSON file with the structure constants: {"base", "gamma", "one"}.
        #[arg(long, value_name = "FILE")]
        algebra: PathBuf,
    },
    /// Solve alpha*x^2 + beta*y^2 = z^2 over Q(sqrt(d)).
    ConicExt {
        /// The squarefree integer d defining the field.
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// A rational like "-1/2", or {"a": ..., "b": ...} meaning a + b*sqrt(d).
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Same format as --alpha.
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Re-check a document produced by any other command.
    Verify {
        /// The JSON document to verify.
        file: PathBuf,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Form(#[from] QuadFormError),
    #[error(transparent)]
    Field(#[from] QuadFieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Quaternion(#[from] QuatError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (body, summary, negative) = match run(&cli.command) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let text = if cli.json { to_json(&Document::new(body)) } else { summary };
    if let Some(path) = &cli.output {
        if let Err(source) = fs::write(path, text + "\n") {
            eprintln!("error: {}", CliError::Write { path: path.clone(), source });
            return ExitCode::from(1);
        }
    } else {
        println!("{text}");
    }
    ExitCode::from(if negative { 2 } else { 0 })
}

fn run(command: &Command) -> Result<(Body, String, bool), CliError> {
    match command {
        Command::Factor { n } => {
            let n = parse_int(n)?;
            let f = factor(&n)?;
            let doc = factorization_to_doc(&n, &f);
            let summary = render_factor(&doc);
            Ok((Body::Factor(doc), summary, false))
        }
        Command::QuadformSolve { form } => {
            let doc: FormDoc = read_doc(form)?;
            let parsed = doc.parse()?;
            let outcome = solution_to_doc(&solve(&parsed)?);
            let summary = render_solution(&outcome);
            let negative = matches!(outcome, SolutionDoc::Witness { .. });
            let body =
                Body::QuadformSolve(QuadformSolveDoc { problem: form_to_doc(&parsed), outcome });
            Ok((body, summary, negative))
        }
        Command::Conic { a, b, c } => {
            let (a, b, c) = (parse_rat(a)?, parse_rat(b)?, parse_rat(c)?);
            let form = QuadForm::from_diagonal(&[a.clone(), b.clone(), c.clone()])?;
            let outcome = solution_to_doc(&solve(&form)?);
            let summary = render_solution(&outcome);
            let negative = matches!(outcome, SolutionDoc::Witness { .. });
            let problem = ConicProblem {
                a: json::format_rat(&a),
                b: json::format_rat(&b),
                c: json::format_rat(&c),
            };
            Ok((Body::Conic(ConicDoc { problem, outcome }), summary, negative))
        }
        Command::Zerodiv { algebra, emit_isomorphism } => {
            let (doc, summary, negative) = split_command(algebra, *emit_isomorphism)?;
            Ok((Body::Zerodiv(doc), summary, negative))
        }
        Command::Isomorphism { algebra } => {
            let (doc, summary, negative) = split_command(algebra, true)?;
            Ok((Body::Isomorphism(doc), summary, negative))
        }
        Command::ConicExt { d, alpha, beta } => {
            let field = QuadField::new(parse_int(d)?)?;
            let alpha = parse_scalar_arg(alpha)?.to_qf(&field)?;
            let beta = parse_scalar_arg(beta)?.to_qf(&field)?;
            let problem = ConicExtProblem {
                d: json::format_int(field.d()),
                alpha: ScalarDoc::from_qf(&alpha),
                beta: ScalarDoc::from_qf(&beta),
            };
            match solve_conic_quadfield(&alpha, &beta)? {
                ConicOutcome::Solution(point) => {
                    let summary = format!(
                        "point: ({})",
                        point.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
                    );
                    let outcome = ConicExtOutcome::Solution {
                        solution: point.iter().map(ScalarDoc::from_qf).collect(),
                    };
                    Ok((Body::ConicExt(ConicExtDoc { problem, outcome }), summary, false))
                }
                ConicOutcome::NoSolution(cert) => {
                    let doc = certificate_to_doc(&cert);
                    let summary = format!("no points: {}", render_certificate(&doc));
                    let outcome = ConicExtOutcome::Certificate { certificate: doc };
                    Ok((Body::ConicExt(ConicExtDoc { problem, outcome }), summary, true))
                }
            }
        }
        Command::Verify { file } => {
            let text = fs::read_to_string(file)
                .map_err(|source| CliError::Read { path: file.clone(), source })?;
            let doc = from_json(&text)?;
            let checked = verify_document(&doc.body)?;
            let summary = format!("verified {checked} document");
            let body = Body::Verify(VerifyDoc { checked: checked.to_string(), verified: true });
            Ok((body, summary, false))
        }
    }
}

fn read_doc<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text =
        fs::read_to_string(path).map_err(|source| CliError::Read { path: path.clone(), source })?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("cannot parse {}: {e}", path.display())))
}

/// Accepts a rational like "-1/2" or a JSON object {"a": ..., "b": ...}.
fn parse_scalar_arg(s: &str) -> Result<ScalarDoc, CliError> {
    let t = s.trim();
    if t.starts_with('{') {
        serde_json::from_str(t)
            .map_err(|e| CliError::Invalid(format!("cannot parse scalar '{t}': {e}")))
    } else {
        Ok(ScalarDoc::from_rat(&parse_rat(t)?))
    }
}

fn split_command(path: &PathBuf, with_iso: bool) -> Result<(SplitDoc, String, bool), CliError> {
    let doc: json::AlgebraDoc = read_doc(path)?;
    let AlgebraInput::Quadratic(alg) = doc.parse()? else {
        return Err(CliError::Invalid(
            "this command needs a base field Q(sqrt(d)); use \"base\": {\"d\": ...}".to_string(),
        ));
    };
    let problem = algebra_to_doc(&alg);
    let result =
        if with_iso { zero_divisor_with_isomorphism(&alg) } else { zero_divisor(&alg) };
    match result {
        Ok(res) => {
            let coords = res
                .zero_divisor
                .coords
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            let mut summary = format!("zero divisor (branch {}): [{coords}]", res.branch);
            if let Some(iso) = &res.isomorphism {
                for (k, m) in iso.images.iter().enumerate() {
                    summary.push_str(&format!("\nbasis image {k}: {}", render_matrix(m)));
                }
            }
            let outcome = result_to_outcome_doc(&res);
            Ok((SplitDoc { problem, outcome }, summary, false))
        }
        Err(PipelineError::NotSplit(cert)) => {
            let cert_doc = certificate_to_doc(&cert);
            let summary = format!("division algebra: {}", render_certificate(&cert_doc));
            let outcome = certificate_to_outcome_doc(&cert);
            Ok((SplitDoc { problem, outcome }, summary, true))
        }
        Err(e) => Err(e.into()),
    }
}

fn render_factor(doc: &json::FactorDoc) -> String {
    let mut parts = Vec::new();
    if doc.sign == "-1" {
        parts.push("-1".to_string());
    }
    for entry in &doc.factors {
        if entry.exponent == "1" {
            parts.push(entry.prime.clone());
        } else {
            parts.push(format!("{}^{}", entry.prime, entry.exponent));
        }
    }
    if parts.is_empty() {
        parts.push("1".to_string());
    }
    let mut out = format!("{} = {}", doc.problem.n, parts.join(" * "));
    if !doc.certified {
        out.push_str("\n(warning: factorization not certified within the time budget)");
    }
    out
}

fn render_solution(doc: &SolutionDoc) -> String {
    match doc {
        SolutionDoc::Vector { vector } => format!("isotropic: ({})", vector.join(", ")),
        SolutionDoc::Witness { witness } => {
            format!("anisotropic at {}: {}", witness.place, render_reason(&witness.reason))
        }
    }
}

fn render_reason(reason: &ReasonDoc) -> String {
    match reason {
        ReasonDoc::Definite => "the form is definite over the reals".to_string(),
        ReasonDoc::NonSquareClass { value } => {
            format!("the class {value} is not a local square")
        }
        ReasonDoc::NonResidue { value } => {
            format!("{value} is not a quadratic residue at the place")
        }
        ReasonDoc::HasseMismatch { epsilon, required } => {
            format!("the Hasse symbol is {epsilon} but isotropy needs {required}")
        }
    }
}

fn render_certificate(doc: &CertificateDoc) -> String {
    format!(
        "stage {} certificate, anisotropic at {}: {}",
        doc.stage,
        doc.witness.place,
        render_reason(&doc.witness.reason)
    )
}

fn render_matrix(m: &[Vec<QFElem>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|row| {
            format!("[{}]", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Re-derives every claim in a document from scratch: roots evaluate to
/// zero, witnesses fail the local isotropy test, zero divisors are
/// nonzero with singular regular representation, and isomorphisms pass
/// the unital and multiplicativity checks.
fn verify_document(body: &Body) -> Result<&'static str, CliError> {
    let fail = |msg: String| Err(CliError::Invalid(msg));
    match body {
        Body::Factor(doc) => {
            let n = parse_int(&doc.problem.n)?;
            let sign: i8 = match doc.sign.as_str() {
                "1" => 1,
                "-1" => -1,
                other => return fail(format!("bad sign '{other}'")),
            };
            let mut product = Int::from(sign);
            for entry in &doc.factors {
                let p = parse_int(&entry.prime)?;
                let e: u32 = entry
                    .exponent
                    .parse()
                    .map_err(|_| CliError::Invalid(format!("bad exponent '{}'", entry.exponent)))?;
                if e == 0 {
                    return fail(format!("factor {p} has exponent 0"));
                }
                if doc.certified && !is_prime(&p) {
                    return fail(format!("claimed factor {p} is not prime"));
                }
                if p < Int::from(2) {
                    return fail(format!("claimed factor {p} is not positive"));
                }
                for _ in 0..e {
                    product = &product * &p;
                }
            }
            if product != n {
                return fail(format!("the factors multiply to {product}, not {n}"));
            }
            Ok("factor")
        }
        Body::QuadformSolve(doc) => {
            let form = doc.problem.parse()?;
            check_solution(&form, &doc.outcome)?;
            Ok("quadform-solve")
        }
        Body::Conic(doc) => {
            let form = QuadForm::from_diagonal(&[
                parse_rat(&doc.problem.a)?,
                parse_rat(&doc.problem.b)?,
                parse_rat(&doc.problem.c)?,
            ])?;
            check_solution(&form, &doc.outcome)?;
            Ok("conic")
        }
        Body::Zerodiv(doc) => {
            check_split_doc(doc, false)?;
            Ok("zerodiv")
        }
        Body::Isomorphism(doc) => {
            check_split_doc(doc, true)?;
            Ok("isomorphism")
        }
        Body::ConicExt(doc) => {
            let field = QuadField::new(parse_int(&doc.problem.d)?)?;
            let alpha = doc.problem.alpha.to_qf(&field)?;
            let beta = doc.problem.beta.to_qf(&field)?;
            match &doc.outcome {
                ConicExtOutcome::Solution { solution } => {
                    if solution.len() != 3 {
                        return fail(format!("expected 3 coordinates, found {}", solution.len()));
                    }
                    let point = solution
                        .iter()
                        .map(|s| s.to_qf(&field))
                        .collect::<Result<Vec<_>, _>>()?;
                    if point.iter().all(|x| x.is_zero()) {
                        return fail("the claimed point is zero".to_string());
                    }
                    let sq = |x: &QFElem| x.mul(x);
                    let lhs = alpha.mul(&sq(&point[0])?)?.add(&beta.mul(&sq(&point[1])?)?)?;
                    if lhs != sq(&point[2])? {
                        return fail("the claimed point is not on the conic".to_string());
                    }
                }
                ConicExtOutcome::Certificate { certificate } => {
                    check_certificate(&certificate.parse()?)?;
                }
            }
            Ok("conic-ext")
        }
        Body::Verify(_) => fail("a verify document cannot itself be verified".to_string()),
    }
}

fn check_solution(form: &QuadForm, outcome: &SolutionDoc) -> Result<(), CliError> {
    match outcome.parse()? {
        ParsedSolution::Vector(v) => {
            if v.len() != form.n() {
                return Err(CliError::Invalid(format!(
                    "expected {} coordinates, found {}",
                    form.n(),
                    v.len()
                )));
            }
            if v.iter().all(|x| *x == Int::from(0)) {
                return Err(CliError::Invalid("the claimed root is zero".to_string()));
            }
            if form.evaluate_int(&v)? != irat(0) {
                return Err(CliError::Invalid("the claimed root does not vanish".to_string()));
            }
            Ok(())
        }
        ParsedSolution::Witness(w) => {
            if is_isotropic_local(&diagonalize(form), &w.place)? {
                return Err(CliError::Invalid(format!(
                    "the form is isotropic at {}, the witness is wrong",
                    w.place
                )));
            }
            Ok(())
        }
    }
}

fn check_certificate(cert: &NotSplitCertificate) -> Result<(), CliError> {
    if cert.stage != 2 && cert.stage != 4 {
        return Err(CliError::Invalid(format!("unknown certificate stage {}", cert.stage)));
    }
    if is_isotropic_local(&diagonalize(&cert.form), &cert.witness.place)? {
        return Err(CliError::Invalid(format!(
            "the certified form is isotropic at {}, the witness is wrong",
            cert.witness.place
        )));
    }
    Ok(())
}

fn check_split_doc(doc: &SplitDoc, require_iso: bool) -> Result<(), CliError> {
    let AlgebraInput::Quadratic(alg) = doc.problem.parse()? else {
        return Err(CliError::Invalid("the algebra must be over Q(sqrt(d))".to_string()));
    };
    let field = alg.one().coords[0].field.clone();
    match doc.outcome.parse(&field)? {
        ParsedOutcome::Split { zero_divisor, isomorphism, .. } => {
            if zero_divisor.is_zero() {
                return Err(CliError::Invalid("the claimed zero divisor is zero".to_string()));
            }
            let rep = alg.regular_rep(&zero_divisor);
            if !quatsplit::linalg::det(&rep).is_zero() {
                return Err(CliError::Invalid(
                    "the claimed zero divisor is invertible".to_string(),
                ));
            }
            if require_iso && isomorphism.is_none() {
                return Err(CliError::Invalid(
                    "an isomorphism document must contain the isomorphism".to_string(),
                ));
            }
            if let Some(iso) = isomorphism {
                check_isomorphism(&alg, &iso)?;
            }
            Ok(())
        }
        ParsedOutcome::Certificate(cert) => check_certificate(&cert),
    }
}
