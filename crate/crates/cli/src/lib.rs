//! Command-line front end.
//!
//! Each subcommand reads one JSON document, runs one analysis and prints one
//! JSON object on stdout. Failures print `{"error": kind, "message": ...}` on
//! stderr and set the exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | usage error (unknown command, bad flag value) |
//! | 2 | unreadable input file or malformed document |
//! | 3 | the input violates a precondition of the analysis |
//! | 4 | precision exhausted |

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use hankel::inverse::{frobenius_check, solve_inverse, FreePolicy};
use hankel::iohvidov::{approx_sequence, characteristic, degree_profile, recurrence_coeffs};
use hankel::kronecker::hankel_rank;
use hankel::measure::{recover_measure, verify_moments};
use hankel::scalar::{check_precision, format_rational, parse_real, DEFAULT_PRECISION};
use hankel::{
    determinant_transform, io, jacobi_from_moments, moments_from_jacobi, poly_p, poly_q, Error,
    Float, MomentSequence,
};
use serde_json::{json, Map, Value};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_PRECISION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "hankel",
    version,
    about = "Exact Hankel determinant analysis of moment sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hankel determinants D_n and shifted determinants D'_n.
    Det { input: PathBuf },
    /// Determinant polynomials P_n and second-kind polynomials Q_n.
    Poly {
        input: PathBuf,
        /// Largest n; defaults to the largest the prefix supports.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Jacobi coefficients of a quasi-definite sequence, or moments from
    /// Jacobi coefficients with --invert.
    Jacobi {
        input: PathBuf,
        #[arg(long)]
        invert: bool,
        /// Number of coefficient pairs; defaults to all the prefix supports.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Rank-r approximating sequence and the characteristic.
    Approx {
        input: PathBuf,
        #[arg(long)]
        r: usize,
        /// Number of terms to output; defaults to the input length.
        #[arg(long)]
        len: Option<usize>,
    },
    /// Finite-rank certificate.
    Rank { input: PathBuf },
    /// Degree and gap structure of the determinant polynomials.
    Profile { input: PathBuf },
    /// Solvability of a prescribed determinant sequence, and a solution with
    /// --construct.
    Solve {
        input: PathBuf,
        #[arg(long)]
        construct: bool,
        /// Overrides the policy field of the document.
        #[arg(long)]
        policy: Option<String>,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision_bits: u32,
        #[arg(long, default_value = "1e-30")]
        tol: String,
    },
    /// Atoms and weights of a finitely supported positive measure.
    Measure {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision_bits: u32,
        #[arg(long, default_value = "1e-20")]
        tol: String,
    },
}

/// What a run produced: the exit code and the exact bytes for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn success(value: &Value) -> Self {
        Outcome {
            code: 0,
            stdout: format!("{value}\n"),
            stderr: String::new(),
        }
    }

    fn failure(code: i32, value: &Value) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("{value}\n"),
        }
    }
}

struct Failure {
    code: i32,
    body: Value,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            body: json!({"error": "usage", "message": message.into()}),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_PARSE,
            Error::PrecisionExhausted { .. } => EXIT_PRECISION,
            _ => EXIT_PRECONDITION,
        };
        let mut body = json!({"error": e.kind(), "message": e.to_string()});
        if let Error::NotSolvable(v) = &e {
            body["violation"] = serde_json::to_value(v).expect("serializable");
        }
        Failure { code, body }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::failure(code, &json!({"error": "usage", "message": text.trim_end()}))
            };
        }
    };
    match dispatch(cli.command) {
        Ok(value) => Outcome::success(&value),
        Err(f) => Outcome::failure(f.code, &f.body),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_PARSE,
        body: json!({
            "error": "io_error",
            "message": format!("cannot read {}: {e}", path.display()),
        }),
    })
}

fn read_sequence(path: &Path) -> Result<MomentSequence, Failure> {
    Ok(io::parse_sequence(&read_input(path)?)?)
}

fn precision_flag(bits: u32) -> Result<u32, Failure> {
    check_precision(bits).map_err(|e| Failure::usage(e.to_string()))
}

fn tol_flag(text: &str, prec: u32) -> Result<Float, Failure> {
    match parse_real(text, prec) {
        Ok(tol) if tol >= 0 => Ok(tol),
        _ => Err(Failure::usage(format!(
            "--tol expects a non-negative decimal, got {text:?}"
        ))),
    }
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("result types serialize")
}

fn strings(values: &[hankel::Rational]) -> Value {
    Value::Array(
        values
            .iter()
            .map(|x| Value::String(format_rational(x)))
            .collect(),
    )
}

fn dispatch(command: Command) -> Result<Value, Failure> {
    match command {
        Command::Det { input } => {
            let s = read_sequence(&input)?;
            Ok(to_value(&determinant_transform(&s)))
        }
        Command::Poly { input, max_n } => {
            let s = read_sequence(&input)?;
            let top = max_n.unwrap_or(s.len() / 2);
            let mut p = Vec::with_capacity(top + 1);
            let mut q = Vec::with_capacity(top + 1);
            for n in 0..=top {
                p.push(to_value(&poly_p(&s, n)?));
                q.push(to_value(&poly_q(&s, n)?));
            }
            Ok(json!({"P": p, "Q": q}))
        }
        Command::Jacobi {
            input,
            invert: true,
            max_n,
        } => {
            if max_n.is_some() {
                return Err(Failure::usage("--max-n does not apply with --invert"));
            }
            let j = io::parse_jacobi(&read_input(&input)?)?;
            let s = moments_from_jacobi(&j)?;
            Ok(json!({"sequence": strings(s.terms())}))
        }
        Command::Jacobi {
            input,
            invert: false,
            max_n,
        } => {
            let s = read_sequence(&input)?;
            let count = max_n.unwrap_or(s.len() / 2);
            Ok(to_value(&jacobi_from_moments(&s, count)?))
        }
        Command::Approx { input, r, len } => {
            let s = read_sequence(&input)?;
            let len = len.unwrap_or(s.len());
            if len == 0 {
                return Err(Failure::usage("--len must be positive"));
            }
            let ar = recurrence_coeffs(&s, r)?;
            let approx = approx_sequence(&s, r, len - 1)?;
            Ok(json!({
                "r": r,
                "d": strings(&ar.d),
                "sequence": strings(approx.terms()),
                "characteristic": to_value(&characteristic(&s, r)?),
            }))
        }
        Command::Rank { input } => {
            let s = read_sequence(&input)?;
            Ok(to_value(&hankel_rank(&s)))
        }
        Command::Profile { input } => {
            let s = read_sequence(&input)?;
            Ok(to_value(&degree_profile(&s)?))
        }
        Command::Solve {
            input,
            construct,
            policy,
            precision_bits,
            tol,
        } => {
            let prec = precision_flag(precision_bits)?;
            let tol = tol_flag(&tol, prec)?;
            let override_policy = policy
                .map(|p| p.parse::<FreePolicy>())
                .transpose()
                .map_err(|e| Failure::usage(e.to_string()))?;
            let (t, doc_policy) = io::parse_target(&read_input(&input)?)?;
            let policy = override_policy.unwrap_or(doc_policy);
            let report = frobenius_check(&t);
            if let Some(v) = &report.violation {
                return Err(Error::NotSolvable(v.clone()).into());
            }
            if !construct {
                return Ok(to_value(&report));
            }
            let solution = solve_inverse(&t, policy, prec, &tol)?;
            let mut out = match to_value(&solution) {
                Value::Object(map) => map,
                _ => Map::new(),
            };
            out.insert("policy".into(), to_value(&policy));
            out.insert("report".into(), to_value(&report));
            Ok(Value::Object(out))
        }
        Command::Measure {
            input,
            precision_bits,
            tol,
        } => {
            let prec = precision_flag(precision_bits)?;
            let tol = tol_flag(&tol, prec)?;
            let s = read_sequence(&input)?;
            let m = recover_measure(&s, prec)?;
            let check = verify_moments(&m, &s, &tol);
            let passed = check.passed;
            let mut out = match to_value(&m) {
                Value::Object(map) => map,
                _ => Map::new(),
            };
            out.insert("moments".into(), to_value(&check));
            let out = Value::Object(out);
            if passed {
                Ok(out)
            } else {
                Err(Failure {
                    code: EXIT_PRECISION,
                    body: json!({
                        "error": "moment_check_failed",
                        "message": "recovered measure does not reproduce the moments within tolerance",
                        "result": out,
                    }),
                })
            }
        }
    }
}
