//! Command-line front end: expression parsing, command dispatch and output.

pub mod parse;

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use symtrace_core::ainfty::{enumerate_labeled_classes, enumerate_pbt, tree_sign};
use symtrace_core::cartan::{render_tensor, trace_cartan, CartanGen, DiagonalTraceValue};
use symtrace_core::cyclic::{build_connes_complex, homology, Ambient};
use symtrace_core::gcalg::{fmt_rational, Symbol};
use symtrace_core::resolution::render_aliased;
use symtrace_core::trace::{trace, TraceMethod};
use symtrace_core::verify::{self, VerificationReport};
use symtrace_core::{AlgebraElement, Error};

pub use parse::{parse_form, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "symtrace", version, about = "Exact reduced traces of polynomial differential forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Cs,
    Simple,
    Collapsed,
    Diffop,
}

impl From<Method> for TraceMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Cs => TraceMethod::ChernSimonsRaw,
            Method::Simple => TraceMethod::SimpleFormula,
            Method::Collapsed => TraceMethod::ChernSimonsCollapsed,
            Method::Diffop => TraceMethod::DiffOpLowDegree,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    Routes,
    Cstree,
    Conj1,
    Cartan,
    Derham,
    Resolution,
    Merkulov,
    Laws,
    Operators,
    Homology,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum AmbientArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "R", alias = "r")]
    R,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduced trace of a form
    Trace {
        #[arg(long, value_enum, default_value = "simple")]
        method: Method,
        /// Number of variables (default: largest index in the expression)
        #[arg(long)]
        vars: Option<u8>,
        /// Evaluate on h_n: `--cartan n=2 [q=1]` (all q when omitted)
        #[arg(long, num_args = 1..=2, value_name = "n=.. q=..")]
        cartan: Option<Vec<String>>,
        /// Print λ-generators in three variables as xi, theta, lambda, t
        #[arg(long)]
        aliases: bool,
        #[arg(long)]
        json: bool,
        expr: Option<String>,
    },
    /// Run a verification suite
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        vars: Option<u8>,
        #[arg(long)]
        weight: Option<usize>,
        #[arg(long)]
        deg: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        n: Option<u8>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Dimension table of reduced cyclic homology
    Homology {
        #[arg(long, value_enum)]
        ambient: AmbientArg,
        #[arg(long)]
        vars: u8,
        #[arg(long)]
        weight: usize,
        #[arg(long, default_value_t = 3)]
        deg: usize,
        #[arg(long)]
        json: bool,
    },
    /// Planar binary trees, signs and labelled classes
    Trees {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Command failures, mapped to exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Integrity(_)) => EXIT_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Serialize, Debug, PartialEq, Eq)]
pub struct JsonTerm {
    pub coeff: String,
    pub monomial: Vec<String>,
}

#[derive(Serialize, Debug, PartialEq, Eq)]
pub struct JsonTerms {
    pub terms: Vec<JsonTerm>,
}

fn factor_strings<S: Symbol>(factors: &[(S, u32)]) -> Vec<String> {
    factors.iter().map(|(g, e)| if *e == 1 { g.to_string() } else { format!("{g}^{e}") }).collect()
}

pub fn json_terms<S: Symbol>(e: &AlgebraElement<S>) -> JsonTerms {
    JsonTerms {
        terms: e
            .terms()
            .map(|(m, c)| JsonTerm { coeff: fmt_rational(c), monomial: factor_strings(m.factors()) })
            .collect(),
    }
}

#[derive(Serialize)]
struct JsonFailure<'a> {
    input: &'a str,
    expected: &'a str,
    got: &'a str,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    suite: &'a str,
    cases: usize,
    failure_count: usize,
    failures: Vec<JsonFailure<'a>>,
    wall_time_s: f64,
}

pub fn report_json(r: &VerificationReport) -> String {
    let j = JsonReport {
        suite: &r.suite,
        cases: r.cases,
        failure_count: r.failures.len(),
        failures: r
            .failures
            .iter()
            .map(|f| JsonFailure { input: &f.input, expected: &f.expected, got: &f.got })
            .collect(),
        wall_time_s: r.wall_time.as_secs_f64(),
    };
    serde_json::to_string_pretty(&j).expect("plain data")
}

pub fn report_text(r: &VerificationReport) -> String {
    let mut s = r.summary();
    for f in r.failures.iter().take(10) {
        s.push_str(&format!("\n  FAIL {}\n    expected: {}\n    got:      {}", f.input, f.expected, f.got));
    }
    if r.failures.len() > 10 {
        s.push_str(&format!("\n  ... {} more", r.failures.len() - 10));
    }
    s
}

fn parse_cartan(spec: &[String]) -> Result<(u8, Option<usize>), CliError> {
    let mut n = None;
    let mut q = None;
    for s in spec {
        let bad = || CliError::Usage(format!("bad --cartan argument '{s}', expected n=<int> or q=<int>"));
        let (k, v) = s.split_once('=').ok_or_else(bad)?;
        match k.trim() {
            "n" => n = Some(v.trim().parse::<u8>().map_err(|_| bad())?),
            "q" => q = Some(v.trim().parse::<usize>().map_err(|_| bad())?),
            _ => return Err(bad()),
        }
    }
    let n = n.ok_or_else(|| CliError::Usage("--cartan needs n=<int>".into()))?;
    if n == 0 {
        return Err(CliError::Usage("--cartan n must be at least 1".into()));
    }
    Ok((n, q))
}

/// Runs one command, writing its output; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Trace { method, vars, mut cartan, aliases, json, expr } => {
            // `--cartan n=2 "expr"`: the optional second value may have taken the expression
            let expr = match (expr, cartan.as_mut()) {
                (Some(e), _) => e,
                (None, Some(spec)) if spec.last().is_some_and(|s| !s.contains('=')) => spec.pop().expect("nonempty"),
                _ => return Err(CliError::Usage("missing expression".into())),
            };
            let nvars = match vars {
                Some(v) => v,
                None => parse::max_index(&expr)?,
            };
            let form = parse_form(&expr, nvars)?;
            if let Some(spec) = cartan {
                let (n, q) = parse_cartan(&spec)?;
                let v = match q {
                    Some(q) => trace_cartan(&form, n, q)?,
                    None => {
                        let top = form.body().terms().map(|(m, _)| m.length()).max().unwrap_or(0) + 1;
                        let mut acc = DiagonalTraceValue::zero();
                        for q in 0..=top {
                            acc += trace_cartan(&form, n, q)?;
                        }
                        acc
                    }
                };
                if json {
                    writeln!(out, "{}", serde_json::to_string(&json_terms::<CartanGen>(&v)).expect("plain data")).ok();
                } else {
                    writeln!(out, "{}", render_tensor(&v, n)).ok();
                }
                return Ok(EXIT_OK);
            }
            let t = trace(&form, method.into()).map_err(|e| match e {
                Error::UnsupportedDegree(m) => CliError::Usage(m),
                e => CliError::Core(e),
            })?;
            if json {
                writeln!(out, "{}", serde_json::to_string(&json_terms(&t)).expect("plain data")).ok();
            } else if aliases {
                writeln!(out, "{}", render_aliased(&t)).ok();
            } else {
                writeln!(out, "{t}").ok();
            }
            Ok(EXIT_OK)
        }
        Command::Verify { suite, vars, weight, deg, k, cap, n, q, json } => {
            let r = match suite {
                Suite::Routes => {
                    let (nv, w) = (vars.unwrap_or(3), weight.unwrap_or(4));
                    let mut r = verify::routes(nv, w, deg.unwrap_or(3))?;
                    r.merge(verify::low_degree(nv, w)?);
                    r
                }
                Suite::Cstree => verify::cstree(vars.unwrap_or(3), weight.unwrap_or(4), k.unwrap_or(3))?,
                Suite::Conj1 => verify::conj1(vars.unwrap_or(3), cap.unwrap_or(4))?,
                Suite::Cartan => verify::cartan(vars.unwrap_or(2), weight.unwrap_or(3), n.unwrap_or(3), q.unwrap_or(2))?,
                Suite::Derham => verify::derham(vars.unwrap_or(3), weight.unwrap_or(4))?,
                Suite::Resolution => verify::resolution(vars.unwrap_or(3), weight.unwrap_or(5))?,
                Suite::Merkulov => verify::merkulov(vars.unwrap_or(3), weight.unwrap_or(4), k.unwrap_or(3))?,
                Suite::Laws => {
                    let w = weight.unwrap_or(3);
                    let mut r = verify::two_variable(w)?;
                    r.merge(verify::three_variable(w)?);
                    r
                }
                Suite::Operators => verify::operator_identity(vars.unwrap_or(3), k.unwrap_or(3))?,
                Suite::Homology => verify::homology_crosscheck(vars.unwrap_or(2), weight.unwrap_or(4), deg.unwrap_or(3))?,
            };
            if json {
                writeln!(out, "{}", report_json(&r)).ok();
            } else {
                writeln!(out, "{}", report_text(&r)).ok();
            }
            Ok(if r.ok() { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Homology { ambient, vars, weight, deg, json } => {
            let amb = match ambient {
                AmbientArg::A => Ambient::A,
                AmbientArg::R => Ambient::R,
            };
            let h = homology(&build_connes_complex(amb, vars, weight, deg)?)?;
            if json {
                let rows: Vec<Vec<usize>> = (0..=deg).map(|d| (1..=weight).map(|w| h.dim(d, w)).collect()).collect();
                let j = serde_json::json!({ "ambient": format!("{amb:?}"), "vars": vars, "weights": (1..=weight).collect::<Vec<_>>(), "dims": rows });
                writeln!(out, "{j}").ok();
            } else {
                writeln!(out, "{:>6}{}", "deg\\w", (1..=weight).map(|w| format!("{w:>5}")).collect::<String>()).ok();
                for d in 0..=deg {
                    writeln!(out, "{:>6}{}", d, (1..=weight).map(|w| format!("{:>5}", h.dim(d, w))).collect::<String>()).ok();
                }
            }
            Ok(EXIT_OK)
        }
        Command::Trees { k, json } => {
            if k == 0 {
                return Err(CliError::Usage("--k must be at least 1".into()));
            }
            let trees = enumerate_pbt(k);
            let classes = enumerate_labeled_classes(k);
            // coefficient of h_{k-1}[..] in the trace: the root carries −h and the
            // leaves contribute (−1)^{k+1}
            let coef = |c: &symtrace_core::ainfty::LabeledTree| -> i8 {
                let s = c.label_sign() * tree_sign(&c.shape());
                if k % 2 == 0 {
                    s
                } else {
                    -s
                }
            };
            if json {
                let j = serde_json::json!({
                    "k": k,
                    "trees": trees.iter().map(|t| serde_json::json!({"tree": t.to_string(), "sign": tree_sign(t)})).collect::<Vec<_>>(),
                    "classes": classes.iter().map(|c| serde_json::json!({
                        "tree": c.shape().to_string(), "labels": c.labels(), "coeff": coef(c), "bracket": c.render_bracket()
                    })).collect::<Vec<_>>(),
                });
                writeln!(out, "{j}").ok();
                return Ok(EXIT_OK);
            }
            writeln!(out, "{} planar binary trees with {} leaves:", trees.len(), k + 1).ok();
            for (i, t) in trees.iter().enumerate() {
                writeln!(out, "  T{} {t} sign {:+}", i + 1, tree_sign(t)).ok();
            }
            writeln!(out, "{} labelled classes:", classes.len()).ok();
            for c in &classes {
                writeln!(out, "  {} labels {:?}", c.shape(), c.labels()).ok();
            }
            let terms: Vec<String> = classes
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let s = coef(c);
                    let sign = match (i, s > 0) {
                        (0, true) => "",
                        (0, false) => "-",
                        (_, true) => " + ",
                        (_, false) => " - ",
                    };
                    format!("{sign}{}", c.render_bracket())
                })
                .collect();
            let args = (1..=k).map(|i| format!("da{i}")).collect::<Vec<_>>().join(" ");
            writeln!(out, "Tr(a0 {args}) = {}", terms.join("")).ok();
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code
/// and everything written.
pub fn run_args<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    let mut buf = Vec::new();
    let code = match run(cli, &mut buf) {
        Ok(c) => c,
        Err(e) => {
            buf.extend_from_slice(format!("error: {e}\n").as_bytes());
            e.exit_code()
        }
    };
    (code, String::from_utf8(buf).expect("utf-8 output"))
}
