//! The `charclass` command line: parse classes, run the engine, print.
//!
//! [`run`] is the whole program minus process plumbing, so tests can drive
//! it in-process.

pub mod elaborate;
pub mod json;
pub mod parse;

use std::path::PathBuf;

use charclass_core::bundlecalc::{self, evaluate_class};
use charclass_core::complexifiability::{
    express_via_chern, ideal_decomposition, is_complexifiable_integral, is_complexifiable_mod2,
    subring_decomposition,
};
use charclass_core::feshbach::{rho, Rank};
use charclass_core::steenrod::sq1;
use charclass_core::verify::{self, Suite, VerifyConfig};
use charclass_core::{AmbientPoly, ChernExpr, MPoly2, RingContext};
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::elaborate::{elaborate, Class, ElaborateError, Mode};
use crate::json::JsonError;
use crate::parse::ParseError;

pub const DEFAULT_DEGREE: u32 = 24;

/// Largest `m` accepted in `--bundle roots:<m>`; the splitting ring grows like
/// `binomial(m, degree)`.
pub const MAX_ROOTS: u32 = 32;

#[derive(Debug, Parser)]
#[command(name = "charclass", version, about = "Characteristic classes of real bundles and their complexifications")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// A class in text syntax, or its JSON form (anything starting with `{`).
    #[arg(long)]
    pub expr: String,
    /// Degree cap of the working ring.
    #[arg(long, env = "CHARCLASS_DEFAULT_DEGREE", default_value_t = DEFAULT_DEGREE)]
    pub degree: u32,
    /// Print results as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a mod-2 class on a bundle.
    Eval {
        #[command(flatten)]
        input: Input,
        /// universal, trivial, fiber, or roots:<m>
        #[arg(long, default_value = "universal")]
        bundle: String,
        #[arg(long)]
        rank: Option<u32>,
    },
    /// Apply the Steenrod square Sq^1.
    Sq1 {
        #[command(flatten)]
        input: Input,
    },
    /// Reduce an integral class mod 2.
    Rho {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        rank: Option<u32>,
    },
    /// Decide whether a class is a characteristic class of complexification.
    Complexifiable {
        #[command(flatten)]
        input: Input,
        /// Treat the expression as an integral class.
        #[arg(long)]
        integral: bool,
        #[arg(long)]
        rank: Option<u32>,
    },
    /// Write a mod-2 class in the squares subring, or in the ideal of squares.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        ideal: bool,
    },
    /// Express a complexifiable integral class through Chern classes.
    ChernExpress {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        rank: Option<u32>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, env = "CHARCLASS_DEFAULT_DEGREE", default_value_t = DEFAULT_DEGREE)]
        degree: u32,
        #[arg(long, default_value_t = 8)]
        rank: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print the JSON report instead of the summary line.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Elaborate(#[from] ElaborateError),
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] charclass_core::Error),
    #[error("cannot write report {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Elaborate(ElaborateError::Core(charclass_core::Error::CoefficientOverflow)) => 2,
            _ => 1,
        }
    }
}

/// What the process should print and return.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run one command line (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 1 } else { 0 };
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    match execute(&cli.command) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn line(s: impl std::fmt::Display) -> String {
    format!("{s}\n")
}

fn rank_of(rank: Option<u32>) -> Rank {
    rank.map_or(Rank::Infinite, Rank::Finite)
}

/// Read `--expr` as text or JSON and bring it into the working ring.
pub fn read_class(text: &str, mode: Mode, ctx: &RingContext) -> Result<Class, CliError> {
    if !text.trim_start().starts_with('{') {
        return Ok(elaborate(&parse::parse(text)?, mode, ctx)?);
    }
    match (json::from_json(text)?, mode) {
        (Class::Mod2(_), Mode::Integral) => Err(ElaborateError::NotIntegral("a mod2 JSON class".into()).into()),
        (Class::Integral(_), Mode::Mod2) => Err(ElaborateError::NotMod2("an integral JSON class".into()).into()),
        (Class::Mod2(p), _) => Ok(Class::Mod2(p.reduce(ctx))),
        (Class::Integral(c), _) => {
            c.validate(ctx.rank_cap.map_or(Rank::Infinite, Rank::Finite))
                .map_err(ElaborateError::from)?;
            Ok(Class::Integral(c))
        }
    }
}

fn mod2(text: &str, ctx: &RingContext) -> Result<MPoly2, CliError> {
    match read_class(text, Mode::Mod2, ctx)? {
        Class::Mod2(p) => Ok(p),
        Class::Integral(_) => unreachable!("mode is mod2"),
    }
}

fn integral(text: &str, ctx: &RingContext) -> Result<charclass_core::IntClass, CliError> {
    match read_class(text, Mode::Integral, ctx)? {
        Class::Integral(c) => Ok(c),
        Class::Mod2(_) => unreachable!("mode is integral"),
    }
}

fn render_mod2(p: MPoly2, as_json: bool) -> Result<String, CliError> {
    let c = Class::Mod2(p);
    Ok(line(if as_json { json::to_json(&c)? } else { c.to_string() }))
}

fn parse_bundle(spec: &str, ctx: &RingContext) -> Result<bundlecalc::FormalBundle, CliError> {
    Ok(match spec {
        "universal" => bundlecalc::universal_bundle(ctx)?,
        "trivial" => bundlecalc::trivial_bundle(),
        "fiber" => bundlecalc::fiber_bundle(ctx)?,
        other => {
            let m = other
                .strip_prefix("roots:")
                .and_then(|m| m.parse::<u32>().ok())
                .filter(|&m| m <= MAX_ROOTS)
                .ok_or_else(|| CliError::Usage(format!("unknown bundle `{other}`")))?;
            bundlecalc::roots_bundle(m, ctx)
        }
    })
}

fn chern_json(e: &ChernExpr) -> Result<String, CliError> {
    #[derive(serde::Serialize)]
    struct Free<'a> {
        coeff: i64,
        c: &'a [(u32, u32)],
    }
    let free: Vec<Free> = e.free_expr().map(|(m, coeff)| Free { coeff, c: m.exponents() }).collect();
    let torsion = json::to_json(&Class::Mod2(e.torsion_expr().poly_in_u().clone()))?;
    let free = serde_json::to_string(&free).expect("plain data serializes");
    Ok(format!(r#"{{"free":{free},"torsion":{torsion},"lift":{}}}"#, e.lift_marker()))
}

fn execute(cmd: &Command) -> Result<(i32, String), CliError> {
    let out = match cmd {
        Command::Eval { input, bundle, rank } => {
            let mut ctx = RingContext::with_degree_cap(input.degree);
            ctx.rank_cap = *rank;
            let c = mod2(&input.expr, &ctx)?;
            let b = parse_bundle(bundle, &ctx)?;
            match evaluate_class(&c, &b, &ctx)? {
                AmbientPoly::Mod2(p) => render_mod2(p, input.json)?,
                AmbientPoly::Ext(p) if input.json => {
                    return Err(CliError::Usage(format!("value {p} in the exterior ring has no JSON form")))
                }
                AmbientPoly::Ext(p) => line(p),
            }
        }
        Command::Sq1 { input } => {
            let ctx = RingContext::with_degree_cap(input.degree);
            render_mod2(sq1(&mod2(&input.expr, &ctx)?, &ctx)?, input.json)?
        }
        Command::Rho { input, rank } => {
            let ctx = rank_of(*rank).context(Some(input.degree));
            render_mod2(rho(&integral(&input.expr, &ctx)?, &ctx), input.json)?
        }
        Command::Complexifiable { input, integral: forced, rank } => {
            let ctx = rank_of(*rank).context(Some(input.degree));
            let mode = if *forced { Mode::Integral } else { Mode::Auto };
            let verdict = match read_class(&input.expr, mode, &ctx)? {
                Class::Mod2(p) => is_complexifiable_mod2(&p),
                Class::Integral(c) => is_complexifiable_integral(&c, &ctx)?,
            };
            line(verdict)
        }
        Command::Decompose { input, ideal } => {
            let ctx = RingContext::with_degree_cap(input.degree);
            let c = mod2(&input.expr, &ctx)?;
            if *ideal {
                let parts = ideal_decomposition(&c)?;
                if input.json {
                    let items = parts
                        .iter()
                        .map(|(i, r)| {
                            let r = json::to_json(&Class::Mod2(r.clone()))?;
                            Ok(format!("{{\"square\":{i},\"cofactor\":{r}}}"))
                        })
                        .collect::<Result<Vec<_>, CliError>>()?;
                    line(format!("[{}]", items.join(",")))
                } else if parts.is_empty() {
                    line(0)
                } else {
                    let terms: Vec<String> = parts.iter().map(|(i, r)| format!("w{i}^2*({r})")).collect();
                    line(terms.join(" + "))
                }
            } else {
                let s = subring_decomposition(&c)?;
                if input.json {
                    render_mod2(s.poly_in_u().clone(), true)?
                } else {
                    line(s)
                }
            }
        }
        Command::ChernExpress { input, rank } => {
            let ctx = rank_of(*rank).context(Some(input.degree));
            let e = express_via_chern(&integral(&input.expr, &ctx)?, &ctx)?;
            line(if input.json { chern_json(&e)? } else { e.to_string() })
        }
        Command::Verify {
            suite,
            degree,
            rank,
            seed,
            report,
            json,
        } => {
            let cfg = VerifyConfig {
                degree: *degree,
                rank: *rank,
                seed: *seed,
            };
            let r = verify::run(*suite, &cfg);
            let text = r.to_json();
            if let Some(path) = report {
                std::fs::write(path, format!("{text}\n")).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
            }
            let s = r.summary();
            let out = if *json {
                line(text)
            } else {
                line(format!(
                    "suite {}: {} pass, {} fail, {} expected-mismatch",
                    r.suite(),
                    s.pass,
                    s.fail,
                    s.expected_mismatch
                ))
            };
            return Ok((if r.passed() { 0 } else { 3 }, out));
        }
    };
    Ok((0, out))
}
