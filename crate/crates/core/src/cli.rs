//! Command-line front end. Exit codes: 0 pass, 1 failure, 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::AlgebraError;
use crate::ore::DEFAULT_NILPOTENCY_BOUND;
use crate::parse::parse_expr;
use crate::pdda::one_step_forms;
use crate::quotient::{Params, Quotient};
use crate::rational::Rational;
use crate::schema::{Algebra, TorusFile};
use crate::suites::{self, Options, DEFAULT_SEED};
use crate::torus::{decompose_derivation, TorusStructure};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "poisson-forge", version, about = "Exact verification of Poisson algebra identities")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Report wall-clock time per suite.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites (`all` runs every suite).
    Verify {
        #[arg(required = true, value_name = "SUITE")]
        suites: Vec<String>,
        /// Seed for the randomized roundtrips.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Algebra definition used by the `jacobi` and `grading` suites.
        #[arg(long)]
        algebra: Option<PathBuf>,
    },
    /// Print `{f, g}`.
    Bracket {
        f: String,
        g: String,
        #[arg(long)]
        algebra: Option<PathBuf>,
    },
    /// Normal form in the quotient by `Omega1 - alpha`, `Omega2 - beta`.
    Nf {
        expr: String,
        /// A rational value, or any other word to keep the parameter symbolic.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
    },
    /// Split a torus derivation into hamiltonian and central parts.
    Decompose {
        #[arg(long)]
        file: PathBuf,
    },
    /// Print the scalars `eta_i` of the Ore presentation.
    Eta {
        #[arg(long)]
        algebra: Option<PathBuf>,
    },
    /// Dump every step of the deleting-derivations chain.
    Chain {
        #[arg(long)]
        algebra: Option<PathBuf>,
    },
}

/// Parse arguments and run; everything is written to `out`/`err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                AlgebraError::Compatibility(_) => EXIT_FAIL,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn read(path: &Path) -> Result<String, AlgebraError> {
    std::fs::read_to_string(path).map_err(|e| AlgebraError::Input(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Option<PathBuf>) -> Result<Option<Algebra>, AlgebraError> {
    path.as_ref().map(|p| Algebra::from_json(&read(p)?)).transpose()
}

fn parse_param(v: &Option<String>) -> Option<Rational> {
    v.as_ref().and_then(|s| s.parse().ok())
}

fn emit(out: &mut dyn Write, format: Format, text: &str, value: impl serde::Serialize) -> Result<(), AlgebraError> {
    let written = match format {
        Format::Text => writeln!(out, "{text}"),
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json")),
    };
    match written {
        // a closed pipe (e.g. `| head`) is not an error of ours
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(AlgebraError::Input(e.to_string())),
        _ => Ok(()),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, AlgebraError> {
    match &cli.command {
        Command::Verify { suites: names, seed, algebra } => {
            let names = suites::resolve(names)?;
            let opts = Options { seed: *seed, algebra: load_algebra(algebra)?, timing: cli.timing };
            let report = suites::run(&names, &opts)?;
            emit(out, cli.format, report.to_string().trim_end(), &report)?;
            Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Bracket { f, g, algebra } => {
            let a = load_algebra(algebra)?.unwrap_or_else(Algebra::builtin);
            let ctx = a.context();
            let gens: Vec<&str> = ctx.generators().map(|i| ctx.name(i)).collect();
            let s = a.structure.localized(&gens)?;
            let f = parse_expr(f, s.context())?;
            let g = parse_expr(g, s.context())?;
            let r = s.bracket(&f, &g).to_string();
            emit(out, cli.format, &r, json!({ "bracket": r }))?;
            Ok(EXIT_PASS)
        }
        Command::Nf { expr, alpha, beta } => {
            let q = Quotient::new();
            let params = Params { alpha: parse_param(alpha), beta: parse_param(beta) };
            let r = q.reduce(&q.parse(expr)?, &params)?.to_string();
            emit(out, cli.format, &r, json!({ "normal_form": r }))?;
            Ok(EXIT_PASS)
        }
        Command::Decompose { file } => {
            let spec: TorusFile =
                serde_json::from_str(&read(file)?).map_err(|e| AlgebraError::Input(format!("{}: {e}", file.display())))?;
            let (t, d) = TorusStructure::from_file(&spec)?;
            let d = d.ok_or_else(|| AlgebraError::Input("derivation file has no images".into()))?;
            let dec = decompose_derivation(&d, &t)?;
            let ctx = t.context();
            let mut text = format!("gamma = {}", dec.gamma);
            let mut theta = serde_json::Map::new();
            for (i, th) in dec.theta.iter().enumerate() {
                text.push_str(&format!("\ntheta({}) = {th}", ctx.name(i)));
                theta.insert(ctx.name(i).to_string(), json!(th.to_string()));
            }
            emit(out, cli.format, &text, json!({ "gamma": dec.gamma.to_string(), "theta": theta }))?;
            Ok(EXIT_PASS)
        }
        Command::Eta { algebra } => {
            let a = load_algebra(algebra)?.unwrap_or_else(Algebra::builtin);
            let ore = a.ore.ok_or_else(|| AlgebraError::Input("algebra has no Ore data".into()))?;
            let mut lines = Vec::new();
            let mut map = serde_json::Map::new();
            for i in 1..ore.len() {
                let name = format!("eta{}", i + 1);
                match ore.compute_eta(i) {
                    Ok(v) => {
                        lines.push(format!("{name}: {v}"));
                        map.insert(name, json!(v.to_string()));
                    }
                    Err(AlgebraError::EtaUndefined(_)) => {
                        lines.push(format!("{name}: undefined"));
                        map.insert(name, serde_json::Value::Null);
                    }
                    Err(e) => return Err(e),
                }
            }
            emit(out, cli.format, &lines.join("\n"), serde_json::Value::Object(map))?;
            Ok(EXIT_PASS)
        }
        Command::Chain { algebra } => {
            let a = load_algebra(algebra)?.unwrap_or_else(Algebra::builtin);
            let ore = a.ore.ok_or_else(|| AlgebraError::Input("algebra has no Ore data".into()))?.with_computed_eta()?;
            let mut text = Vec::new();
            let mut levels = Vec::new();
            for level in (2..=ore.len()).rev() {
                let f = one_step_forms(&ore, level, DEFAULT_NILPOTENCY_BOUND)?;
                text.push(format!("# level {level} (variables are the level-{} generators)", level + 1));
                let mut forms = serde_json::Map::new();
                for (i, form) in f.forms.iter().enumerate() {
                    let key = format!("X_{{{},{level}}}", i + 1);
                    text.push(format!("{key} = {form}"));
                    forms.insert(key, json!(form.to_string()));
                }
                levels.push(json!({ "level": level, "forms": forms }));
            }
            emit(out, cli.format, &text.join("\n"), json!({ "levels": levels }))?;
            Ok(EXIT_PASS)
        }
    }
}

/// Cap the global thread pool from `POISSON_FORGE_THREADS`, if set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("POISSON_FORGE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}
