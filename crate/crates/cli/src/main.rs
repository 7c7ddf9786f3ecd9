//! `gha`: command-line front-end for computations in H(f).
//!
//! Exit codes: 0 success, 1 mathematical negative (not central, not
//! isomorphic, relations fail, not a simple module), 2 input error,
//! 3 numeric failure.

use std::fs;
use std::io::Read;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use gha::algebra::{GhaElement, Presentation};
use gha::modtheory::{
    build, classify, enumerate_simples, verify_relations, JsonError, MatrixModule, ModError,
    ModuleDescriptor, SampleConfig,
};
use gha::parse::{parse_element, parse_poly, ParseError};
use gha::poly::PolyError;
use gha::scalar::DEFAULT_TOL;
use gha::structure::{center, iso_check, StructureError};
use gha::{Field, Poly, Scalar};
use serde::Serialize;
use thiserror::Error;

#[derive(Parser)]
#[command(name = "gha", version, about = "Normal forms, centers, isomorphisms and simple modules of H(f)")]
struct Cli {
    /// Coefficient backend.
    #[arg(long, value_enum, global = true, default_value = "exact")]
    backend: BackendArg,
    /// Conductor N of the exact field Q(zeta_N).
    #[arg(long, global = true, default_value_t = 1)]
    conductor: u32,
    /// Tolerance of the approximate backend.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Approx,
}

#[derive(Subcommand)]
enum Command {
    /// Print the normal form of an expression.
    Normalize {
        #[arg(short, long)]
        f: String,
        #[arg(short, long)]
        e: String,
        /// Emit a JSON object instead of plain text.
        #[arg(long)]
        json: bool,
    },
    /// Test whether an expression is central.
    Central {
        #[arg(short, long)]
        f: String,
        #[arg(short, long)]
        e: String,
    },
    /// Generators of the center.
    Center {
        #[arg(short, long)]
        f: String,
    },
    /// Decide whether H(f1) and H(f2) are isomorphic.
    Iso {
        #[arg(long = "f1")]
        f1: String,
        #[arg(long = "f2")]
        f2: String,
    },
    /// Families of simple modules of dimension n.
    Simples {
        #[arg(short, long)]
        f: String,
        #[arg(short, long)]
        n: usize,
        /// Members instantiated per continuous family.
        #[arg(long, default_value_t = SampleConfig::default().count)]
        samples: usize,
    },
    /// Matrices of the module described by a descriptor.
    Build {
        #[arg(short, long)]
        f: String,
        /// Descriptor JSON, inline or as a file path ("-" reads stdin).
        #[arg(long)]
        descriptor: String,
    },
    /// Check the defining relations on a matrix module.
    Verify {
        #[arg(short, long)]
        f: String,
        /// Module JSON file ("-" reads stdin).
        #[arg(long)]
        module: String,
    },
    /// Identify a simple matrix module by its descriptor.
    Classify {
        #[arg(short, long)]
        f: String,
        /// Module JSON file ("-" reads stdin).
        #[arg(long)]
        module: String,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numeric(String),
    /// A well-posed question whose answer is no.
    #[error("{0}")]
    Negative(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Negative(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::NoConvergence { .. } | PolyError::DegreeOverflow { .. } => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ModError> for CliError {
    fn from(e: ModError) -> Self {
        match e {
            ModError::Invariant(_) | ModError::NotInFamily(_) => CliError::Negative(e.to_string()),
            ModError::Borderline(_) => CliError::Numeric(e.to_string()),
            ModError::Poly(p) => p.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<JsonError> for CliError {
    fn from(e: JsonError) -> Self {
        match e {
            JsonError::Module(m) => m.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::Poly(p) => p.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Result of a command: what to print and whether the answer was negative.
struct Report {
    text: String,
    negative: bool,
}

impl Report {
    fn json<T: Serialize>(value: &T, negative: bool) -> Result<Self, CliError> {
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))?;
        Ok(Report { text, negative })
    }
}

fn base_field(cli: &Cli) -> Result<Field, CliError> {
    if cli.conductor == 0 {
        return Err(CliError::Input("--conductor must be positive".into()));
    }
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return Err(CliError::Input("--tol must lie in (0, 1)".into()));
    }
    Ok(match cli.backend {
        BackendArg::Exact => Field::exact(cli.conductor),
        BackendArg::Approx => Field::approx(cli.tol),
    })
}

/// Enlarges the exact conductor to cover every `zeta(N)` used in `f`.
fn widen(field: Field, f: &Poly) -> Field {
    let mut out = field;
    for c in f.coeffs() {
        if let Scalar::Exact(x) = c {
            out.conductor = num_integer::lcm(out.conductor, x.conductor());
        }
    }
    out
}

fn read_poly(text: &str, field: &Field) -> Result<(Poly, Field), CliError> {
    let f = parse_poly(text, field)?;
    if f.is_zero() {
        return Ok((f, *field));
    }
    Ok((f.clone(), widen(*field, &f)))
}

fn presentation(text: &str, field: &Field) -> Result<Arc<Presentation>, CliError> {
    let (f, field) = read_poly(text, field)?;
    Presentation::new(f, field).map_err(|e| CliError::Input(e.to_string()))
}

/// Inline JSON, `-` for stdin, or a file path.
fn read_json_arg(arg: &str) -> Result<String, CliError> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(arg).map_err(|e| CliError::Input(format!("reading {arg}: {e}")))
}

#[derive(Serialize)]
struct NormalForm {
    schema_version: u32,
    normal_form: GhaElement,
}

#[derive(Serialize)]
struct Failure {
    generator: String,
    commutator: GhaElement,
}

#[derive(Serialize)]
struct Centrality {
    schema_version: u32,
    element: GhaElement,
    central: bool,
    /// First generator `g` with `[element, g] != 0`.
    failing: Option<Failure>,
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let field = base_field(cli)?;
    match &cli.command {
        Command::Normalize { f, e, json } => {
            let pres = presentation(f, &field)?;
            let elem = parse_element(e, &pres)?;
            if *json {
                Report::json(&NormalForm { schema_version: 1, normal_form: elem }, false)
            } else {
                Ok(Report { text: elem.to_string(), negative: false })
            }
        }
        Command::Central { f, e } => {
            let pres = presentation(f, &field)?;
            let elem = parse_element(e, &pres)?;
            let failing = elem.central_failure().map(|(g, c)| Failure {
                generator: g.symbol().to_string(),
                commutator: c,
            });
            let central = failing.is_none();
            Report::json(
                &Centrality { schema_version: 1, element: elem, central, failing },
                !central,
            )
        }
        Command::Center { f } => {
            let pres = presentation(f, &field)?;
            Report::json(&center(&pres), false)
        }
        Command::Iso { f1, f2 } => {
            let (p1, k1) = read_poly(f1, &field)?;
            let (p2, k2) = read_poly(f2, &field)?;
            let mut k = k1;
            k.conductor = num_integer::lcm(k1.conductor, k2.conductor);
            let verdict = iso_check(&p1, &p2, &k)?;
            let negative = !verdict.isomorphic;
            Report::json(&verdict, negative)
        }
        Command::Simples { f, n, samples } => {
            let (poly, field) = read_poly(f, &field)?;
            let cfg = SampleConfig { count: *samples };
            let result = enumerate_simples(&poly, *n, &cfg, &field)?;
            Report::json(&result, false)
        }
        Command::Build { f, descriptor } => {
            let (poly, field) = read_poly(f, &field)?;
            let d = ModuleDescriptor::from_json(&read_json_arg(descriptor)?, &field)?;
            Report::json(&build(&d, &poly, &field)?, false)
        }
        Command::Verify { f, module } => {
            let (poly, field) = read_poly(f, &field)?;
            let m = MatrixModule::from_json(&read_json_arg(module)?, &field)?;
            let report = verify_relations(&m, &poly, &field);
            let negative = !report.ok;
            Report::json(&report, negative)
        }
        Command::Classify { f, module } => {
            let (poly, field) = read_poly(f, &field)?;
            let m = MatrixModule::from_json(&read_json_arg(module)?, &field)?;
            Report::json(&classify(&m, &poly, &field)?, false)
        }
    }
}

/// `-f1`/`-f2` are documented flags but clap only has single-letter shorts.
fn normalize_args() -> Vec<String> {
    std::env::args()
        .map(|a| match a.as_str() {
            "-f1" => "--f1".to_string(),
            "-f2" => "--f2".to_string(),
            _ => a,
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(normalize_args()) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(report) => {
            println!("{}", report.text);
            ExitCode::from(u8::from(report.negative))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
