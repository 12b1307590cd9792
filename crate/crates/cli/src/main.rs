//! `monosite`: batch front end with JSON output.
//!
//! Exit status: 0 for a mathematical "yes" or success, 1 for "no", 2 for bad
//! input or violated preconditions, 3 when an instance exceeds the limits.

mod fixtures;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use monosite::fields::{build_extension, Field, FieldDescriptor, FiniteField};
use monosite::spectrum::{OracleConfig, OracleStats};
use monosite::textio::{parse_monomial, parse_poly, FieldSpec, Ring, TextError};
use monosite::{Error, ErrorKind, Monomial, Poly, Rationals};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "monosite",
    version,
    about = "Reducibility monomial sites of polynomial pencils"
)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Coefficient field: `q`, a prime `p`, or `p^m`.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Variables: `x`, `x,y`, `x,y,z` or `x1,...,xn`.
    #[arg(long, global = true, default_value = "x,y")]
    ring: String,
    /// Largest total degree handed to the oracle.
    #[arg(long, global = true, default_value_t = 6)]
    max_degree: u32,
    /// Largest coefficient or sweep field handed to the oracle.
    #[arg(long, global = true, default_value_t = 81)]
    max_field: u64,
    /// Largest prime extension degree searched for conjugate factors.
    #[arg(long, global = true)]
    extension_cap: Option<u32>,
    /// Seed recorded with the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for oracle sweeps.
    #[arg(long, global = true, env = "MONOSITE_JOBS")]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exponent vectors of the terms and their line fit.
    Newton { polynomial: String },
    /// Homogeneous decomposition in two monomials.
    Decompose { polynomial: String },
    /// Largest `e` with `P = c * S^e`.
    PurePower { polynomial: String },
    /// Whether the monomials form a reducibility monomial site.
    Classify {
        polynomial: String,
        #[arg(required = true)]
        monomials: Vec<String>,
    },
    /// Values `c` in the sweep field with `P + c*Q` reducible.
    Spectrum {
        polynomial: String,
        monomial: String,
        /// Field swept for `c`; defaults to the coefficient field.
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Whether the pencil is irreducible for generic parameters.
    GenericTest {
        polynomial: String,
        monomials: Vec<String>,
    },
    /// Runs the built-in reference identities and verdicts.
    VerifyPaperFixtures,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Newton { .. } => "newton",
            Command::Decompose { .. } => "decompose",
            Command::PurePower { .. } => "pure-power",
            Command::Classify { .. } => "classify",
            Command::Spectrum { .. } => "spectrum",
            Command::GenericTest { .. } => "generic-test",
            Command::VerifyPaperFixtures => "verify-paper-fixtures",
        }
    }

    fn input(&self) -> Value {
        match self {
            Command::Newton { polynomial }
            | Command::Decompose { polynomial }
            | Command::PurePower { polynomial } => json!({ "polynomial": polynomial }),
            Command::Classify {
                polynomial,
                monomials,
            }
            | Command::GenericTest {
                polynomial,
                monomials,
            } => json!({ "polynomial": polynomial, "monomials": monomials }),
            Command::Spectrum {
                polynomial,
                monomial,
                sweep,
            } => json!({ "polynomial": polynomial, "monomial": monomial, "sweep": sweep }),
            Command::VerifyPaperFixtures => json!({}),
        }
    }
}

/// Validated run configuration.
pub struct RunConfig {
    pub field: FieldSpec,
    pub ring: Ring,
    pub oracle: OracleConfig,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn json(&self, descriptor: Option<&FieldDescriptor>) -> Value {
        json!({
            "field": self.field.to_string(),
            "field_descriptor": descriptor,
            "ring": self.ring.to_string(),
            "oracle": self.oracle,
            "seed": self.seed,
            "out": self.out.as_ref().map(|p| p.display().to_string()),
        })
    }
}

/// Failure with the argument it refers to.
pub struct Failure {
    error: Error,
    argument: Option<String>,
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            error: e.into(),
            argument: None,
        }
    }
}

fn at(argument: &str) -> impl FnOnce(TextError) -> Failure + '_ {
    move |e| Failure {
        error: e.into(),
        argument: Some(argument.to_string()),
    }
}

/// The mathematical answer of a command.
pub struct Answer {
    pub yes: bool,
    pub result: Value,
    pub stats: OracleStats,
}

pub enum AnyField {
    Rational(Rationals),
    Finite(FiniteField),
}

impl AnyField {
    fn build(spec: FieldSpec) -> Result<Self, Failure> {
        Ok(match spec {
            FieldSpec::Rational => AnyField::Rational(Rationals),
            FieldSpec::Finite { p, m } => AnyField::Finite(build_extension(p, m)?),
        })
    }

    fn descriptor(&self) -> FieldDescriptor {
        match self {
            AnyField::Rational(f) => f.descriptor(),
            AnyField::Finite(f) => f.descriptor(),
        }
    }
}

fn parse_monomials(ring: &Ring, srcs: &[String]) -> Result<Vec<Monomial>, Failure> {
    srcs.iter()
        .enumerate()
        .map(|(i, s)| parse_monomial(s, ring).map_err(|e| at(&format!("monomials[{i}]"))(e)))
        .collect()
}

fn execute<F: Field>(field: &F, cfg: &RunConfig, cmd: &Command) -> Result<Answer, Failure> {
    let ring = &cfg.ring;
    let poly = |src: &str| -> Result<Poly<F>, Failure> {
        parse_poly(src, ring, field).map_err(at("polynomial"))
    };
    match cmd {
        Command::Newton { polynomial } => render::newton(&poly(polynomial)?, ring),
        Command::Decompose { polynomial } => render::decompose(&poly(polynomial)?, ring),
        Command::PurePower { polynomial } => render::pure_power(&poly(polynomial)?, ring),
        Command::Classify {
            polynomial,
            monomials,
        } => {
            let qs = parse_monomials(ring, monomials)?;
            render::classify(&poly(polynomial)?, &qs, ring, &cfg.oracle)
        }
        Command::Spectrum {
            polynomial,
            monomial,
            sweep,
        } => {
            let q = parse_monomial(monomial, ring).map_err(at("monomial"))?;
            let sweep = match sweep {
                Some(s) => match s.parse::<FieldSpec>().map_err(at("sweep"))? {
                    FieldSpec::Finite { p, m } => Some(build_extension(p, m)?),
                    FieldSpec::Rational => return Err(monosite::SpectrumError::NotFinite.into()),
                },
                None => None,
            };
            render::spectrum(&poly(polynomial)?, &q, sweep, ring, &cfg.oracle)
        }
        Command::GenericTest {
            polynomial,
            monomials,
        } => {
            let qs = parse_monomials(ring, monomials)?;
            render::generic(&poly(polynomial)?, &qs, ring, &cfg.oracle)
        }
        Command::VerifyPaperFixtures => Ok(fixtures::run(&cfg.oracle)),
    }
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::InstanceTooLarge => 3,
        _ => 2,
    }
}

fn error_json(f: &Failure, src: Option<&str>) -> Value {
    let location = match (&f.argument, f.error_offset()) {
        (Some(arg), offset) => json!({ "argument": arg, "offset": offset, "source": src }),
        (None, _) => Value::Null,
    };
    json!({
        "error_kind": f.error.kind(),
        "message": f.error.to_string(),
        "location": location,
    })
}

impl Failure {
    fn error_offset(&self) -> Option<usize> {
        match &self.error {
            Error::Text(e) => e.offset(),
            _ => None,
        }
    }
}

fn configure(args: &RunArgs) -> Result<RunConfig, Failure> {
    let field = args.field.parse::<FieldSpec>().map_err(at("--field"))?;
    let ring = args.ring.parse::<Ring>().map_err(at("--ring"))?;
    let oracle = OracleConfig {
        max_total_degree: args.max_degree,
        max_variables: 3,
        max_field_size: args.max_field,
        extension_sweep_cap: args.extension_cap,
    };
    oracle.validate()?;
    Ok(RunConfig {
        field,
        ring,
        oracle,
        seed: args.seed,
        out: args.out.clone(),
    })
}

fn source_of<'a>(cmd: &'a Command, argument: &str) -> Option<&'a str> {
    match (cmd, argument) {
        (
            Command::Newton { polynomial }
            | Command::Decompose { polynomial }
            | Command::PurePower { polynomial }
            | Command::Classify { polynomial, .. }
            | Command::Spectrum { polynomial, .. }
            | Command::GenericTest { polynomial, .. },
            "polynomial",
        ) => Some(polynomial),
        (Command::Spectrum { monomial, .. }, "monomial") => Some(monomial),
        (Command::Classify { monomials, .. } | Command::GenericTest { monomials, .. }, arg) => arg
            .strip_prefix("monomials[")
            .and_then(|r| r.strip_suffix(']'))
            .and_then(|i| i.parse::<usize>().ok())
            .and_then(|i| monomials.get(i))
            .map(String::as_str),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.run.jobs.filter(|&j| j > 0) {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let command = cli.command.name();
    let (doc, code) = match configure(&cli.run) {
        Err(f) => {
            let src = f.argument.as_deref().map(|a| {
                if a == "--field" {
                    cli.run.field.as_str()
                } else {
                    cli.run.ring.as_str()
                }
            });
            let doc = json!({
                "command": command,
                "config": Value::Null,
                "input": cli.command.input(),
                "error": error_json(&f, src),
            });
            (doc, exit_code(f.error.kind()))
        }
        Ok(cfg) => {
            let field = AnyField::build(cfg.field);
            let descriptor = field.as_ref().ok().map(AnyField::descriptor);
            let outcome = field.and_then(|field| match &field {
                AnyField::Rational(f) => execute(f, &cfg, &cli.command),
                AnyField::Finite(f) => execute(f, &cfg, &cli.command),
            });
            let mut doc = json!({
                "command": command,
                "config": cfg.json(descriptor.as_ref()),
                "input": cli.command.input(),
            });
            let code = match outcome {
                Ok(answer) => {
                    doc["result"] = answer.result;
                    doc["timing"] = json!(answer.stats);
                    if answer.yes {
                        0
                    } else {
                        1
                    }
                }
                Err(f) => {
                    let src = f
                        .argument
                        .as_deref()
                        .and_then(|a| source_of(&cli.command, a));
                    doc["error"] = error_json(&f, src);
                    exit_code(f.error.kind())
                }
            };
            (doc, code)
        }
    };
    let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n";
    let written = match &cli.run.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("monosite: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
