//! `descent` — glue finitely presented modules along a normal-crossings
//! divisor and verify the result at finite truncation precision.
//!
//! Exit codes: 0 success, 1 mathematical verification failure, 2 input
//! error, 3 precision exhaustion.

mod demos;
mod report;
mod runfile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use descent_core::{FieldDesc, Precision};

use demos::DemoConfig;
use report::{OutputFormat, Report};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_PRECISION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "descent",
    version,
    about = "Glue finitely presented modules along a normal-crossings divisor, exactly and verified"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Coefficient field: `rational`, or a prime modulus such as `7`.
    #[arg(long, global = true, default_value = "rational", env = "DESCENT_FIELD")]
    field: String,

    /// Working truncation level (at least 2).
    #[arg(long, global = true, default_value_t = 8, env = "DESCENT_PREC")]
    prec: u32,

    /// Cap for precision escalation.
    #[arg(long, global = true, default_value_t = 64, env = "DESCENT_PREC_CAP")]
    prec_cap: u32,

    /// Degree bound for randomized suites (at least 1).
    #[arg(long, global = true, default_value_t = 10, env = "DESCENT_DEG")]
    deg: u32,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0, env = "DESCENT_SEED")]
    seed: u64,

    /// Output format: `text` or `json`.
    #[arg(long, global = true, default_value = "text", env = "DESCENT_FORMAT")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in demonstration: a1, a2-crossing, nerve-census, bl-sequence.
    Demo {
        /// Demo name.
        name: String,
    },
    /// Execute a run file (sections RING / DIVISOR / MODULE / DATUM / RHO / RUN).
    Run {
        /// Path to the run file.
        path: PathBuf,
    },
}

fn parse_field(s: &str) -> Result<FieldDesc, String> {
    match s {
        "rational" | "rationals" | "q" | "Q" => Ok(FieldDesc::Rationals),
        other => {
            let p: u32 = other
                .parse()
                .map_err(|_| format!("field must be `rational` or a prime modulus, got `{other}`"))?;
            if p < 2 {
                return Err(format!("prime modulus must be at least 2, got {p}"));
            }
            let is_prime = (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
            if !is_prime {
                return Err(format!("{p} is not prime"));
            }
            Ok(FieldDesc::Prime(p))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let format = match cli.format.parse::<OutputFormat>() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let field = match parse_field(&cli.field) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    if cli.prec < 2 {
        eprintln!("--prec must be at least 2");
        return ExitCode::from(EXIT_INPUT);
    }
    if cli.deg < 1 {
        eprintln!("--deg must be at least 1");
        return ExitCode::from(EXIT_INPUT);
    }
    let prec = Precision::new(cli.prec, cli.prec_cap.max(cli.prec));

    let code = match &cli.command {
        Command::Demo { name } => {
            let mut rep = Report::new(&format!("demo {name}"));
            let cfg = DemoConfig {
                prec,
                deg: cli.deg,
                seed: cli.seed,
                field,
            };
            let code = demos::run_demo(name, &cfg, &mut rep);
            rep.print(format);
            code
        }
        Command::Run { path } => {
            let mut rep = Report::new(&format!("run {}", path.display()));
            let src = match std::fs::read_to_string(path) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", path.display());
                    return ExitCode::from(EXIT_INPUT);
                }
            };
            match runfile::parse_run_file(&src) {
                Ok(rf) => match runfile::execute(&rf, field, prec, &mut rep) {
                    Ok(code) => {
                        rep.print(format);
                        code
                    }
                    Err(ie) => {
                        eprintln!("{}:{}: {}", path.display(), ie.line, ie.message);
                        EXIT_INPUT
                    }
                },
                Err(ie) => {
                    eprintln!("{}:{}: {}", path.display(), ie.line, ie.message);
                    EXIT_INPUT
                }
            }
        }
    };
    ExitCode::from(code)
}
