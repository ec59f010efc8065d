//! `prering`: run calculus theorem checks and constructions from the shell.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use prering::error::Error;

#[derive(Parser, Debug)]
#[command(
    name = "prering",
    version,
    about = "Exact interval measures and executable one-sided calculus checks"
)]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized batteries.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Tolerance for estimator comparisons.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Premise sample count.
    #[arg(long, global = true, default_value_t = prering::harness::DEFAULT_SAMPLES)]
    samples: usize,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Exact one-sided derivatives and Dini estimates at a point.
    Derive {
        /// Function spec, or `-` to read it from stdin.
        #[arg(long)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Strong mean-value theorem (or the Cartan form) on [a, b].
    Mvt {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Comma-separated exceptional points.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        except: String,
        /// Check the everywhere form; no exceptional points allowed.
        #[arg(long)]
        cartan: bool,
    },
    /// Fundamental theorem: integral of the right derivative against the increment.
    Ftc {
        #[arg(long)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        t1: String,
        #[arg(long, allow_hyphen_values = true)]
        t2: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        except: String,
    },
    /// Level n of the Cantor construction.
    Cantor {
        #[arg(long)]
        depth: u32,
    },
    /// Partial sums of the Riesz function and its blowup witness.
    Riesz {
        /// `cantor-null` or a path to a cover file.
        #[arg(long, default_value = "cantor-null")]
        cover: String,
        /// Materialized levels of the Cantor null cover.
        #[arg(long, default_value_t = 5)]
        levels: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Number of cover intervals summed; defaults to all of them.
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Value of a positive measure on a simple set.
    Measure {
        /// `riemann`, `dirac:Q`, `counting:x=w,x=w`, `counting:FILE` (TSV), `stieltjes:SPEC` or `distribution:SPEC`.
        #[arg(long)]
        kind: String,
        /// Set literal such as `{[0,1), (2,3]}`.
        #[arg(long)]
        set: String,
    },
    /// Oriented integral of a function spec.
    Integrate {
        #[arg(long)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        t1: String,
        #[arg(long, allow_hyphen_values = true)]
        t2: String,
    },
    /// The seeded battery of theorem checks.
    Suite {
        /// Randomized instances per family.
        #[arg(long, default_value_t = 25)]
        size: usize,
        /// Run without the thread pool.
        #[arg(long)]
        sequential: bool,
    },
}

fn error_json(e: &Error) -> serde_json::Value {
    let kind = match e {
        Error::Syntax { .. } => "syntax",
        Error::Type(_) => "type",
        Error::DomainGap(_) => "domain_gap",
        Error::PremiseFailed(_) => "premise_failed",
        Error::InvalidArgument(_) => "invalid_argument",
        _ => "error",
    };
    let mut v = serde_json::json!({ "kind": kind, "message": e.to_string() });
    if let Error::Syntax {
        line,
        col,
        expected,
    } = e
    {
        v["line"] = (*line).into();
        v["col"] = (*col).into();
        v["expected"] = expected.clone().into();
    }
    serde_json::json!({ "schema": prering::report::SCHEMA_VERSION, "error": v })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("serializable")
                );
            } else {
                print!("{}", out.text);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&error_json(&e)).expect("serializable")
                );
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
