use std::path::PathBuf;
use std::process::ExitCode;

use arithinv::Convention;
use clap::{Parser, Subcommand};
use hypglue::{Options, Outcome, Run};

#[derive(Parser)]
#[command(name = "hypglue", version, about = "Hyperbolic polytopes, face pairings and arithmetic invariants")]
struct Cli {
    /// Bits of precision for decimal approximations.
    #[arg(long, global = true, default_value_t = 64)]
    precision: u32,
    /// Seed for the Monte-Carlo volume fallback.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte-Carlo samples per link volume.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Emit the report tree with brackets.
    #[arg(long, global = true)]
    json_like: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Face lattice, angles, vertex links and volume of a polytope.
    Analyze { polytope: String },
    /// Symmetry group of a polytope.
    Symmetries { polytope: String },
    /// Quotient summary of a gluing schema; `--check` runs the manifold verification.
    Glue {
        schema: String,
        #[arg(long)]
        check: bool,
    },
    /// Boundary of a schema as a schema one dimension lower.
    Boundary {
        schema: String,
        /// Schema the boundary must be combinatorially isomorphic to.
        #[arg(long)]
        isomorphic_to: Option<String>,
    },
    /// Two copies glued along the boundary.
    Double { schema: String },
    /// Orientation double cover.
    Cover { schema: String },
    /// Ramification sets and pairwise verdicts for rational quadratic forms.
    Invariants {
        #[arg(required = true)]
        forms: Vec<String>,
        #[arg(long, default_value = "hasse")]
        convention: Convention,
    },
    /// Builtin polytopes and schemas.
    Builtin {
        #[arg(long)]
        list: bool,
    },
}

fn run(cli: &Cli) -> Run {
    let d = Options::default();
    let opts = Options {
        precision: cli.precision,
        seed: cli.seed.unwrap_or(d.seed),
        samples: cli.samples.unwrap_or(d.samples),
    };
    match &cli.command {
        Command::Analyze { polytope } => hypglue::analyze(polytope, &opts),
        Command::Symmetries { polytope } => hypglue::symmetries(polytope, &opts),
        Command::Glue { schema, check } => hypglue::glue(schema, *check, &opts),
        Command::Boundary { schema, isomorphic_to } => hypglue::boundary(schema, isomorphic_to.as_deref(), &opts),
        Command::Double { schema } => hypglue::double(schema, &opts),
        Command::Cover { schema } => hypglue::cover(schema, &opts),
        Command::Invariants { forms, convention } => hypglue::invariants(forms, *convention, &opts),
        Command::Builtin { .. } => hypglue::builtin_list(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, outcome)) => {
            let text = if cli.json_like { report.to_json_like() } else { report.to_text() };
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            if outcome == Outcome::Fail {
                eprintln!("verification failed");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
