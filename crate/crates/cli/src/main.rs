//! `sextic`: classify, decompose and inspect ternary sextics from JSON files.

mod commands;
mod error;
mod json;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Report;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "sextic", version, about = "Waring decompositions and invariants of ternary sextics")]
struct Cli {
    /// Relative tolerance for numerical rank decisions; ignored for exact input.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stratum label from the cubic catalecticant rank and H27.
    Classify {
        #[arg(required = true)]
        forms: Vec<PathBuf>,
        /// Worker threads when several files are given.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Decomposition through the intersection of the two kernel cubics.
    Decompose { form: PathBuf },
    /// The linked decomposition of a form with a known nine-point decomposition.
    Second { form: PathBuf, points: PathBuf },
    /// A sextic apolar to exactly the three given cubics.
    Wprime { c1: PathBuf, c2: PathBuf, c3: PathBuf },
    /// Catalecticant rank and determinant, raw and normalized H27.
    Invariants { form: PathBuf },
    /// Hilbert function differences and the CI(3,3) test.
    Hvector { points: PathBuf },
    /// Intersection points of two plane curves with multiplicities.
    Intersect {
        c1: PathBuf,
        c2: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Terracini rank and the determinants C, R and N for nine points.
    ///
    /// C and R use the given coordinates of the points and of `--aux`; N and
    /// the λ check use unit representatives.
    Terracini {
        points: PathBuf,
        /// Auxiliary tenth point as "x,y,z".
        #[arg(long)]
        aux: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A seeded random form of the given rank with its decomposition.
    Random {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        seed: u64,
        /// Directory for form.json and witness.json.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Residual of a Waring expression against a form.
    Verify { form: PathBuf, expression: PathBuf },
}

fn run(cli: &Cli) -> (Report, Option<CliError>) {
    let tol = cli.tol;
    let result = match &cli.command {
        Command::Classify { forms, jobs } => return commands::classify_files(forms, tol, *jobs),
        Command::Decompose { form } => commands::decompose(form, tol),
        Command::Second { form, points } => commands::second(form, points, tol),
        Command::Wprime { c1, c2, c3 } => commands::wprime(&[c1.clone(), c2.clone(), c3.clone()], tol),
        Command::Invariants { form } => commands::invariants(form, tol),
        Command::Hvector { points } => commands::hvector(points, tol),
        Command::Intersect { c1, c2, seed } => commands::intersect(c1, c2, *seed),
        Command::Terracini { points, aux, seed } => aux
            .as_deref()
            .map(json::parse_point_arg)
            .transpose()
            .and_then(|aux| commands::terracini(points, aux, *seed, tol)),
        Command::Random { rank, seed, out } => commands::random(*rank, *seed, out),
        Command::Verify { form, expression } => commands::verify(form, expression, tol),
    };
    match result {
        Ok(body) => (body, None),
        Err(e) => (Report::new(), Some(e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (body, error) = run(&cli);
    if !body.is_empty() {
        if cli.json {
            println!("{}", commands::render_json(body));
        } else {
            print!("{}", commands::render_text(&body));
        }
    }
    match error {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("error[{}]: {e}", e.name());
            e.exit_code()
        }
    }
}
