//! `morselab`: command-line driver for the small-cancellation toolkit.
//!
//! Every run prints one JSON artifact to stdout. With `--out DIR` the same
//! artifact, a CSV table where the command has one, and any extra files are
//! written under `DIR`. Exit status is 0 on success, 1 when a check command
//! reports FAIL and 2 on any error, which is reported as a JSON record.

mod artifact;
mod commands;
mod error;

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use artifact::{csv_bytes, envelope, error_record, write_file, Config};
use error::CliError;

#[derive(Debug, Parser, Serialize)]
#[command(name = "morselab", version, about = "Finite-scale experiments on small-cancellation groups")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads; defaults to the number of CPUs.
    #[serde(skip)]
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Directory for artifacts.
    #[serde(skip)]
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Memory cap for Cayley balls, in MiB.
    #[arg(long = "budget-mb", global = true, default_value_t = 2048)]
    budget_mb: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct BallSource {
    /// Presentation file.
    pub file: Option<PathBuf>,
    /// Ball snapshot written by `ball --snapshot`.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    pub radius: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Longest pieces of every relator.
    Pieces { file: PathBuf },
    /// C'(λ) or C'(1/f) verdict with witness.
    Check {
        file: PathBuf,
        #[arg(long, conflicts_with = "f", required_unless_present = "f")]
        lambda: Option<String>,
        /// CSV with columns `t,value` for t = 1, 2, …
        #[arg(long)]
        f: Option<PathBuf>,
    },
    /// Sphere sizes of the ball, optionally saved as a snapshot.
    Ball {
        file: PathBuf,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Certified distance between two group elements.
    Dist {
        #[command(flatten)]
        ball: BallSource,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Shortlex-least geodesic between two group elements.
    Geo {
        #[command(flatten)]
        ball: BallSource,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Intersection function of a path.
    Rho {
        file: PathBuf,
        #[arg(long)]
        path: String,
        #[arg(long)]
        tmax: Option<usize>,
    },
    /// Contraction constant of a geodesic.
    Contraction {
        #[command(flatten)]
        ball: BallSource,
        #[arg(long)]
        geodesic: String,
    },
    /// Disk diagrams.
    Diagram {
        #[command(subcommand)]
        action: DiagramAction,
    },
    /// Local-to-global harness.
    Mltg {
        #[command(subcommand)]
        action: MltgAction,
    },
    /// Auxiliary path of a locally geodesic word, with its audit.
    Auxpath {
        #[command(flatten)]
        ball: BallSource,
        #[arg(long)]
        gamma: String,
        #[arg(long = "L")]
        scale: usize,
    },
    /// Finite state automata.
    Fsa {
        #[command(subcommand)]
        action: FsaAction,
    },
    /// Random walks to a sphere and their stationarity defect.
    Walk {
        #[command(flatten)]
        ball: BallSource,
        /// JSON step measure: `{"support": [{"word": "a", "probability": "1/4"}, …]}`.
        #[arg(long)]
        mu: PathBuf,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 10_000)]
        count: u64,
        /// Exit sphere radius.
        #[arg(long)]
        k: usize,
        /// Also solve for the exact exit law.
        #[arg(long)]
        exact: bool,
        /// Intersection bound for the direction frequency.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Alternating path γ̂ ∗ β̂ ∗ … ∗ γ̂ with its projection table.
    Qab {
        #[command(flatten)]
        ball: BallSource,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 3)]
        blocks: usize,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagramAction {
    /// Validate a diagram, against a presentation if given.
    Check {
        diagram: PathBuf,
        #[arg(long)]
        presentation: Option<PathBuf>,
    },
    /// Strebel shape of a combinatorial geodesic bigon.
    Classify { diagram: PathBuf },
    /// Reduced diagrams with a given boundary word.
    Search {
        file: PathBuf,
        #[arg(long)]
        boundary: String,
        #[arg(long, default_value_t = 4)]
        max_faces: usize,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MltgAction {
    /// One row per scale L: local word count and global audit maxima.
    Sweep {
        #[command(flatten)]
        ball: BallSource,
        /// Scale or range `a..b` (inclusive).
        #[arg(long = "L")]
        scales: String,
        #[arg(long)]
        len: usize,
        #[arg(long, default_value_t = 1)]
        q: usize,
        /// Constant intersection bound.
        #[arg(long, default_value_t = 2)]
        bound: i64,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FsaAction {
    /// Geodesic automaton, optionally intersected with a window language.
    Build {
        file: PathBuf,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = 1)]
        horizon: usize,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value_t = 2)]
        bound: i64,
        #[arg(long, default_value_t = 1_000_000)]
        max_states: usize,
    },
    /// Accepted words by length.
    Count {
        automaton: PathBuf,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Whether a word is accepted.
    Check {
        automaton: PathBuf,
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        word: String,
    },
}

static PANIC_MESSAGE: Mutex<Option<String>> = Mutex::new(None);

fn run(cli: &Cli) -> Result<(serde_json::Value, bool), CliError> {
    let name = cli.command.name();
    let config = Config::new(serde_json::to_value(&cli.command)?, cli.seed, cli.budget_mb, &cli.command.inputs())?;
    let ctx = commands::Ctx { seed: cli.seed, budget_mb: cli.budget_mb };
    log::info!("running {name}");
    let outcome = commands::dispatch(&cli.command, &ctx)?;
    let doc = envelope(name, &config, &outcome);
    if let Some(dir) = &cli.out {
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        write_file(dir, &format!("{name}.json"), text.as_bytes())?;
        if let Some(t) = &outcome.table {
            write_file(dir, &format!("{name}.csv"), &csv_bytes(t, &config.hash())?)?;
        }
        for (file, bytes) in &outcome.files {
            write_file(dir, file, bytes)?;
        }
    }
    Ok((doc, outcome.passed != Some(false)))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let record = error_record(&CliError::Usage(e.render().to_string()));
            println!("{}", serde_json::to_string_pretty(&record).expect("error record serializes"));
            return ExitCode::from(2);
        }
    };
    panic::set_hook(Box::new(|info| {
        *PANIC_MESSAGE.lock().unwrap() = Some(info.to_string());
    }));
    let guarded = || panic::catch_unwind(AssertUnwindSafe(|| run(&cli)));
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(guarded),
            Err(e) => Ok(Err(CliError::Internal(e.to_string()))),
        },
        None => guarded(),
    };
    let result = result.unwrap_or_else(|_| {
        let msg = PANIC_MESSAGE.lock().unwrap().take().unwrap_or_else(|| "panic".into());
        Err(CliError::Internal(msg))
    });
    match result {
        Ok((doc, passed)) => {
            println!("{}", serde_json::to_string_pretty(&doc).expect("artifact serializes"));
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let record = error_record(&e);
            let text = serde_json::to_string_pretty(&record).expect("error record serializes");
            if let Some(dir) = &cli.out {
                let _ = write_file(dir, "error.json", format!("{text}\n").as_bytes());
            }
            println!("{text}");
            ExitCode::from(2)
        }
    }
}
