//! `ncball`: config-driven experiments on quotient norms, norm fields and
//! matrix evaluations.
//!
//! Exit codes: 0 success, 1 config error, 2 numerical non-convergence,
//! 3 property violation.

// NaN must fail every positivity check, hence `!(x > 0.0)` throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "ncball", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON experiment config. Without it an empty version-1 config over two
    /// letters is used.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for grid evaluation; output does not depend on it.
    #[arg(long, global = true, value_name = "N")]
    grid_parallel: Option<usize>,

    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Dimensions of the saturated ideal and its complement per degree.
    IdealInfo,
    /// Quotient norm bracket of `poly`.
    Norm,
    /// Norm field over a parameter family (CSV) plus a continuity report.
    NormField,
    /// Subspace path of one degree of the ideal along the grid.
    GrassmannPath,
    /// Compatibility of the radius tower and seminorm monotonicity.
    TowerCheck,
    /// Evaluates `poly` at the configured matrix tuple.
    Eval,
    /// Von Neumann inequality on random row contractions.
    VnTest,
    /// Contraction bound on sampled points of the variety.
    VarietyTest,
    /// Randomized property suites.
    Suite,
}

fn run(cli: &Cli) -> Result<(Outcome, config::Outputs), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => config::load(path)?,
        None => config::parse(r#"{"version": 1, "d": 2}"#)?,
    };
    if let Some(seed) = cli.seed {
        cfg.raw.seed = seed;
    }
    log::info!("running {:?} (seed {})", cli.command, cfg.seed());
    let exec = || match cli.command {
        Command::IdealInfo => commands::ideal_info(&cfg),
        Command::Norm => commands::norm(&cfg),
        Command::NormField => commands::norm_field(&cfg),
        Command::GrassmannPath => commands::grassmann_path(&cfg),
        Command::TowerCheck => commands::tower_check(&cfg),
        Command::Eval => commands::eval(&cfg),
        Command::VnTest => commands::vn_test(&cfg),
        Command::VarietyTest => commands::variety_test(&cfg),
        Command::Suite => commands::suite(&cfg),
    };
    let outcome = match cli.grid_parallel {
        None => exec(),
        Some(0) => Err(CliError::Config("--grid-parallel: need at least one thread".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Io(format!("thread pool: {e}")))?
            .install(exec),
    }?;
    Ok((outcome, cfg.raw.outputs.clone()))
}

fn write_to(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

/// The norm-field report goes to `outputs.report`, else next to the data file,
/// else to stderr.
fn report_path(data: Option<&Path>, explicit: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| {
        data.map(|p| {
            let mut s = p.as_os_str().to_owned();
            s.push(".report.json");
            PathBuf::from(s)
        })
    })
}

fn finish(cli: &Cli, outputs: config::Outputs, outcome: &Outcome) -> Result<(), CliError> {
    let data = cli.out.clone().or(outputs.data);
    write_to(data.as_deref(), &outcome.data)?;
    if let Some(report) = &outcome.report {
        match report_path(data.as_deref(), outputs.report.as_deref()) {
            Some(p) => write_to(Some(&p), report)?,
            None => eprint!("{report}"),
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("NCBALL_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(outcome, outputs)| {
        finish(&cli, outputs, &outcome)?;
        Ok(outcome.violation)
    });
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(violation)) => {
            eprintln!("{violation}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
