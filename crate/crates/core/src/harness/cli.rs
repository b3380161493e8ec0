use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use super::config::{load_config, RunConfig};
use super::csvio;
use super::pipeline::{self, prepare_out_dir};
use crate::error::{Error, Result};

pub const SEED_ENV: &str = "JAMTEXTER_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "jamtexter",
    version,
    about = "Jamming, multi-network texting and loss simulator"
)]
struct Cli {
    /// JSON run configuration; omitted fields use the reference experiment.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// RNG seed. Falls back to $JAMTEXTER_SEED, then to the config.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    #[arg(long, global = true, value_name = "PATH")]
    out_dir: Option<PathBuf>,

    /// Texts sent per attempt type.
    #[arg(long, global = true, value_name = "N")]
    trials: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the receiver grid and write grid_results.csv.
    Grid,
    /// Run the texting trials and write texting_results.csv.
    Text,
    /// Aggregate losses and write losses.csv.
    Cost {
        /// Existing texting_results.csv to price instead of running trials.
        #[arg(long, value_name = "CSV")]
        input: Option<PathBuf>,
    },
    /// Print exact per-mode delivery probabilities.
    Enumerate,
    /// Run every stage and write the manifest.
    Pipeline,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, env_seed: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(cli, env_seed, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_io() {
                EXIT_IO
            } else {
                EXIT_INVALID
            }
        }
    }
}

fn resolve_config(cli: &Cli, env_seed: Option<String>) -> Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    } else if let Some(raw) = env_seed {
        config.seed = raw.trim().parse().map_err(|_| {
            Error::config(
                SEED_ENV,
                format!("`{raw}` is not an unsigned 64-bit integer"),
            )
        })?;
    }
    if let Some(dir) = &cli.out_dir {
        config.out_dir = dir.clone();
    }
    if let Some(n) = cli.trials {
        config.n_trials = n;
    }
    config.validate()?;
    Ok(config)
}

fn execute(cli: Cli, env_seed: Option<String>, out: &mut dyn Write) -> Result<()> {
    let config = resolve_config(&cli, env_seed)?;
    let report = |out: &mut dyn Write, rows: usize, path: &std::path::Path| -> Result<()> {
        writeln!(out, "wrote {rows} rows to {}", path.display())
            .map_err(|e| Error::io("<stdout>", e))
    };
    match cli.command {
        Command::Grid => {
            prepare_out_dir(&config.out_dir)?;
            let rows = pipeline::grid_stage(&config)?;
            let path = pipeline::write_grid(&config, &rows)?;
            report(out, rows.len(), &path)
        }
        Command::Text => {
            prepare_out_dir(&config.out_dir)?;
            let outcomes = pipeline::texting_stage(&config)?;
            let path = pipeline::write_texting(&config, &outcomes)?;
            report(out, outcomes.len(), &path)
        }
        Command::Cost { input } => {
            let outcomes = match input {
                Some(path) => csvio::read_texting(&path).map_err(|e| e.in_stage("losses"))?,
                None => pipeline::texting_stage(&config)?,
            };
            prepare_out_dir(&config.out_dir)?;
            let records = pipeline::loss_stage(&config, &outcomes)?;
            let path = pipeline::write_losses(&config, &records)?;
            report(out, records.len(), &path)
        }
        Command::Enumerate => print_enumeration(&config, out),
        Command::Pipeline => {
            let m = pipeline::run_pipeline(&config)?;
            writeln!(
                out,
                "wrote {} grid, {} texting and {} loss rows to {} in {} ms",
                m.rows.grid,
                m.rows.texting,
                m.rows.losses,
                config.out_dir.display(),
                m.duration_ms
            )
            .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn print_enumeration(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let model = config.texting_model()?;
    let mut text = format!(
        "{:<10} {:>8} {:>12} {:>14} {:>14} {:>20}\n",
        "mode", "networks", "combinations", "expected_raw", "expected_p_ic", "delivery_probability"
    );
    for mode in model.modes().collect::<Vec<_>>() {
        let e = model.enumerate_exact(mode)?;
        let networks = config
            .modes
            .iter()
            .find(|m| m.name == mode)
            .map_or(0, |m| m.networks.len());
        text.push_str(&format!(
            "{:<10} {:>8} {:>12} {:>14.4} {:>14.4} {:>20.4}\n",
            mode.as_str(),
            networks,
            e.combinations,
            e.expected_raw,
            e.expected_p_ic,
            e.delivery_probability
        ));
    }
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}
