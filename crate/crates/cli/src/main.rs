//! `gptinv`: GPT forward solves, inversions and roundtrip sweeps from the command line.

mod commands;
mod config;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::ConfigArgs;

#[derive(Parser)]
#[command(version, about, long_about = None)]
struct Cli {
    /// More log output on stderr (repeat for debug)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Only errors on stderr
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute GPTs of a shape and write them as JSON and CSV
    Forward(ConfigArgs),
    /// Recover the contrast and conformal map from a GPT file
    Invert {
        /// GPT measurement file (.json or .csv)
        file: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Forward solve followed by reconstruction at every order
    Roundtrip(ConfigArgs),
    /// List the built-in shapes
    Shapes {
        /// Also export each shape as CSV and SVG into this directory
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        nodes: usize,
    },
}

/// 2 for bad configuration or input, 3 for numerical failure.
fn exit_code(err: &anyhow::Error) -> u8 {
    err.chain()
        .find_map(|cause| cause.downcast_ref::<gptinv::Error>())
        .map_or(2, |e| if e.is_numerical() { 3 } else { 2 })
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Forward(args) => commands::forward(&args.resolve()?),
        Command::Invert { file, config } => commands::invert(&file, &config.resolve()?),
        Command::Roundtrip(args) => commands::roundtrip(&args.resolve()?),
        Command::Shapes { out, nodes } => commands::shapes(out.as_deref(), nodes),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match (cli.quiet, cli.verbose) {
        (true, _) => log::LevelFilter::Error,
        (false, 0) => log::LevelFilter::Warn,
        (false, 1) => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        let numerical: anyhow::Error = gptinv::Error::NoConvergence { iterations: 3, last_step: 1.0 }.into();
        assert_eq!(exit_code(&numerical.context("inverting")), 3);
        let input: anyhow::Error = gptinv::Error::Parse("bad header".into()).into();
        assert_eq!(exit_code(&input), 2);
        assert_eq!(exit_code(&anyhow::anyhow!("io")), 2);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
