//! Command-line front end: argument parsing, flat config files and the
//! generate / rank / fuse / oracle / eval / pipeline commands.

mod args;
mod commands;
mod config;
mod error;

pub use error::Failure;

use args::{Cli, Command};
use clap::error::ErrorKind;
use clap::Parser;
use config::Settings;
use error::CliResult;
use std::ffi::OsString;

fn settings(cli: &Cli, pairs: Vec<(&'static str, Option<String>)>) -> CliResult<Settings> {
    let mut settings = Settings::load(cli.config.as_deref())?;
    settings.apply(pairs)?;
    settings.apply([("threads", cli.threads)])?;
    Ok(settings)
}

fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Generate { inputs, generation } => {
            let s = settings(&cli, [inputs.pairs(), generation.pairs()].concat())?;
            commands::cmd_generate(&s).map(drop)
        }
        Command::Rank { inputs, scoring, generation } => {
            let s = settings(&cli, [inputs.pairs(), scoring.pairs(), generation.pairs()].concat())?;
            for path in commands::cmd_rank(&s)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Fuse { runs, output, normalize, tag } => {
            let s = settings(&cli, vec![("normalize", normalize.clone())])?;
            commands::cmd_fuse(&s, runs, output, tag)
        }
        Command::Oracle { runs, metrics, output, report, tag } => {
            let s = settings(&cli, metrics.pairs())?;
            commands::cmd_oracle(&s, runs, output, report.as_deref(), tag)
        }
        Command::Eval { runs, metrics, output, summary } => {
            let s = settings(&cli, metrics.pairs())?;
            commands::cmd_eval(&s, runs, output.as_deref(), summary.as_deref())
        }
        Command::Pipeline { inputs, scoring, generation, metrics, normalize } => {
            let pairs = [
                inputs.pairs(),
                scoring.pairs(),
                generation.pairs(),
                metrics.pairs(),
                vec![("normalize", normalize.clone())],
            ]
            .concat();
            commands::cmd_pipeline(&settings(&cli, pairs)?)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run_cli<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => Failure::Usage.exit_code(),
            };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.kind.exit_code()
        }
    }
}
