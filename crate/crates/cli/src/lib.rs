//! Command line front end: input format, commands and reports.

pub mod commands;
pub mod error;
pub mod format;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "lamtool", version, about = "Laminary languages of graph maps and substitutions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate the graph and report train track, matrix and orientability data.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate p(n) and beta(n).
    Complexity {
        file: PathBuf,
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Cover bounds and a dimension estimate from metric counts.
    Dimension {
        file: PathBuf,
        #[arg(long)]
        a: f64,
        /// Comma-separated list.
        #[arg(long, value_delimiter = ',', required = true)]
        delta: Vec<f64>,
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        json: bool,
        /// Fit window as LO,HI.
        #[arg(long, value_delimiter = ',')]
        window: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0.0)]
        offset: f64,
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
    /// Compare the language with its image on the collapsed rose.
    Collapse {
        file: PathBuf,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = 8)]
        max_c: u64,
    },
    /// Growth comparison of two inputs on roses.
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = 8)]
        max_c: u64,
    },
}

pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Analyze { file, json } => commands::analyze(&file, json),
        Command::Complexity { file, max_n, csv } => commands::complexity(&file, max_n, csv.as_deref()),
        Command::Dimension {
            file,
            a,
            delta,
            max_n,
            json,
            window,
            offset,
            csv_dir,
        } => {
            let window = match window.as_deref() {
                None => None,
                Some(&[lo, hi]) => Some((lo, hi)),
                Some(_) => return Err(CliError::Usage("--window takes LO,HI".into())),
            };
            commands::dimension(commands::DimensionArgs {
            path: &file,
            a,
            deltas: &delta,
            max_n,
            window,
            offset,
            json,
            csv_dir: csv_dir.as_deref(),
            })
        }
        Command::Collapse { file, max_n, max_c } => commands::collapse(&file, max_n, max_c),
        Command::Compare {
            first,
            second,
            max_n,
            max_c,
        } => commands::compare(&first, &second, max_n, max_c),
    }
}
