//! `rankability`: exact Slater spectra, optimal rankings and posterior
//! rankability analysis of pairwise-comparison matrices.

mod commands;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{SimulateOptions, SpectrumOptions};

#[derive(Parser)]
#[command(name = "rankability", version, about)]
struct Cli {
    /// Worker threads for the parallel parts of the computation.
    #[arg(long, global = true, env = "RANKABILITY_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GridArgs {
    /// Write the posterior density as a `p,density` CSV to this path.
    #[arg(long, value_name = "PATH")]
    grid: Option<PathBuf>,

    /// Number of grid points on [0.5, 1].
    #[arg(long, default_value_t = 2001, value_parser = clap::value_parser!(u32).range(2..))]
    grid_points: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Slater spectrum and posterior summary of one matrix.
    Spectrum {
        input: PathBuf,
        /// Print the spectrum as a `t,a_t` table instead of JSON.
        #[arg(long)]
        csv: bool,
        /// Also list the optimal rankings.
        #[arg(long)]
        rankings: bool,
        /// List at most N rankings (the count stays exact).
        #[arg(long, value_name = "N")]
        max_list: Option<usize>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// All optimal rankings (solutions of the linear ordering problem).
    Rankings {
        input: PathBuf,
        /// List at most N rankings (the count stays exact).
        #[arg(long, value_name = "N")]
        max_list: Option<usize>,
    },
    /// Joint posterior of several matrices sharing one consistency parameter.
    Joint {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Generate matrices under the Bernoulli comparison model.
    Simulate {
        /// Number of objects.
        #[arg(long = "M", alias = "m", value_name = "M")]
        m: usize,
        /// Comparisons per pair.
        #[arg(long = "K", alias = "k", value_name = "K")]
        k: u64,
        /// Probability that the better object wins a comparison.
        #[arg(long, value_name = "P")]
        p: f64,
        /// Number of matrices.
        #[arg(long = "L", alias = "l", value_name = "L", default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
    },
    /// Monte-Carlo test of the hypothesis p = 0.5.
    SlaterTest {
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        n_mc: u64,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Brute-force spectrum and rankings (M <= 10), same report as `spectrum --rankings`.
    Oracle { input: PathBuf },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    InFile {
        path: String,
        #[source]
        source: rankability::Error,
    },
    #[error(transparent)]
    Engine(#[from] rankability::Error),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn in_file(path: &Path, source: rankability::Error) -> Self {
        CliError::InFile {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    fn exit_code(&self) -> u8 {
        let engine = match self {
            CliError::InFile { source, .. } | CliError::Engine(source) => source,
            CliError::Io { .. } => return 2,
        };
        match engine {
            rankability::Error::ResourceLimit(_) => 3,
            rankability::Error::Internal(_) => 4,
            _ => 2,
        }
    }
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Spectrum {
            input,
            csv,
            rankings,
            max_list,
            grid,
        } => commands::spectrum(
            &input,
            &SpectrumOptions {
                csv,
                rankings,
                max_list,
                grid: grid.grid,
                grid_points: grid.grid_points as usize,
            },
        ),
        Command::Rankings { input, max_list } => commands::rankings(&input, max_list),
        Command::Joint { inputs, grid } => {
            commands::joint(&inputs, grid.grid.as_deref(), grid.grid_points as usize)
        }
        Command::Simulate {
            m,
            k,
            p,
            count,
            seed,
            out_dir,
        } => commands::simulate(&SimulateOptions {
            m,
            k,
            p,
            count,
            seed,
            out_dir,
        }),
        Command::SlaterTest {
            input,
            n_mc,
            epsilon,
            seed,
        } => commands::slater_test(&input, n_mc, epsilon, seed),
        Command::Oracle { input } => commands::oracle(&input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads as usize)
            .build_global()
        {
            eprintln!("error: cannot configure {} threads: {}", threads, e);
            return ExitCode::from(4);
        }
    }
    match std::panic::catch_unwind(|| run(cli.command)) {
        Ok(Ok(output)) => {
            print!("{}", output);
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code())
        }
        Err(_) => {
            eprintln!("error: internal assertion failed");
            ExitCode::from(4)
        }
    }
}
