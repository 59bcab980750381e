mod commands;
mod human;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tempcops::GenFlags;

#[derive(Parser)]
#[command(
    name = "tempcops",
    version,
    about = "Cops and robber on periodic temporal graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenFlag {
    Reflexive,
    Symmetric,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RobberKind {
    Human,
    Adversarial,
    Random,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether the graph is copwin and print a witness.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Run the closure to exhaustion before looking for a star.
        #[arg(long)]
        no_early_stop: bool,
    },
    /// Cross-check the solver against the brute-force oracle.
    Verify {
        file: Option<PathBuf>,
        /// Random instances: N P D SEED COUNT.
        #[arg(long, num_args = 5, value_names = ["N", "P", "D", "SEED", "COUNT"], conflicts_with = "file")]
        random: Option<Vec<u64>>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        reflexive: bool,
        #[arg(long)]
        symmetric: bool,
    },
    /// Write the cop's winning strategy to a file.
    Strategy { file: PathBuf, out: PathBuf },
    /// Play the computed strategy against a robber.
    Play {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = RobberKind::Adversarial)]
        robber: RobberKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Robber's starting vertex (default: chosen by the robber).
        #[arg(long)]
        start: Option<usize>,
        /// Round limit (default p·n²).
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Print a random playable graph in .ptg form.
    Gen {
        n: usize,
        p: usize,
        d: usize,
        seed: u64,
        #[arg(value_enum)]
        flags: Vec<GenFlag>,
    },
    /// Time the solver and report its operation counters.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 9)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        period: usize,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long)]
        reflexive: bool,
        #[arg(long)]
        symmetric: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let res = match cli.cmd {
        Cmd::Check {
            file,
            k,
            no_early_stop,
        } => commands::check(&mut out, &file, k, !no_early_stop),
        Cmd::Verify {
            file,
            random,
            k,
            reflexive,
            symmetric,
        } => commands::verify(
            &mut out,
            file.as_deref(),
            random.as_deref(),
            k,
            reflexive,
            symmetric,
        ),
        Cmd::Strategy { file, out: path } => commands::strategy(&mut out, &file, &path),
        Cmd::Play {
            file,
            robber,
            seed,
            start,
            limit,
        } => commands::play(&mut out, &file, robber, seed, start, limit),
        Cmd::Gen {
            n,
            p,
            d,
            seed,
            flags,
        } => commands::gen(&mut out, n, p, d, seed, &flags),
        Cmd::Bench {
            sizes,
            seed,
            period,
            degree,
            reflexive,
            symmetric,
        } => commands::bench(
            &mut out,
            &sizes,
            seed,
            period,
            degree,
            GenFlags {
                reflexive,
                symmetric,
            },
        ),
    };
    let _ = out.flush();
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
