use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use motifsearch::{run, Command, Invocation};

#[derive(Parser)]
#[command(name = "motifsearch", version, about = "Evolutionary motif search and ansatz figure tables")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evolutionary search; writes pool.jsonl, log.csv, best_genome.txt
    Search(Common),
    /// Optimise one ansatz at several sizes; writes eval.csv
    Eval(Common),
    /// Symmetrised LMG tables; writes fig2.csv and fig3.csv
    LmgFigures(Common),
    /// Parity-projected TFIM correlations; writes figA1.csv
    TfimFigures(Common),
    /// Class densities over penalty pairs and seeds; writes robustness.csv
    Robustness(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config; defaults are used when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (created if missing)
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Overrides the seed in the config
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, c) = match cli.command {
        Cmd::Search(c) => (Command::Search, c),
        Cmd::Eval(c) => (Command::Eval, c),
        Cmd::LmgFigures(c) => (Command::LmgFigures, c),
        Cmd::TfimFigures(c) => (Command::TfimFigures, c),
        Cmd::Robustness(c) => (Command::Robustness, c),
    };
    let inv = Invocation {
        command,
        config: c.config,
        out: c.out,
        workers: c.workers,
        seed: c.seed,
    };
    match run(&inv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("motifsearch: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
