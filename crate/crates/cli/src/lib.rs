//! Command implementations behind the `motifsearch` binary.

pub mod commands;
pub mod config;
pub mod error;

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Search,
    Eval,
    LmgFigures,
    TfimFigures,
    Robustness,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Search => "search",
            Command::Eval => "eval",
            Command::LmgFigures => "lmg-figures",
            Command::TfimFigures => "tfim-figures",
            Command::Robustness => "robustness",
        }
    }
}

/// Everything a single invocation needs.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub workers: usize,
    pub seed: Option<u64>,
}

#[derive(Serialize)]
struct Provenance<'a> {
    tool: &'a str,
    version: &'a str,
    command: &'a str,
    seed_override: Option<u64>,
    workers: usize,
}

fn load<T>(inv: &Invocation) -> Result<(T, String)>
where
    T: serde::de::DeserializeOwned + Serialize + Default,
{
    match &inv.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            Ok((config::parse(&text)?, text))
        }
        None => {
            let cfg = T::default();
            let text = serde_json::to_string_pretty(&cfg).map_err(CliError::runtime)?;
            Ok((cfg, text))
        }
    }
}

fn write_provenance(inv: &Invocation, config_text: &str) -> Result<()> {
    fs::create_dir_all(&inv.out)?;
    fs::write(inv.out.join("config.json"), config_text)?;
    let p = Provenance {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: inv.command.name(),
        seed_override: inv.seed,
        workers: inv.workers,
    };
    let text = serde_json::to_string_pretty(&p).map_err(CliError::runtime)?;
    fs::write(inv.out.join("provenance.json"), text + "\n")?;
    Ok(())
}

/// Validate the config, write provenance, then run the command.
pub fn run(inv: &Invocation) -> Result<()> {
    if inv.workers == 0 {
        return Err(CliError::Config("--workers must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(inv.workers)
        .build()
        .map_err(CliError::runtime)?;
    let out: &Path = &inv.out;
    match inv.command {
        Command::Search => {
            let (mut cfg, text) = load::<motifsearch_core::evo::SearchConfig>(inv)?;
            if let Some(s) = inv.seed {
                cfg.seed = s;
            }
            config::validate_search(&cfg)?;
            write_provenance(inv, &text)?;
            pool.install(|| commands::search(&cfg, out)).map(|_| ())
        }
        Command::Eval => {
            let (mut cfg, text) = load::<config::EvalConfig>(inv)?;
            if let Some(s) = inv.seed {
                cfg.optimizer.seed = s;
            }
            cfg.validate()?;
            write_provenance(inv, &text)?;
            pool.install(|| commands::eval(&cfg, out)).map(|_| ())
        }
        Command::LmgFigures => {
            let (mut cfg, text) = load::<config::LmgFiguresConfig>(inv)?;
            if let Some(s) = inv.seed {
                cfg.optimizer.seed = s;
            }
            cfg.validate()?;
            write_provenance(inv, &text)?;
            pool.install(|| commands::lmg_figures(&cfg, out)).map(|_| ())
        }
        Command::TfimFigures => {
            let (mut cfg, text) = load::<config::TfimFiguresConfig>(inv)?;
            if let Some(s) = inv.seed {
                cfg.optimizer.seed = s;
            }
            cfg.validate()?;
            write_provenance(inv, &text)?;
            pool.install(|| commands::tfim_figures(&cfg, out)).map(|_| ())
        }
        Command::Robustness => {
            let (mut cfg, text) = load::<config::RobustnessConfig>(inv)?;
            if let Some(s) = inv.seed {
                let k = cfg.seeds.len() as u64;
                cfg.seeds = (s..s + k).collect();
            }
            cfg.validate()?;
            write_provenance(inv, &text)?;
            pool.install(|| commands::robustness(&cfg, out)).map(|_| ())
        }
    }
}
