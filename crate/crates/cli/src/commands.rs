use std::fs;
use std::path::Path;

use motifsearch_core::analytic::{
    mean_field_tfim_correlation, minimize_tfim_thermo, optimize_parity_tfim,
    parity_half_chain_correlation,
};
use motifsearch_core::ansatz;
use motifsearch_core::dsl::{instantiate, parse_motif, Motif};
use motifsearch_core::evo::{structural_complexity, Search, SearchConfig, StepRecord, StructureClass};
use motifsearch_core::hamiltonian::{build, exact_ground, lmg_exact, Model};
use motifsearch_core::sim::{optimize_params, N_MAX};
use motifsearch_core::symmetry::{lmg_mean_field, optimize_symmetrized};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{EvalConfig, LmgFiguresConfig, RobustnessConfig, TfimFiguresConfig};
use crate::error::{CliError, Result};

pub fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub const LOG_HEADER: [&str; 5] = ["step", "best_fitness", "best_class", "pool_unique", "wallclock_s"];
pub const EVAL_HEADER: [&str; 7] =
    ["N", "energy", "exact_energy", "rel_err", "structural", "variational", "params"];
pub const FIG2_HEADER: [&str; 4] = ["N", "h", "m_rms_ansatz", "m_rms_exact"];
pub const FIG3_HEADER: [&str; 4] = ["N", "h", "rel_err_symmetrized", "rel_err_meanfield"];
pub const FIGA1_HEADER: [&str; 6] = [
    "N",
    "h",
    "corr_parity_ansatz",
    "corr_exact",
    "corr_meanfield",
    "corr_thermo_ansatz",
];
pub const ROBUSTNESS_HEADER: [&str; 5] = ["l1", "l2", "step", "class", "fraction"];
pub const RUNS_HEADER: [&str; 7] =
    ["l1", "l2", "seed", "best_class", "best_fitness", "best_max_structural", "best_genome"];

/// Outcome of one search, as written to disk.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub history: Vec<StepRecord>,
    pub best_genome: String,
    pub best_class: StructureClass,
    pub best_fitness: f64,
    pub best_max_structural: f64,
}

fn summarise(s: &Search) -> SearchOutcome {
    let best = s.best();
    SearchOutcome {
        history: s.history().to_vec(),
        best_genome: best.genome.canonical(),
        best_class: s.class_of(best),
        best_fitness: best.fitness.unwrap_or(f64::INFINITY),
        best_max_structural: best
            .per_size
            .iter()
            .flatten()
            .map(|r| r.structural)
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

fn run_search_quiet(cfg: &SearchConfig) -> Result<Search> {
    let mut s = Search::new(cfg.clone()).map_err(CliError::runtime)?;
    s.run(|_| {}).map_err(CliError::runtime)?;
    Ok(s)
}

/// `search`: pool.jsonl, log.csv, best_genome.txt.
pub fn search(cfg: &SearchConfig, out: &Path) -> Result<SearchOutcome> {
    let s = run_search_quiet(cfg)?;
    fs::write(out.join("pool.jsonl"), s.snapshot_jsonl())?;
    write_csv(&out.join("log.csv"), &LOG_HEADER, s.history())?;
    let outcome = summarise(&s);
    fs::write(out.join("best_genome.txt"), format!("{}\n", outcome.best_genome))?;
    Ok(outcome)
}

fn resolve_ansatz(spec: &str) -> Result<Motif> {
    Ok(match spec {
        "original" => ansatz::original(),
        "xy" => ansatz::xy_competitor(),
        "mean_field" => ansatz::mean_field(),
        "ladder" => ansatz::ladder(),
        text => parse_motif(text).map_err(|e| CliError::Config(format!("ansatz: {e}")))?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalRow {
    pub n: usize,
    pub energy: f64,
    pub exact_energy: Option<f64>,
    pub rel_err: Option<f64>,
    pub structural: f64,
    pub variational: usize,
    pub params: String,
}

fn exact_energy(model: Model, n: usize, j: f64, h: f64) -> Result<Option<f64>> {
    Ok(match model {
        Model::Lmg => Some(lmg_exact(n, j, h).energy_per_site(n)),
        Model::Tfim if n <= N_MAX => {
            let ham = build(model, n, j, h).map_err(CliError::runtime)?;
            Some(exact_ground(&ham).map_err(CliError::runtime)?.energy_per_site(n))
        }
        Model::Tfim => None,
    })
}

/// `eval`: optimise one ansatz at every size; eval.csv.
pub fn eval(cfg: &EvalConfig, out: &Path) -> Result<Vec<EvalRow>> {
    let motif = resolve_ansatz(&cfg.ansatz)?;
    let rows = cfg
        .sizes
        .par_iter()
        .map(|&n| {
            let prog = instantiate(&motif, n).map_err(CliError::runtime)?;
            let ham = build(cfg.model, n, cfg.j, cfg.h).map_err(CliError::runtime)?;
            let res = optimize_params(&prog, &ham, &cfg.optimizer).map_err(CliError::runtime)?;
            let exact = exact_energy(cfg.model, n, cfg.j, cfg.h)?;
            Ok(EvalRow {
                n,
                energy: res.value,
                exact_energy: exact,
                rel_err: exact.map(|e| ((res.value - e) / e).abs()),
                structural: structural_complexity(&prog),
                variational: prog.num_params,
                params: res
                    .params
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    write_csv(&out.join("eval.csv"), &EVAL_HEADER, &rows)?;
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig2Row {
    pub n: usize,
    pub h: f64,
    pub m_rms_ansatz: f64,
    pub m_rms_exact: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig3Row {
    pub n: usize,
    pub h: f64,
    pub rel_err_symmetrized: f64,
    pub rel_err_meanfield: f64,
}

fn grid_points(sizes: &[usize], fields: &[f64]) -> Vec<(usize, f64)> {
    sizes
        .iter()
        .flat_map(|&n| fields.iter().map(move |&h| (n, h)))
        .collect()
}

/// `lmg-figures`: fig2.csv and fig3.csv.
pub fn lmg_figures(cfg: &LmgFiguresConfig, out: &Path) -> Result<(Vec<Fig2Row>, Vec<Fig3Row>)> {
    let j = cfg.j;
    let fig2 = grid_points(&cfg.magnetisation_sizes, &cfg.magnetisation_fields)
        .into_par_iter()
        .map(|(n, h)| {
            let opt = optimize_symmetrized(n, j, h, &cfg.optimizer).map_err(CliError::runtime)?;
            Ok(Fig2Row {
                n,
                h,
                m_rms_ansatz: opt.m_rms,
                m_rms_exact: lmg_exact(n, j, h).m_rms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fig3 = grid_points(&cfg.error_sizes, &cfg.error_fields)
        .into_par_iter()
        .map(|(n, h)| {
            let exact = lmg_exact(n, j, h).energy_per_site(n);
            let opt = optimize_symmetrized(n, j, h, &cfg.optimizer).map_err(CliError::runtime)?;
            let (_, mf) = lmg_mean_field(n, j, h);
            let rel = |e: f64| ((e - exact) / exact).abs();
            Ok(Fig3Row {
                n,
                h,
                rel_err_symmetrized: rel(opt.energy),
                rel_err_meanfield: rel(mf),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    write_csv(&out.join("fig2.csv"), &FIG2_HEADER, &fig2)?;
    write_csv(&out.join("fig3.csv"), &FIG3_HEADER, &fig3)?;
    Ok((fig2, fig3))
}

#[derive(Debug, Clone, Serialize)]
pub struct FigA1Row {
    pub n: usize,
    pub h: f64,
    pub corr_parity_ansatz: f64,
    pub corr_exact: Option<f64>,
    pub corr_meanfield: f64,
    pub corr_thermo_ansatz: f64,
}

/// `tfim-figures`: figA1.csv. The exact column is left empty beyond the
/// state-vector size limit.
pub fn tfim_figures(cfg: &TfimFiguresConfig, out: &Path) -> Result<Vec<FigA1Row>> {
    let j = cfg.j;
    let rows = grid_points(&cfg.sizes, &cfg.fields)
        .into_par_iter()
        .map(|(n, h)| {
            let opt = optimize_parity_tfim(n, j, h, &cfg.optimizer).map_err(CliError::runtime)?;
            let corr = parity_half_chain_correlation(opt.angles, n).map_err(CliError::runtime)?;
            let exact = if n <= N_MAX {
                let ham = build(Model::Tfim, n, j, h).map_err(CliError::runtime)?;
                exact_ground(&ham).map_err(CliError::runtime)?.corr_half
            } else {
                None
            };
            // thermodynamic forms are written for J = 1
            let thermo = minimize_tfim_thermo(h / j);
            Ok(FigA1Row {
                n,
                h,
                corr_parity_ansatz: corr,
                corr_exact: exact,
                corr_meanfield: mean_field_tfim_correlation(j, h),
                corr_thermo_ansatz: 0.25 * thermo.long_range_zz(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    write_csv(&out.join("figA1.csv"), &FIGA1_HEADER, &rows)?;
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityRow {
    pub l1: f64,
    pub l2: f64,
    pub step: usize,
    pub class: StructureClass,
    pub fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRow {
    pub l1: f64,
    pub l2: f64,
    pub seed: u64,
    pub best_class: StructureClass,
    pub best_fitness: f64,
    pub best_max_structural: f64,
    pub best_genome: String,
}

/// `robustness`: class densities per (penalty pair, step) and one summary
/// row per run.
pub fn robustness(cfg: &RobustnessConfig, out: &Path) -> Result<(Vec<DensityRow>, Vec<RunRow>)> {
    let jobs: Vec<(f64, f64, u64)> = cfg
        .penalty_pairs
        .iter()
        .flat_map(|&[l1, l2]| cfg.seeds.iter().map(move |&seed| (l1, l2, seed)))
        .collect();
    let finished = jobs
        .par_iter()
        .map(|&(l1, l2, seed)| {
            let sc = SearchConfig {
                l1,
                l2,
                seed,
                ..cfg.search.clone()
            };
            Ok(summarise(&run_search_quiet(&sc)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut density = Vec::new();
    let mut runs = Vec::new();
    for (pair, chunk) in cfg.penalty_pairs.iter().zip(finished.chunks(cfg.seeds.len())) {
        let [l1, l2] = *pair;
        let mut outcomes = Vec::new();
        for (&seed, o) in cfg.seeds.iter().zip(chunk) {
            runs.push(RunRow {
                l1,
                l2,
                seed,
                best_class: o.best_class,
                best_fitness: o.best_fitness,
                best_max_structural: o.best_max_structural,
                best_genome: o.best_genome.clone(),
            });
            outcomes.push(o);
        }
        let total = outcomes.len() as f64;
        for step in 1..=cfg.search.budget_steps {
            for class in StructureClass::ALL {
                let hits = outcomes
                    .iter()
                    .filter(|o| o.history.get(step - 1).map(|r| r.best_class) == Some(class))
                    .count();
                density.push(DensityRow {
                    l1,
                    l2,
                    step,
                    class,
                    fraction: hits as f64 / total,
                });
            }
        }
    }
    write_csv(&out.join("robustness.csv"), &ROBUSTNESS_HEADER, &density)?;
    write_csv(&out.join("robustness_runs.csv"), &RUNS_HEADER, &runs)?;
    Ok((density, runs))
}
