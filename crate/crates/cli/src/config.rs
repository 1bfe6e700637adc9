//! Per-command JSON configs. Every field has a default, unknown keys are
//! rejected, and `validate` runs before any work starts.

use motifsearch_core::evo::SearchConfig;
use motifsearch_core::hamiltonian::Model;
use motifsearch_core::optimize::OptimizerConfig;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

fn grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
        .collect()
}

fn check_nonempty<T>(name: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        return Err(CliError::Config(format!("{name} must not be empty")));
    }
    Ok(())
}

fn check_finite(name: &str, v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Config(format!("{name} must be finite")));
    }
    Ok(())
}

pub fn validate_search(cfg: &SearchConfig) -> Result<()> {
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))
}

/// `eval`: optimise one ansatz at several sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    /// `original`, `xy`, `mean_field`, `ladder`, or a genome in text form.
    pub ansatz: String,
    pub model: Model,
    #[serde(rename = "J", alias = "j")]
    pub j: f64,
    pub h: f64,
    pub sizes: Vec<usize>,
    pub optimizer: OptimizerConfig,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            ansatz: "original".into(),
            model: Model::Tfim,
            j: 1.0,
            h: 0.5,
            sizes: vec![3, 4, 5, 6, 7, 8],
            optimizer: OptimizerConfig::default(),
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        check_nonempty("sizes", &self.sizes)?;
        check_finite("J/h", &[self.j, self.h])?;
        if let Some(n) = self
            .sizes
            .iter()
            .find(|&&n| !(2..=motifsearch_core::sim::N_MAX).contains(&n))
        {
            return Err(CliError::Config(format!("size {n} outside 2..={}", motifsearch_core::sim::N_MAX)));
        }
        Ok(())
    }
}

/// `lmg-figures`: magnetisation curves and energy errors of the symmetrised state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LmgFiguresConfig {
    #[serde(rename = "J", alias = "j")]
    pub j: f64,
    pub magnetisation_sizes: Vec<usize>,
    pub magnetisation_fields: Vec<f64>,
    pub error_sizes: Vec<usize>,
    pub error_fields: Vec<f64>,
    pub optimizer: OptimizerConfig,
}

impl Default for LmgFiguresConfig {
    fn default() -> Self {
        LmgFiguresConfig {
            j: 1.0,
            magnetisation_sizes: vec![12, 50, 100],
            magnetisation_fields: grid(0.0, 1.0, 21),
            error_sizes: vec![10, 25, 50, 100],
            error_fields: vec![0.1, 0.25, 0.5, 0.75, 1.0],
            optimizer: OptimizerConfig::default(),
        }
    }
}

impl LmgFiguresConfig {
    pub fn validate(&self) -> Result<()> {
        check_nonempty("magnetisation_sizes", &self.magnetisation_sizes)?;
        check_nonempty("magnetisation_fields", &self.magnetisation_fields)?;
        check_nonempty("error_sizes", &self.error_sizes)?;
        check_nonempty("error_fields", &self.error_fields)?;
        check_finite("fields", &self.magnetisation_fields)?;
        check_finite("fields", &self.error_fields)?;
        check_finite("J", &[self.j])?;
        if self.j <= 0.0 {
            return Err(CliError::Config("J must be positive".into()));
        }
        let all = self.magnetisation_sizes.iter().chain(&self.error_sizes);
        if all.clone().any(|&n| n < 2) {
            return Err(CliError::Config("sizes must be at least 2".into()));
        }
        Ok(())
    }
}

/// `tfim-figures`: half-chain correlation of the parity state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TfimFiguresConfig {
    #[serde(rename = "J", alias = "j")]
    pub j: f64,
    /// Even sizes only.
    pub sizes: Vec<usize>,
    pub fields: Vec<f64>,
    pub optimizer: OptimizerConfig,
}

impl Default for TfimFiguresConfig {
    fn default() -> Self {
        TfimFiguresConfig {
            j: 1.0,
            sizes: vec![4, 8, 12, 20, 50],
            fields: grid(0.0, 1.5, 31),
            optimizer: OptimizerConfig::default(),
        }
    }
}

impl TfimFiguresConfig {
    pub fn validate(&self) -> Result<()> {
        check_nonempty("sizes", &self.sizes)?;
        check_nonempty("fields", &self.fields)?;
        check_finite("fields", &self.fields)?;
        check_finite("J", &[self.j])?;
        if self.j <= 0.0 {
            return Err(CliError::Config("J must be positive".into()));
        }
        if let Some(n) = self.sizes.iter().find(|&&n| n < 2 || n % 2 != 0) {
            return Err(CliError::Config(format!(
                "invalid grid: size {n} has no half-chain partner (even N >= 2 required)"
            )));
        }
        Ok(())
    }
}

/// `robustness`: searches over penalty pairs and seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RobustnessConfig {
    pub search: SearchConfig,
    pub penalty_pairs: Vec<[f64; 2]>,
    pub seeds: Vec<u64>,
}

impl Default for RobustnessConfig {
    fn default() -> Self {
        RobustnessConfig {
            search: SearchConfig::default(),
            penalty_pairs: vec![[0.0, 0.0], [7e-4, 7e-4]],
            seeds: (1..=10).collect(),
        }
    }
}

impl RobustnessConfig {
    pub fn validate(&self) -> Result<()> {
        validate_search(&self.search)?;
        check_nonempty("penalty_pairs", &self.penalty_pairs)?;
        check_nonempty("seeds", &self.seeds)?;
        if self
            .penalty_pairs
            .iter()
            .any(|p| p.iter().any(|v| !v.is_finite()))
        {
            return Err(CliError::Config("penalties must be finite".into()));
        }
        Ok(())
    }
}
