use serde::{Deserialize, Serialize};

use super::EvoError;
use crate::hamiltonian::Model;
use crate::optimize::OptimizerConfig;

/// Which tensor pool genomes draw their mappings from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorBasis {
    Pauli,
    Ladder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub sizes: Vec<usize>,
    /// One weight per size; empty means uniform. Normalised before use.
    pub weights: Vec<f64>,
    pub l1: f64,
    pub l2: f64,
    pub rho: f64,
    pub epsilon: f64,
    pub pool_seed_count: usize,
    pub budget_steps: usize,
    pub seed: u64,
    pub operator_basis: OperatorBasis,
    pub model: Model,
    #[serde(rename = "J", alias = "j")]
    pub j: f64,
    pub h: f64,
    /// Longest genome (in primitives) that is still evaluated.
    pub max_primitives: usize,
    pub optimizer: OptimizerConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            sizes: vec![3, 4, 5],
            weights: Vec::new(),
            l1: 7e-4,
            l2: 7e-4,
            rho: 0.01,
            epsilon: 0.33,
            pool_seed_count: 20,
            budget_steps: 200,
            seed: 0,
            operator_basis: OperatorBasis::Pauli,
            model: Model::Tfim,
            j: 1.0,
            h: 0.5,
            max_primitives: 8,
            optimizer: OptimizerConfig::default(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), EvoError> {
        let bad = |m: String| Err(EvoError::Config(m));
        if self.sizes.is_empty() {
            return bad("sizes must not be empty".into());
        }
        let mut seen = self.sizes.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.sizes.len() {
            return bad("sizes must be distinct".into());
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| !(2..=crate::sim::N_MAX).contains(&n)) {
            return bad(format!("size {n} outside 2..={}", crate::sim::N_MAX));
        }
        if !self.weights.is_empty() {
            if self.weights.len() != self.sizes.len() {
                return bad(format!(
                    "{} weights for {} sizes",
                    self.weights.len(),
                    self.sizes.len()
                ));
            }
            if self.weights.iter().any(|w| !(w.is_finite() && *w >= 0.0))
                || self.weights.iter().sum::<f64>() <= 0.0
            {
                return bad("weights must be non-negative with a positive sum".into());
            }
        }
        for (name, v) in [("rho", self.rho), ("epsilon", self.epsilon)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name}={v} outside [0, 1]"));
            }
        }
        for (name, v) in [("l1", self.l1), ("l2", self.l2), ("J", self.j), ("h", self.h)] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        if self.pool_seed_count < 2 {
            return bad("pool_seed_count must be at least 2".into());
        }
        if self.max_primitives == 0 {
            return bad("max_primitives must be positive".into());
        }
        if self.optimizer.restarts == 0 || self.optimizer.max_evals == 0 {
            return bad("optimizer needs at least one restart and one evaluation".into());
        }
        Ok(())
    }

    /// Weights summing to one, aligned with `sizes`.
    pub fn normalized_weights(&self) -> Vec<f64> {
        if self.weights.is_empty() {
            let w = 1.0 / self.sizes.len() as f64;
            return vec![w; self.sizes.len()];
        }
        let total: f64 = self.weights.iter().sum();
        self.weights.iter().map(|w| w / total).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_roundtrip() {
        let c = SearchConfig::default();
        c.validate().unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"J\":1.0"));
        let back: SearchConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let w = c.normalized_weights();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_ranges() {
        for patch in [
            r#"{"rho": 1.5}"#,
            r#"{"epsilon": -0.1}"#,
            r#"{"sizes": []}"#,
            r#"{"sizes": [3, 3]}"#,
            r#"{"sizes": [3, 4], "weights": [1.0]}"#,
            r#"{"sizes": [20]}"#,
        ] {
            let c: SearchConfig = serde_json::from_str(patch).unwrap();
            assert!(c.validate().is_err(), "{patch}");
        }
        assert!(serde_json::from_str::<SearchConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn weights_normalise() {
        let c = SearchConfig {
            sizes: vec![3, 4],
            weights: vec![1.0, 3.0],
            ..SearchConfig::default()
        };
        assert_eq!(c.normalized_weights(), vec![0.25, 0.75]);
    }
}
