//! Tournament-selection evolutionary search over motifs.

mod config;
mod operators;
mod search;

pub use config::{OperatorBasis, SearchConfig};
pub use operators::{crossover, mutate, random_motif, random_primitive, tensor_pool};
pub use search::{
    classify, contestant_count, evaluate_genome, fitness_from_records, genome_seed, structural_complexity,
    variational_complexity, Evaluation, Individual, Reference, Search, SizeRecord, Snapshot,
    StepRecord, StructureClass, BATCH, UNIQUE_PER_STEP,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvoError {
    #[error("invalid search config: {0}")]
    Config(String),
    #[error("pool has {0} individuals; a tournament needs at least 2")]
    NeedMoreIndividuals(usize),
    #[error("individual has not been evaluated")]
    NotEvaluated,
    #[error("could not seed the pool: {0} candidates failed to evaluate")]
    SeedingFailed(usize),
}
