//! Size-independent motifs and their instantiation into concrete networks.

mod motif;
mod pattern;
mod program;
mod tensor;
mod text;

use thiserror::Error;

pub use motif::{
    apply_mask, compose, cycle_edges, pivot_edges, Boundary, Cycle, Motif, Node, Pivot, Primitive,
};
pub use pattern::{parse_pattern, Pattern, PatternKind};
pub use program::{instantiate, NetworkProgram, Operation, Step};
pub use tensor::{
    promote, promote_tied, BasisTag, LadderOp, NestedNetwork, OpMatrix, PauliAxis, TensorKind,
    TensorSpec,
};
pub use text::parse_motif;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DslError {
    #[error("malformed pattern {src:?}: {why}")]
    MalformedPattern { src: String, why: String },
    #[error("pattern {src:?} is longer than {n} active sites")]
    PatternTooLong { src: String, n: usize },
    #[error("{n_active} active sites cannot host a {arity}-site tensor")]
    TooFewSites { n_active: usize, arity: usize },
    #[error("pivot pattern {0:?} selects no site")]
    EmptyPivot(String),
    #[error("pivot pattern {pattern:?} selects {count} sites; two-site pivots need exactly one")]
    MultiPivot { pattern: String, count: usize },
    #[error("pivots over {0}-site tensors are not supported")]
    UnsupportedPivotArity(usize),
    #[error("every site is masked but a tensor primitive follows")]
    AllSitesMasked,
    #[error("invalid primitive: {0}")]
    InvalidPrimitive(String),
    #[error("unknown tensor {0:?}")]
    UnknownTensor(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expected {expected} parameters, got {got}")]
    ParamLength { expected: usize, got: usize },
    #[error("nested network contraction failed: {0}")]
    Nested(String),
}
