//! Exact matrix-product forms of the two-angle ansatz and closed-form
//! expectation values.

mod expval;
mod mps;
mod thermo;
mod transfer;
mod trig;
mod variational;

use thiserror::Error;

use crate::sim::SimError;

pub use expval::{
    expval_original, expval_parity, expval_translational, parity_norm_sqr, Observable, ST_GUARD,
};
pub use mps::{ladder_matrices, mps_matrices, mps_to_state, MpsForm, MpsMatrices, M2};
pub use thermo::{
    minimize_lmg_thermo, minimize_tfim_thermo, quartic_root_bound, tfim_critical_field,
    tfim_quartic_root, thermo_energy, thermo_long_range_zz, thermo_z, LmgThermoMinimum,
    TfimThermoMinimum,
};
pub use transfer::{conj_kron, transfer_set, Spectral, TransferSet, M4, V4};
pub use variational::{
    mean_field_tfim_correlation, optimize_parity_tfim, parity_half_chain_correlation,
    parity_tfim_energy, ParityOptimum,
};
pub use trig::{Angles, GeneratingScalars, ShortHand, TrigBundle, TrigSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("at least two sites are required, got {0}")]
    TooFewSites(usize),
    #[error("{n} sites exceeds the dense limit of {max}")]
    SizeLimit { n: usize, max: usize },
    #[error("|ST| = {0} is too close to 1 for the finite-size closed forms")]
    DegenerateST(f64),
    #[error("(S, T) = ({s}, {t}) lies outside the admissible square")]
    OutOfDomain { s: f64, t: f64 },
    #[error("site {site} is outside 0..{n}")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("distance {r} is outside 0..={n}")]
    BadDistance { r: usize, n: usize },
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Sim(#[from] SimError),
}
