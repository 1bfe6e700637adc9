//! Finite-N optimisation of the parity-projected state for the TFIM, using
//! only closed forms (any N).

use super::expval::{expval_parity, Observable};
use super::{AnalyticError, Angles};
use crate::optimize::{nelder_mead_multistart, OptimizerConfig};

/// Per-site TFIM energy -(J/4)<Z_i Z_{i+1}> - (h/2)<X_i> of the parity state.
pub fn parity_tfim_energy(angles: Angles, n: usize, j: f64, h: f64) -> Result<f64, AnalyticError> {
    let zz = expval_parity(angles, n, Observable::ZZ(1))?;
    let x = expval_parity(angles, n, Observable::X)?;
    Ok(-0.25 * j * zz - 0.5 * h * x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityOptimum {
    pub angles: Angles,
    pub energy: f64,
}

pub fn optimize_parity_tfim(
    n: usize,
    j: f64,
    h: f64,
    cfg: &OptimizerConfig,
) -> Result<ParityOptimum, AnalyticError> {
    let res = nelder_mead_multistart(
        |x: &[f64]| parity_tfim_energy(Angles::new(x[0], x[1]), n, j, h).unwrap_or(f64::INFINITY),
        2,
        cfg,
    );
    let angles = Angles::new(res.params[0], res.params[1]);
    Ok(ParityOptimum {
        angles,
        energy: parity_tfim_energy(angles, n, j, h)?,
    })
}

/// rho^z_{N/2} = <Z_0 Z_{N/2}>/4 of the parity state; N must be even.
pub fn parity_half_chain_correlation(angles: Angles, n: usize) -> Result<f64, AnalyticError> {
    if n % 2 != 0 {
        return Err(AnalyticError::Unsupported("half-chain correlation needs even N"));
    }
    Ok(0.25 * expval_parity(angles, n, Observable::ZZ(n / 2))?)
}

/// Product-state TFIM optimum: sin(phi) = h/J clamped; returns rho^z_{N/2}.
pub fn mean_field_tfim_correlation(j: f64, h: f64) -> f64 {
    let x = if j > 0.0 { (h / j).clamp(-1.0, 1.0) } else { h.signum() };
    0.25 * (1.0 - x * x)
}
