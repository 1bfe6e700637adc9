//! Dense statevector evaluation of network programs.
//!
//! Basis index bit `n-1-s` holds site `s`, so site 0 is the most significant
//! bit and bit value 0 is spin up along z.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::dsl::{DslError, NetworkProgram, OpMatrix};
use crate::hamiltonian::Hamiltonian;
use crate::optimize::{nelder_mead_multistart, OptimizeResult, OptimizerConfig};

/// Largest site count accepted by the dense simulator.
pub const N_MAX: usize = 14;

/// Norm below which a state is treated as annihilated.
pub const ANNIHILATION_NORM: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{n} sites exceeds the dense limit of {max}")]
    SizeLimit { n: usize, max: usize },
    #[error("state norm vanished or overflowed")]
    Annihilated,
    #[error("expected {expected} parameters, got {got}")]
    ParamLength { expected: usize, got: usize },
    #[error("invalid site tuple {sites:?} for {n} sites")]
    BadSites { sites: Vec<usize>, n: usize },
    #[error("matrix is {got}x{got}, expected {expected}x{expected}")]
    MatrixShape { expected: usize, got: usize },
    #[error("state has {state} sites but the Hamiltonian has {hamiltonian}")]
    SizeMismatch { state: usize, hamiltonian: usize },
    #[error(transparent)]
    Dsl(#[from] DslError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BaseState {
    /// Every spin up along z.
    #[default]
    ZPlus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amps(n: usize, amps: Vec<Complex64>) -> Result<Self, SimError> {
        if n > N_MAX {
            return Err(SimError::SizeLimit { n, max: N_MAX });
        }
        if amps.len() != 1usize << n {
            return Err(SimError::MatrixShape {
                expected: 1 << n,
                got: amps.len(),
            });
        }
        Ok(StateVector { n, amps })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self, SimError> {
        if n > N_MAX {
            return Err(SimError::SizeLimit { n, max: N_MAX });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Result<Self, SimError> {
        let nrm = self.norm();
        if !(nrm.is_finite() && nrm >= ANNIHILATION_NORM) {
            return Err(SimError::Annihilated);
        }
        for a in &mut self.amps {
            *a /= nrm;
        }
        Ok(self)
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        for a in &mut self.amps {
            *a *= c;
        }
        self
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |<a|b>| / (|a| |b|); insensitive to global phase and scale.
    pub fn overlap_modulus(&self, other: &StateVector) -> f64 {
        self.inner(other).norm() / (self.norm() * other.norm())
    }

    /// Apply a 2^k x 2^k matrix on `sites` (first site most significant in
    /// the local index). No renormalisation.
    pub fn apply(&mut self, m: &OpMatrix, sites: &[usize]) -> Result<(), SimError> {
        let k = sites.len();
        let dim = 1usize << k;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(SimError::MatrixShape {
                expected: dim,
                got: m.nrows(),
            });
        }
        let bad = || SimError::BadSites {
            sites: sites.to_vec(),
            n: self.n,
        };
        if k == 0 || sites.iter().any(|&s| s >= self.n) {
            return Err(bad());
        }
        for (i, s) in sites.iter().enumerate() {
            if sites[..i].contains(s) {
                return Err(bad());
            }
        }
        let masks: Vec<usize> = sites.iter().map(|&s| 1usize << (self.n - 1 - s)).collect();
        let norm_sqr = match k {
            1 => apply_one(&mut self.amps, m, masks[0]),
            2 => apply_two(&mut self.amps, m, masks[0], masks[1]),
            _ => apply_general(&mut self.amps, m, &masks),
        };
        if !(norm_sqr.is_finite() && norm_sqr.sqrt() >= ANNIHILATION_NORM) {
            return Err(SimError::Annihilated);
        }
        Ok(())
    }
}

fn apply_one(amps: &mut [Complex64], m: &OpMatrix, mask: usize) -> f64 {
    let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let mut acc = 0.0;
    for i in 0..amps.len() {
        if i & mask != 0 {
            continue;
        }
        let (a0, a1) = (amps[i], amps[i | mask]);
        let b0 = m00 * a0 + m01 * a1;
        let b1 = m10 * a0 + m11 * a1;
        amps[i] = b0;
        amps[i | mask] = b1;
        acc += b0.norm_sqr() + b1.norm_sqr();
    }
    acc
}

fn apply_two(amps: &mut [Complex64], m: &OpMatrix, hi: usize, lo: usize) -> f64 {
    let both = hi | lo;
    let mut acc = 0.0;
    let mut mm = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (r, row) in mm.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = m[(r, c)];
        }
    }
    for i in 0..amps.len() {
        if i & both != 0 {
            continue;
        }
        let idx = [i, i | lo, i | hi, i | both];
        let a = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for (r, &j) in idx.iter().enumerate() {
            let row = &mm[r];
            let b = row[0] * a[0] + row[1] * a[1] + row[2] * a[2] + row[3] * a[3];
            amps[j] = b;
            acc += b.norm_sqr();
        }
    }
    acc
}

fn apply_general(amps: &mut [Complex64], m: &OpMatrix, masks: &[usize]) -> f64 {
    let k = masks.len();
    let dim = 1usize << k;
    let all: usize = masks.iter().fold(0, |a, &b| a | b);
    let offsets: Vec<usize> = (0..dim)
        .map(|local| {
            (0..k)
                .filter(|&j| local & (1 << (k - 1 - j)) != 0)
                .fold(0, |a, j| a | masks[j])
        })
        .collect();
    let mut gathered = vec![Complex64::new(0.0, 0.0); dim];
    let mut acc = 0.0;
    for i in 0..amps.len() {
        if i & all != 0 {
            continue;
        }
        for (g, off) in gathered.iter_mut().zip(&offsets) {
            *g = amps[i | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let b: Complex64 = (0..dim).map(|c| m[(r, c)] * gathered[c]).sum();
            amps[i | off] = b;
            acc += b.norm_sqr();
        }
    }
    acc
}

pub fn init_state(n: usize, base: BaseState) -> Result<StateVector, SimError> {
    if n == 0 {
        return Err(SimError::BadSites { sites: vec![], n });
    }
    match base {
        BaseState::ZPlus => StateVector::basis(n, 0),
    }
}

/// Functional form of [`StateVector::apply`].
pub fn apply_tensor(
    state: &StateVector,
    m: &OpMatrix,
    sites: &[usize],
) -> Result<StateVector, SimError> {
    let mut out = state.clone();
    out.apply(m, sites)?;
    Ok(out)
}

fn op_matrices(prog: &NetworkProgram, params: &[f64]) -> Result<Vec<OpMatrix>, SimError> {
    if params.len() != prog.num_params {
        return Err(SimError::ParamLength {
            expected: prog.num_params,
            got: params.len(),
        });
    }
    prog.ops
        .iter()
        .map(|op| Ok(op.tensor.matrix(&params[op.params.clone()])?))
        .collect()
}

/// Run the program's steps on an arbitrary starting state.
pub fn run_program(
    prog: &NetworkProgram,
    params: &[f64],
    mut state: StateVector,
) -> Result<StateVector, SimError> {
    if state.n() != prog.n {
        return Err(SimError::SizeMismatch {
            state: state.n(),
            hamiltonian: prog.n,
        });
    }
    let mats = op_matrices(prog, params)?;
    for step in &prog.steps {
        state.apply(&mats[step.op], &step.sites)?;
    }
    Ok(state)
}

/// Unnormalised output state of the program applied to the all-up state.
pub fn evaluate_network(prog: &NetworkProgram, params: &[f64]) -> Result<StateVector, SimError> {
    run_program(prog, params, init_state(prog.n, BaseState::ZPlus)?)
}

/// The program as a dense 2^n x 2^n operator (column j is the image of
/// basis state j). Used for promoted sub-networks.
pub fn contract_program(prog: &NetworkProgram, params: &[f64]) -> Result<OpMatrix, SimError> {
    if prog.n > N_MAX {
        return Err(SimError::SizeLimit { n: prog.n, max: N_MAX });
    }
    let mats = op_matrices(prog, params)?;
    let dim = 1usize << prog.n;
    let mut out = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut state = StateVector::basis(prog.n, col)?;
        for step in &prog.steps {
            // A column may legitimately vanish (non-unitary sub-networks), so
            // annihilation is not an error here.
            match state.apply(&mats[step.op], &step.sites) {
                Ok(()) | Err(SimError::Annihilated) => {}
                Err(e) => return Err(e),
            }
        }
        for (row, a) in state.amps().iter().enumerate() {
            out[(row, col)] = *a;
        }
    }
    Ok(out)
}

/// Rayleigh quotient <psi|H|psi> / (<psi|psi> n).
pub fn energy_per_site(state: &StateVector, h: &Hamiltonian) -> Result<f64, SimError> {
    if state.n() != h.n() {
        return Err(SimError::SizeMismatch {
            state: state.n(),
            hamiltonian: h.n(),
        });
    }
    let norm_sqr = state.norm_sqr();
    if !(norm_sqr.is_finite() && norm_sqr.sqrt() >= ANNIHILATION_NORM) {
        return Err(SimError::Annihilated);
    }
    Ok(h.expectation(state.amps()) / (norm_sqr * state.n() as f64))
}

/// Multi-start simplex minimisation of the per-site energy.
pub fn optimize_params(
    prog: &NetworkProgram,
    h: &Hamiltonian,
    cfg: &OptimizerConfig,
) -> Result<OptimizeResult, SimError> {
    if prog.n != h.n() {
        return Err(SimError::SizeMismatch {
            state: prog.n,
            hamiltonian: h.n(),
        });
    }
    if prog.num_params == 0 {
        let e = energy_per_site(&evaluate_network(prog, &[])?, h)?;
        return Ok(OptimizeResult {
            params: vec![],
            value: e,
            restart_values: vec![e],
            evaluations: 1,
        });
    }
    let objective = |x: &[f64]| {
        evaluate_network(prog, x)
            .and_then(|s| energy_per_site(&s, h))
            .unwrap_or(f64::INFINITY)
    };
    let res = nelder_mead_multistart(objective, prog.num_params, cfg);
    if res.value.is_finite() {
        Ok(res)
    } else {
        Err(SimError::Annihilated)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{instantiate, parse_motif, TensorSpec};
    use crate::hamiltonian::{build, Model};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn init_and_limits() {
        let s = init_state(1, BaseState::ZPlus).unwrap();
        assert_eq!(s.amps(), &[c(1.0), c(0.0)]);
        assert_eq!(init_state(3, BaseState::ZPlus).unwrap().amps()[0], c(1.0));
        assert!(matches!(
            init_state(15, BaseState::ZPlus),
            Err(SimError::SizeLimit { .. })
        ));
    }

    #[test]
    fn zero_angle_coupling_is_identity() {
        let m = TensorSpec::from_id("eZY").unwrap().matrix(&[0.0]).unwrap();
        let s = init_state(2, BaseState::ZPlus).unwrap();
        assert_eq!(apply_tensor(&s, &m, &[0, 1]).unwrap(), s);
    }

    #[test]
    fn three_site_kernel_matches_two_single_site_steps() {
        // X on site 0 and site 2 as one 8x8 matrix versus two 2x2 steps
        let x = TensorSpec::from_id("eX").unwrap().matrix(&[std::f64::consts::PI]).unwrap();
        let id = OpMatrix::identity(2, 2);
        let big = x.kronecker(&id).kronecker(&x);
        let start = StateVector::from_amps(
            4,
            (0..16).map(|i| Complex64::new(i as f64, 0.5 * i as f64)).collect(),
        )
        .unwrap();
        let mut a = start.clone();
        a.apply(&big, &[1, 2, 3]).unwrap();
        let mut b = start;
        b.apply(&x, &[1]).unwrap();
        b.apply(&x, &[3]).unwrap();
        for (p, q) in a.amps().iter().zip(b.amps()) {
            assert!((p - q).norm() < 1e-12);
        }
    }

    #[test]
    fn bad_sites_and_shapes() {
        let mut s = init_state(3, BaseState::ZPlus).unwrap();
        let m2 = OpMatrix::identity(2, 2);
        let m4 = OpMatrix::identity(4, 4);
        assert!(matches!(s.apply(&m2, &[3]), Err(SimError::BadSites { .. })));
        assert!(matches!(s.apply(&m4, &[1, 1]), Err(SimError::BadSites { .. })));
        assert!(matches!(s.apply(&m4, &[1]), Err(SimError::MatrixShape { .. })));
        let zero = OpMatrix::zeros(2, 2);
        assert!(matches!(s.apply(&zero, &[0]), Err(SimError::Annihilated)));
    }

    #[test]
    fn product_state_energies() {
        let s = init_state(5, BaseState::ZPlus).unwrap();
        let t = build(Model::Tfim, 5, 1.0, 0.0).unwrap();
        assert!((energy_per_site(&s, &t).unwrap() + 0.25).abs() < 1e-15);
        let s4 = init_state(4, BaseState::ZPlus).unwrap();
        let l = build(Model::Lmg, 4, 1.0, 0.0).unwrap();
        // six pairs, coefficient 1/16, divided by four sites
        assert!((energy_per_site(&s4, &l).unwrap() + 6.0 / 16.0 / 4.0).abs() < 1e-15);
        let scaled = s4.clone().scaled(c(5.0));
        assert!((energy_per_site(&scaled, &l).unwrap() - energy_per_site(&s4, &l).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn zero_parameter_program() {
        let prog = instantiate(&parse_motif("init()").unwrap(), 3).unwrap();
        let h = build(Model::Tfim, 3, 1.0, 0.5).unwrap();
        let r = optimize_params(&prog, &h, &OptimizerConfig::default()).unwrap();
        assert!(r.params.is_empty());
        assert!((r.value + 0.25).abs() < 1e-15);
    }
}
