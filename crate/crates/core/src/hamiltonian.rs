//! LMG and transverse-field Ising Hamiltonians with exact ground states.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sim::N_MAX;

/// Largest size diagonalised densely. A 2^12 matrix is 128 MiB; 2^14 would
/// need several GiB with workspace.
pub const DENSE_MAX: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error("{0} sites are too few for two-site terms")]
    TooFewSites(usize),
    #[error("{n} sites exceeds the limit of {max}")]
    SizeLimit { n: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    #[serde(alias = "lmg", alias = "LMG")]
    Lmg,
    #[serde(alias = "tfim", alias = "TFIM")]
    Tfim,
}

/// H = -(J/4N) sum_{i<j} Z_i Z_j - (h/2) sum_i X_i               (Lmg)
/// H = -(J/4)  sum_i Z_i Z_{i+1} - (h/2) sum_i X_i, periodic     (Tfim)
///
/// Stored as the diagonal of the ZZ part plus the uniform X field.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    model: Model,
    n: usize,
    j: f64,
    h: f64,
    diag: Vec<f64>,
}

/// z eigenvalue (+1 up, -1 down) of site `s` in basis state `k`.
fn spin(k: usize, n: usize, s: usize) -> f64 {
    if (k >> (n - 1 - s)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn build(model: Model, n: usize, j: f64, h: f64) -> Result<Hamiltonian, HamiltonianError> {
    if n < 2 {
        return Err(HamiltonianError::TooFewSites(n));
    }
    if n > N_MAX {
        return Err(HamiltonianError::SizeLimit { n, max: N_MAX });
    }
    let diag = (0..1usize << n)
        .map(|k| match model {
            Model::Lmg => {
                let m = n as f64 - 2.0 * k.count_ones() as f64;
                -(j / (4.0 * n as f64)) * (m * m - n as f64) / 2.0
            }
            Model::Tfim => {
                let bonds: f64 = (0..n).map(|i| spin(k, n, i) * spin(k, n, (i + 1) % n)).sum();
                -(j / 4.0) * bonds
            }
        })
        .collect();
    Ok(Hamiltonian {
        model,
        n,
        j,
        h,
        diag,
    })
}

impl Hamiltonian {
    pub fn model(&self) -> Model {
        self.model
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coupling(&self) -> f64 {
        self.j
    }

    pub fn field(&self) -> f64 {
        self.h
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// <psi|H|psi> without normalisation.
    pub fn expectation(&self, amps: &[Complex64]) -> f64 {
        let diag: f64 = amps
            .iter()
            .zip(&self.diag)
            .map(|(a, d)| a.norm_sqr() * d)
            .sum();
        if self.h == 0.0 {
            return diag;
        }
        let mut x = 0.0;
        for s in 0..self.n {
            let mask = 1usize << (self.n - 1 - s);
            for k in 0..amps.len() {
                if k & mask == 0 {
                    x += 2.0 * (amps[k].conj() * amps[k | mask]).re;
                }
            }
        }
        diag - 0.5 * self.h * x
    }

    /// out = H v for a real vector.
    pub fn apply_real(&self, v: &[f64], out: &mut [f64]) {
        for ((o, x), d) in out.iter_mut().zip(v).zip(&self.diag) {
            *o = d * x;
        }
        if self.h == 0.0 {
            return;
        }
        let half = 0.5 * self.h;
        for s in 0..self.n {
            let mask = 1usize << (self.n - 1 - s);
            for (k, o) in out.iter_mut().enumerate() {
                *o -= half * v[k ^ mask];
            }
        }
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>, HamiltonianError> {
        if self.n > DENSE_MAX {
            return Err(HamiltonianError::SizeLimit {
                n: self.n,
                max: DENSE_MAX,
            });
        }
        let dim = 1usize << self.n;
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diag));
        for s in 0..self.n {
            let mask = 1usize << (self.n - 1 - s);
            for k in 0..dim {
                m[(k, k ^ mask)] -= 0.5 * self.h;
            }
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    /// Total ground energy (not per site).
    pub ground_energy: f64,
    /// Ground vector in the computational basis, or in the Dicke basis for
    /// [`lmg_exact`].
    pub ground_state: Vec<f64>,
    pub m_rms: f64,
    /// (1/4) <Z_0 Z_{n/2}> for even n; absent otherwise.
    pub corr_half: Option<f64>,
}

impl ExactSolution {
    pub fn energy_per_site(&self, n: usize) -> f64 {
        self.ground_energy / n as f64
    }
}

fn lowest(m: DMatrix<f64>) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(m);
    let (idx, &e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty spectrum");
    (e, eig.eigenvectors.column(idx).iter().copied().collect())
}

fn solution_from_vector(n: usize, e: f64, v: Vec<f64>) -> ExactSolution {
    let mut sz2 = 0.0;
    let mut zz = 0.0;
    for (k, a) in v.iter().enumerate() {
        let p = a * a;
        let m = n as f64 - 2.0 * k.count_ones() as f64;
        sz2 += p * m * m;
        if n % 2 == 0 {
            zz += p * spin(k, n, 0) * spin(k, n, n / 2);
        }
    }
    ExactSolution {
        ground_energy: e,
        ground_state: v,
        m_rms: sz2.sqrt() / (2.0 * n as f64),
        corr_half: (n % 2 == 0).then_some(zz / 4.0),
    }
}

/// Dense diagonalisation, n <= [`DENSE_MAX`]. Slow beyond ~10 sites; kept
/// as a reference for [`exact_ground`].
pub fn exact_ground_dense(h: &Hamiltonian) -> Result<ExactSolution, HamiltonianError> {
    let (e, v) = lowest(h.to_dense()?);
    Ok(solution_from_vector(h.n, e, v))
}

const LANCZOS_MAX: usize = 400;
const LANCZOS_TOL: f64 = 1e-12;

/// Lowest eigenpair by Lanczos with full reorthogonalisation, started from
/// the uniform vector. Both models have non-positive off-diagonal elements
/// for h >= 0, so the ground state overlaps the start vector; for h < 0 the
/// X-basis sign flip maps the problem to h > 0 and the start vector becomes
/// the staggered one.
pub fn exact_ground(h: &Hamiltonian) -> Result<ExactSolution, HamiltonianError> {
    let n = h.n;
    let dim = 1usize << n;
    let start: Vec<f64> = (0..dim)
        .map(|k| {
            let sign = if h.h < 0.0 && k.count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            sign / (dim as f64).sqrt()
        })
        .collect();
    let mut basis: Vec<Vec<f64>> = vec![start];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    let mut last: Option<(f64, Vec<f64>)> = None;
    for it in 0..LANCZOS_MAX.min(dim) {
        h.apply_real(&basis[it], &mut w);
        let a: f64 = w.iter().zip(&basis[it]).map(|(x, y)| x * y).sum();
        alpha.push(a);
        for _ in 0..2 {
            for b in &basis {
                let c: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let k = alpha.len();
        let mut t = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&alpha));
        for (i, b) in beta.iter().enumerate() {
            t[(i, i + 1)] = *b;
            t[(i + 1, i)] = *b;
        }
        let (e, y) = lowest(t);
        let residual = norm * y[k - 1].abs();
        last = Some((e, y));
        if residual < LANCZOS_TOL * e.abs().max(1.0) || norm < 1e-14 {
            break;
        }
        beta.push(norm);
        basis.push(w.iter().map(|x| x / norm).collect());
    }
    let (e, y) = last.expect("at least one iteration");
    let mut v = vec![0.0; dim];
    for (c, b) in y.iter().zip(&basis) {
        v.iter_mut().zip(b).for_each(|(x, q)| *x += c * q);
    }
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= nv);
    Ok(solution_from_vector(n, e, v))
}

/// LMG restricted to maximal total spin, basis |k> with k spins down:
/// (diagonal, super-diagonal) of the tridiagonal block.
pub fn lmg_dicke_tridiagonal(n: usize, j: f64, h: f64) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let diag = (0..=n)
        .map(|k| {
            let m = nf - 2.0 * k as f64;
            -(j / (4.0 * nf)) * (m * m - nf) / 2.0
        })
        .collect();
    let off = (0..n)
        .map(|k| -(h / 2.0) * (((k + 1) * (n - k)) as f64).sqrt())
        .collect();
    (diag, off)
}

pub fn lmg_dicke_block(n: usize, j: f64, h: f64) -> DMatrix<f64> {
    let (d, o) = lmg_dicke_tridiagonal(n, j, h);
    let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d));
    for (k, v) in o.into_iter().enumerate() {
        m[(k, k + 1)] = v;
        m[(k + 1, k)] = v;
    }
    m
}

/// Exact LMG ground state through the Dicke block; any n >= 1.
pub fn lmg_exact(n: usize, j: f64, h: f64) -> ExactSolution {
    let (e, v) = lowest(lmg_dicke_block(n, j, h));
    let nf = n as f64;
    let sz2: f64 = v
        .iter()
        .enumerate()
        .map(|(k, a)| a * a * (nf - 2.0 * k as f64).powi(2))
        .sum();
    ExactSolution {
        ground_energy: e,
        ground_state: v,
        m_rms: sz2.sqrt() / (2.0 * nf),
        corr_half: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(m: DMatrix<f64>) -> Vec<f64> {
        let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    #[test]
    fn two_site_ring_counts_bond_twice() {
        let h = build(Model::Tfim, 2, 1.0, 0.0).unwrap();
        let e = spectrum(h.to_dense().unwrap());
        assert!((e[0] + 0.5).abs() < 1e-14);
        assert!((e[3] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn lanczos_matches_dense() {
        for model in [Model::Tfim, Model::Lmg] {
            for n in [2, 3, 4, 6, 8] {
                for h in [-0.7, 0.0, 0.1, 0.5, 1.3] {
                    let ham = build(model, n, 1.0, h).unwrap();
                    let d = exact_ground_dense(&ham).unwrap();
                    let l = exact_ground(&ham).unwrap();
                    assert!((d.ground_energy - l.ground_energy).abs() < 1e-10, "{model:?} n={n} h={h}");
                    assert!((d.m_rms - l.m_rms).abs() < 1e-7, "{model:?} n={n} h={h}");
                    if h != 0.0 {
                        let ov: f64 = d.ground_state.iter().zip(&l.ground_state).map(|(a, b)| a * b).sum();
                        assert!((ov.abs() - 1.0).abs() < 1e-8, "{model:?} n={n} h={h}: {ov}");
                    }
                }
            }
        }
    }

    #[test]
    fn lanczos_reaches_fourteen_sites() {
        let ham = build(Model::Tfim, 14, 1.0, 0.5).unwrap();
        let s = exact_ground(&ham).unwrap();
        let e = s.energy_per_site(14);
        assert!(e < -0.3 && e > -0.35, "{e}");
        let mut hv = vec![0.0; s.ground_state.len()];
        ham.apply_real(&s.ground_state, &mut hv);
        let res: f64 = hv
            .iter()
            .zip(&s.ground_state)
            .map(|(a, b)| (a - s.ground_energy * b).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(res < 1e-8, "{res}");
    }

    #[test]
    fn two_site_lmg() {
        let h = build(Model::Lmg, 2, 1.0, 0.0).unwrap();
        let s = exact_ground(&h).unwrap();
        assert!((s.ground_energy + 0.125).abs() < 1e-14);
        assert!((s.m_rms - 0.5).abs() < 1e-12);
    }

    #[test]
    fn too_few_and_too_many() {
        assert_eq!(build(Model::Lmg, 1, 1.0, 0.0), Err(HamiltonianError::TooFewSites(1)));
        assert!(build(Model::Tfim, 15, 1.0, 0.0).is_err());
        let h = build(Model::Tfim, 13, 1.0, 0.0).unwrap();
        assert!(exact_ground_dense(&h).is_err());
    }

    #[test]
    fn dense_is_symmetric() {
        for model in [Model::Lmg, Model::Tfim] {
            let m = build(model, 5, 0.7, 0.3).unwrap().to_dense().unwrap();
            assert!((&m - m.transpose()).amax() < 1e-15);
        }
    }

    #[test]
    fn dicke_block_lowest_diagonal() {
        let b = lmg_dicke_block(4, 1.0, 0.0);
        let min = b.diagonal().iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((min + 3.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn ferromagnet_correlations() {
        let h = build(Model::Tfim, 8, 1.0, 0.0).unwrap();
        let s = exact_ground(&h).unwrap();
        assert!((s.corr_half.unwrap() - 0.25).abs() < 1e-10);
        assert!((s.m_rms - 0.5).abs() < 1e-10);
        let l = lmg_exact(40, 1.0, 0.0);
        assert!((l.m_rms - 0.5).abs() < 1e-10);
    }

    #[test]
    fn strong_field_lmg() {
        let h = 1e3;
        let s = lmg_exact(30, 1.0, h);
        assert!((s.energy_per_site(30) / h + 0.5).abs() < 1e-3);
    }
}
