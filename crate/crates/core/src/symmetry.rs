//! Permutation- and parity-symmetric version of the translation-invariant
//! ansatz for the all-to-all (LMG) model, in the Dicke basis |n>, n = number
//! of down spins.

use statrs::function::factorial::ln_binomial;
use thiserror::Error;

use crate::analytic::Angles;
use crate::hamiltonian::lmg_dicke_tridiagonal;
use crate::optimize::{nelder_mead_multistart, OptimizerConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetryError {
    #[error("at least one site is required")]
    NoSites,
    #[error("all symmetrised amplitudes vanish at these angles")]
    DegenerateProjection,
    #[error("row {n} is outside the table (max {max})")]
    OutOfTable { n: usize, max: usize },
}

/// Riordan triangle T(N, j) by the recurrence T(N,j) = 2T(N-1,j) + T(N-2,j-1),
/// rows 0..=n_max. `None` entries overflowed u128.
pub fn riordan_triangle(n_max: usize) -> Vec<Vec<Option<u128>>> {
    let mut rows: Vec<Vec<Option<u128>>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let width = n / 2 + 1;
        let row = (0..width)
            .map(|j| match n {
                0 | 1 => Some(u128::from(j == 0)),
                _ => {
                    let a = rows[n - 1].get(j).copied().unwrap_or(Some(0));
                    let b = if j == 0 {
                        Some(0)
                    } else {
                        rows[n - 2].get(j - 1).copied().unwrap_or(Some(0))
                    };
                    a?.checked_mul(2)?.checked_add(b?)
                }
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// T(N, j) via the recurrence; zero outside 0 <= j <= N/2.
pub fn riordan_t(n: usize, j: usize) -> Option<u128> {
    if j > n / 2 {
        return Some(0);
    }
    riordan_triangle(n)[n][j]
}

fn binom_u128(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// T(N, j) = sum_i C(N, 2i) C(i, j), summed directly.
pub fn riordan_t_direct(n: usize, j: usize) -> Option<u128> {
    (0..=n / 2).try_fold(0u128, |acc, i| {
        acc.checked_add(binom_u128(n, 2 * i)?.checked_mul(binom_u128(i, j)?)?)
    })
}

/// Table of S(N, n), the x^n coefficient of Tr((A+ + x A-)^N), for rows
/// 0..=n_max. Values are unscaled, so keep n_max moderate (<= ~150).
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTriangle {
    pub a: f64,
    pub b: f64,
    pub g: f64,
    rows: Vec<Vec<f64>>,
}

fn next_row(a: f64, b: f64, g: f64, prev: &[f64], prev2: &[f64], n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let p = |row: &[f64], i: Option<usize>| i.and_then(|i| row.get(i)).copied().unwrap_or(0.0);
            a * p(prev, Some(k)) + b * p(prev, k.checked_sub(1)) - g * p(prev2, k.checked_sub(1))
        })
        .collect()
}

impl SymmetricTriangle {
    pub fn new(angles: Angles, n_max: usize) -> Self {
        let gs = angles.trig().generating;
        Self::from_scalars(gs.a, gs.b, gs.g, n_max)
    }

    pub fn from_scalars(a: f64, b: f64, g: f64, n_max: usize) -> Self {
        let mut rows = vec![vec![2.0]];
        if n_max >= 1 {
            rows.push(vec![a, b]);
        }
        for n in 2..=n_max {
            let r = next_row(a, b, g, &rows[n - 1], &rows[n - 2], n);
            rows.push(r);
        }
        SymmetricTriangle { a, b, g, rows }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> Result<&[f64], SymmetryError> {
        self.rows
            .get(n)
            .map(Vec::as_slice)
            .ok_or(SymmetryError::OutOfTable { n, max: self.n_max() })
    }
}

/// S(N, n) from the recurrence table.
pub fn amplitude_s(n_sites: usize, n: usize, tri: &SymmetricTriangle) -> Result<f64, SymmetryError> {
    Ok(tri.row(n_sites)?.get(n).copied().unwrap_or(0.0))
}

/// S(N, n) from the explicit Riordan-sum formula. The sum alternates in sign
/// and loses digits for large N; prefer the recurrence there.
pub fn amplitude_s_explicit(a: f64, b: f64, g: f64, n_sites: usize, n: usize) -> f64 {
    if n > n_sites {
        return 0.0;
    }
    let tri = riordan_triangle(n_sites);
    let sum: f64 = (0..=n.min(n_sites - n))
        .map(|j| {
            let t = tri[n_sites].get(j).copied().flatten().map_or(f64::NAN, |v| v as f64);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let binom = ln_binomial((n_sites - 2 * j) as u64, (n - j) as u64).exp().round();
            sign * t * binom
                * a.powi((n_sites - n - j) as i32)
                * b.powi((n - j) as i32)
                * (4.0 * g).powi(j as i32)
        })
        .sum();
    sum / 2f64.powi(n_sites as i32 - 1)
}

/// Row N of S(N, .) scaled to unit maximum, with the natural log of the
/// removed factor. Safe for N in the thousands.
pub fn scaled_row(a: f64, b: f64, g: f64, n_sites: usize) -> (Vec<f64>, f64) {
    if n_sites == 0 {
        return (vec![1.0], 2f64.ln());
    }
    let mut prev2 = vec![2.0];
    let mut prev = vec![a, b];
    let mut log_scale = 0.0;
    for n in 2..=n_sites {
        let mut cur = next_row(a, b, g, &prev, &prev2, n);
        let m = cur.iter().chain(prev.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
        if m > 0.0 && m.is_finite() {
            cur.iter_mut().for_each(|v| *v /= m);
            prev.iter_mut().for_each(|v| *v /= m);
            log_scale += m.ln();
        }
        prev2 = prev;
        prev = cur;
    }
    (prev, log_scale)
}

/// Normalised state over |0>, ..., |N>. Amplitudes are real for this family.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeState {
    pub n: usize,
    pub amps: Vec<f64>,
}

impl DickeState {
    pub fn new(amps: Vec<f64>) -> Result<Self, SymmetryError> {
        if amps.len() < 2 {
            return Err(SymmetryError::NoSites);
        }
        let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(SymmetryError::DegenerateProjection);
        }
        Ok(DickeState {
            n: amps.len() - 1,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Average with the spin-flipped copy |n> -> |N-n>.
    pub fn parity_projected(&self) -> Result<Self, SymmetryError> {
        let n = self.n;
        DickeState::new((0..=n).map(|k| 0.5 * (self.amps[k] + self.amps[n - k])).collect())
    }

    /// Embed into the 2^N computational basis (site 0 most significant).
    pub fn to_computational(&self) -> Vec<f64> {
        let n = self.n;
        (0..1usize << n)
            .map(|k| {
                let down = k.count_ones() as usize;
                self.amps[down] * (-0.5 * ln_binomial(n as u64, down as u64)).exp()
            })
            .collect()
    }

    /// <(sum_i Z_i)^2>
    pub fn sz_squared(&self) -> f64 {
        let nf = self.n as f64;
        self.amps
            .iter()
            .enumerate()
            .map(|(k, a)| a * a * (nf - 2.0 * k as f64).powi(2))
            .sum()
    }
}

/// Permutation- and parity-symmetrised translational ansatz:
/// amplitude of |n> proportional to C(N,n)^{-1/2} (S(N,n) + S(N,N-n))/2.
pub fn project_symmetric(angles: Angles, n_sites: usize) -> Result<DickeState, SymmetryError> {
    if n_sites == 0 {
        return Err(SymmetryError::NoSites);
    }
    let gs = angles.trig().generating;
    let (row, _) = scaled_row(gs.a, gs.b, gs.g, n_sites);
    let logs: Vec<(f64, f64)> = (0..=n_sites)
        .map(|k| {
            let p = 0.5 * (row[k] + row[n_sites - k]);
            let lb = ln_binomial(n_sites as u64, k as u64);
            (p.signum(), p.abs().ln() - 0.5 * lb)
        })
        .collect();
    let top = logs.iter().map(|l| l.1).fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(SymmetryError::DegenerateProjection);
    }
    DickeState::new(logs.iter().map(|(s, l)| s * (l - top).exp()).collect())
}

/// (energy per site, RMS magnetisation) in the maximal-spin LMG block.
pub fn symmetrized_observables(state: &DickeState, j: f64, h: f64) -> (f64, f64) {
    let n = state.n;
    let (diag, off) = lmg_dicke_tridiagonal(n, j, h);
    let v = &state.amps;
    let mut e: f64 = diag.iter().zip(v).map(|(d, a)| d * a * a).sum();
    e += 2.0 * off.iter().enumerate().map(|(k, o)| o * v[k] * v[k + 1]).sum::<f64>();
    let m_rms = state.sz_squared().sqrt() / (2.0 * n as f64);
    (e / n as f64, m_rms)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrizedOptimum {
    pub angles: Angles,
    pub energy: f64,
    pub m_rms: f64,
}

pub fn symmetrized_energy(angles: Angles, n: usize, j: f64, h: f64) -> f64 {
    project_symmetric(angles, n)
        .map(|s| symmetrized_observables(&s, j, h).0)
        .unwrap_or(f64::INFINITY)
}

/// Minimise the symmetrised energy over both angles.
pub fn optimize_symmetrized(
    n: usize,
    j: f64,
    h: f64,
    cfg: &OptimizerConfig,
) -> Result<SymmetrizedOptimum, SymmetryError> {
    let res = nelder_mead_multistart(
        |x: &[f64]| symmetrized_energy(Angles::new(x[0], x[1]), n, j, h),
        2,
        cfg,
    );
    let angles = Angles::new(res.params[0], res.params[1]);
    let state = project_symmetric(angles, n)?;
    let (energy, m_rms) = symmetrized_observables(&state, j, h);
    Ok(SymmetrizedOptimum {
        angles,
        energy,
        m_rms,
    })
}

/// Best product state (theta = 0) for the LMG model at finite N:
/// returns (phi, energy per site).
pub fn lmg_mean_field(n: usize, j: f64, h: f64) -> (f64, f64) {
    let nf = n as f64;
    let k = j * (nf - 1.0) / (8.0 * nf);
    let x = if k > 0.0 {
        (h / (4.0 * k)).clamp(-1.0, 1.0)
    } else {
        h.signum()
    };
    (x.asin(), -k * (1.0 - x * x) - 0.5 * h * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riordan_values() {
        assert_eq!(riordan_t(2, 0), Some(2));
        assert_eq!(riordan_t(4, 1), Some(8));
        assert_eq!(riordan_t(3, 1), Some(3));
        for n in 1..=30 {
            assert_eq!(riordan_t(n, 0), Some(1u128 << (n - 1)));
        }
        assert_eq!(riordan_t(5, 3), Some(0));
    }

    #[test]
    fn bases_and_product_limit() {
        let (a, b) = (0.6, -0.3);
        let t = SymmetricTriangle::from_scalars(a, b, 0.0, 6);
        assert_eq!(amplitude_s(1, 0, &t).unwrap(), a);
        assert_eq!(amplitude_s(1, 1, &t).unwrap(), b);
        for n in 0..=6 {
            let want = ln_binomial(6, n as u64).exp() * a.powi(6 - n as i32) * b.powi(n as i32);
            assert!((amplitude_s(6, n, &t).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn scaled_row_matches_table() {
        let angles = Angles::new(0.3, 1.2);
        let g = angles.trig().generating;
        let t = SymmetricTriangle::new(angles, 40);
        let (row, ls) = scaled_row(g.a, g.b, g.g, 40);
        for (k, v) in row.iter().enumerate() {
            let want = t.row(40).unwrap()[k];
            assert!((v * ls.exp() - want).abs() <= 1e-10 * want.abs().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn large_n_stays_finite() {
        let s = project_symmetric(Angles::new(0.2, 0.9), 2000).unwrap();
        assert!(s.amps.iter().all(|a| a.is_finite()));
        let norm: f64 = s.amps.iter().map(|a| a * a).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parity_symmetric_amplitudes() {
        let s = project_symmetric(Angles::new(-0.7, 2.1), 9).unwrap();
        for k in 0..=9 {
            assert!((s.amps[k] - s.amps[9 - k]).abs() < 1e-14);
        }
        let again = s.parity_projected().unwrap();
        for (x, y) in s.amps.iter().zip(&again.amps) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn x_polarised_product_is_binomial() {
        let s = project_symmetric(Angles::new(0.0, std::f64::consts::FRAC_PI_2), 6).unwrap();
        for k in 0..=6 {
            let want = (ln_binomial(6, k as u64).exp() / 64.0).sqrt();
            assert!((s.amps[k].abs() - want).abs() < 1e-12);
        }
    }
}
