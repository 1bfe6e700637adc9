use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use super::mps::{mps_matrices, M2};
use super::Angles;

pub type M4 = Matrix4<Complex64>;
pub type V4 = Vector4<f64>;

/// A* (x) B, row index i*2+k, column j*2+l.
pub fn conj_kron(a: &M2, b: &M2) -> M4 {
    M4::from_fn(|r, c| a[(r / 2, c / 2)].conj() * b[(r % 2, c % 2)])
}

/// Rank-two spectral data: eigenvalues with right/left eigenvectors
/// normalised so that <l_i|r_j> = delta_ij.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectral {
    pub values: [f64; 2],
    pub right: [V4; 2],
    pub left: [V4; 2],
}

impl Spectral {
    /// sum_i values_i^p |r_i><l_i|
    pub fn power(&self, p: i32) -> Matrix4<f64> {
        (0..2)
            .map(|i| self.right[i] * self.left[i].transpose() * self.values[i].powi(p))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferSet {
    /// Norm transfer matrix of sites i > 0.
    pub t_a: M4,
    /// Norm transfer matrix of site 0 (original ansatz).
    pub t_b: M4,
    pub t_ax: M4,
    pub t_az: M4,
    pub t_bx: M4,
    /// Eigenvalues {1, ST}. Absent when ST or ST-1 is too small for the
    /// closed-form eigenvectors.
    pub spectral_a: Option<Spectral>,
    /// Eigenvalues {S, T}. Absent when T vanishes.
    pub spectral_ax: Option<Spectral>,
    /// |ST| is within 1e-12 of 1.
    pub degenerate: bool,
}

pub fn transfer_set(angles: Angles) -> TransferSet {
    let m = mps_matrices(angles);
    let tb = angles.trig();
    let (c2, s2) = (tb.half.cos_theta.powi(2), tb.half.sin_theta.powi(2));
    let (cc, s, d, t) = (tb.full.cos_theta, tb.full.sin_theta, tb.full.cos_sum, tb.full.sin_sum);
    let st = s * t;
    let tiny = 1e-300;

    let spectral_a = (st.abs() > tiny && (st - 1.0).abs() > tiny).then(|| Spectral {
        values: [1.0, st],
        right: [
            V4::new(c2, 0.0, 0.0, s2),
            V4::new(
                c2 * d * (cc + st - 1.0) / (st * (st - 1.0)),
                0.5,
                0.5,
                s2 * d * (cc - st + 1.0) / (st * (st - 1.0)),
            ),
        ],
        left: [
            V4::new(1.0, cc * d / (1.0 - st), cc * d / (1.0 - st), 1.0),
            V4::new(0.0, 1.0, 1.0, 0.0),
        ],
    });
    let spectral_ax = (t.abs() > tiny).then(|| Spectral {
        values: [s, t],
        right: [
            V4::new(0.0, -1.0, 1.0, 0.0),
            V4::new(-c2, d * s / (2.0 * t), d * s / (2.0 * t), s2),
        ],
        left: [V4::new(0.0, -0.5, 0.5, 0.0), V4::new(-1.0, 0.0, 0.0, 1.0)],
    });

    TransferSet {
        t_a: conj_kron(&m.az_plus, &m.az_plus) + conj_kron(&m.az_minus, &m.az_minus),
        t_b: conj_kron(&m.bz_plus, &m.bz_plus) + conj_kron(&m.bz_minus, &m.bz_minus),
        t_ax: conj_kron(&m.az_plus, &m.az_minus) + conj_kron(&m.az_minus, &m.az_plus),
        t_az: conj_kron(&m.az_plus, &m.az_plus) - conj_kron(&m.az_minus, &m.az_minus),
        t_bx: conj_kron(&m.bz_plus, &m.bz_minus) + conj_kron(&m.bz_minus, &m.bz_plus),
        spectral_a,
        spectral_ax,
        degenerate: (st.abs() - 1.0).abs() < 1e-12,
    }
}
