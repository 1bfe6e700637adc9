use crate::hamiltonian::Model;

use super::{AnalyticError, Angles};

/// Tolerance for recognising the corners |S| = |T| = 1.
const CORNER_TOL: f64 = 1e-12;

/// N -> infinity energy per site as a function of S = sin(theta) and
/// T = sin(theta + phi). At the four corners |S| = |T| = 1 the limit values
/// are returned.
pub fn thermo_energy(model: Model, s: f64, t: f64, j: f64, h: f64) -> Result<f64, AnalyticError> {
    if !(s.abs() <= 1.0 + CORNER_TOL && t.abs() <= 1.0 + CORNER_TOL) {
        return Err(AnalyticError::OutOfDomain { s, t });
    }
    let st = s * t;
    if st.abs() >= 1.0 - CORNER_TOL {
        let aligned = st > 0.0;
        return Ok(match (model, aligned) {
            (Model::Tfim, true) => -j / 4.0,
            (Model::Tfim, false) => j / 4.0,
            (Model::Lmg, true) => -j / 8.0,
            (Model::Lmg, false) => 0.0,
        });
    }
    let c2 = 1.0 - s * s;
    let d2 = 1.0 - t * t;
    Ok(match model {
        Model::Lmg => {
            -j * c2 * d2 / (8.0 * (st - 1.0).powi(2)) - h * c2 * (s - t) / (2.0 * (st - 1.0))
        }
        Model::Tfim => {
            -(j / 4.0) * (1.0 + (s - t).powi(2) / (st - 1.0)) - h * (s - t) * c2 / (2.0 * (st - 1.0))
        }
    })
}

/// N -> infinity value of <Z_i> for the given angles.
pub fn thermo_z(angles: Angles) -> Result<f64, AnalyticError> {
    let f = angles.trig().full;
    let st = f.sin_theta * f.sin_sum;
    if st.abs() >= 1.0 - CORNER_TOL {
        return Err(AnalyticError::DegenerateST(st));
    }
    Ok(f.cos_theta * f.cos_sum / (1.0 - st))
}

/// N -> infinity value of <Z_i Z_{i+r}> as r -> infinity, in terms of (S, T).
pub fn thermo_long_range_zz(s: f64, t: f64) -> Result<f64, AnalyticError> {
    let st = s * t;
    if st.abs() >= 1.0 - CORNER_TOL {
        return Err(AnalyticError::DegenerateST(st));
    }
    Ok((1.0 - s * s) * (1.0 - t * t) / (1.0 - st).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmgThermoMinimum {
    pub angles: Angles,
    pub energy: f64,
    /// Spontaneous magnetisation (1/2)<Z> on the branch with cos(phi) >= 0.
    pub magnetisation: f64,
    /// Both branches, `[+m, -m]`.
    pub magnetisation_branches: [f64; 2],
}

/// Thermodynamic-limit minimiser of the LMG energy (J = 1).
pub fn minimize_lmg_thermo(h: f64) -> LmgThermoMinimum {
    let angles = Angles::new(0.0, (2.0 * h).clamp(-1.0, 1.0).asin());
    let t = angles.phi.sin();
    let energy = thermo_energy(Model::Lmg, 0.0, t, 1.0, h).expect("S = 0 is inside the domain");
    let m = 0.5 * thermo_z(angles).expect("ST = 0");
    LmgThermoMinimum {
        angles,
        energy,
        magnetisation: m,
        magnetisation_branches: [m, -m],
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfimThermoMinimum {
    pub s: f64,
    pub t: f64,
    pub energy: f64,
    pub h_c: f64,
}

impl TfimThermoMinimum {
    /// <Z_i> in the limit, taking cos(theta), cos(theta+phi) >= 0.
    /// At the aligned corners (ST = 1, the h = 0 minimum) the value is the
    /// ferromagnetic limit reached along the minimising path; at the
    /// anti-aligned corners it is zero.
    pub fn z_expectation(&self) -> f64 {
        let st = self.s * self.t;
        if st >= 1.0 - CORNER_TOL {
            return 1.0;
        }
        if st <= -1.0 + CORNER_TOL {
            return 0.0;
        }
        (1.0 - self.s * self.s).sqrt() * (1.0 - self.t * self.t).sqrt() / (1.0 - self.s * self.t)
    }

    pub fn long_range_zz(&self) -> f64 {
        let z = self.z_expectation();
        z * z
    }
}

/// Largest |S| at which the stationarity quartic can have its root.
pub fn quartic_root_bound() -> f64 {
    std::f64::consts::SQRT_2 - 1.0
}

/// Critical field of the transverse-field Ising ansatz: the maximum of
/// 2S/(1+S^2)^2 over the admissible interval.
pub fn tfim_critical_field() -> f64 {
    let s = quartic_root_bound();
    2.0 * s / (1.0 + s * s).powi(2)
}

/// Root of h(1+S^2)^2 - 2S = 0 with |S| <= sqrt(2)-1 by bisection; `None`
/// when |h| exceeds the critical field.
pub fn tfim_quartic_root(h: f64) -> Option<f64> {
    let bound = quartic_root_bound();
    let g = |s: f64| h * (1.0 + s * s).powi(2) - 2.0 * s;
    let (mut lo, mut hi) = if h >= 0.0 { (0.0, bound) } else { (-bound, 0.0) };
    let (glo, ghi) = (g(lo), g(hi));
    if glo == 0.0 {
        return Some(lo);
    }
    if ghi == 0.0 {
        return Some(hi);
    }
    if glo.signum() == ghi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(if g(lo).abs() < g(hi).abs() { lo } else { hi })
}

/// Thermodynamic-limit minimiser of the TFIM energy (J = 1), chosen among
/// all stationary points.
pub fn minimize_tfim_thermo(h: f64) -> TfimThermoMinimum {
    let mut candidates: Vec<(f64, f64)> = vec![(1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)];
    if let Some(s) = tfim_quartic_root(h) {
        candidates.push((s, s * (4.0 / (1.0 + s * s) - 1.0)));
    }
    if h.abs() > 0.25 {
        let s = 1.0 / (4.0 * h);
        candidates.push((s, 1.0));
        candidates.push((s, -1.0));
    }
    let (s, t, energy) = candidates
        .into_iter()
        .filter_map(|(s, t)| thermo_energy(Model::Tfim, s, t, 1.0, h).ok().map(|e| (s, t, e)))
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .expect("corners are always admissible");
    TfimThermoMinimum {
        s,
        t,
        energy,
        h_c: tfim_critical_field(),
    }
}
