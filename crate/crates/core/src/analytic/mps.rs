use nalgebra::Matrix2;
use num_complex::Complex64;

use super::{AnalyticError, Angles};
use crate::sim::{StateVector, N_MAX};

pub type M2 = Matrix2<Complex64>;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Bond-dimension-2 site matrices of the ansatz in the y basis (`a_*`, `b_*`,
/// index + / - for the y eigenvalue) and in the z basis (`az_*`, `bz_*`).
/// The `b` matrices belong to site 0 only.
#[derive(Debug, Clone, PartialEq)]
pub struct MpsMatrices {
    pub a_plus: M2,
    pub a_minus: M2,
    pub b_plus: M2,
    pub b_minus: M2,
    pub az_plus: M2,
    pub az_minus: M2,
    pub bz_plus: M2,
    pub bz_minus: M2,
}

impl MpsMatrices {
    pub const BOND_DIMENSION: usize = 2;
}

pub fn mps_matrices(angles: Angles) -> MpsMatrices {
    let h = angles.trig().half;
    let (c, s) = (h.cos_theta, h.sin_theta);
    let (d, t) = (h.cos_sum, h.sin_sum);
    let (e, u) = (h.cos_diff, h.sin_diff);
    let i = Complex64::i();
    let sum = (angles.theta + angles.phi) / 2.0;
    let diff = (angles.theta - angles.phi) / 2.0;
    let phase = |x: f64| Complex64::from_polar(1.0, x);

    let a_plus = M2::new(re(c), re(c), i * s, -i * s)
        * M2::new(phase(-sum), re(0.0), re(0.0), phase(sum));
    let b_plus = M2::new(re(c), re(c), i * s, i * s)
        * M2::new(phase(-sum), re(0.0), re(0.0), phase(-diff));
    MpsMatrices {
        a_minus: a_plus.map(|z| z.conj()),
        b_minus: b_plus.map(|z| z.conj()),
        a_plus,
        b_plus,
        az_plus: M2::new(re(c * d), re(c * d), re(s * t), re(s * t)),
        az_minus: M2::new(re(c * t), re(-c * t), re(-s * d), re(s * d)),
        bz_plus: M2::new(re(c * d), re(c * e), re(s * t), re(s * u)),
        bz_minus: M2::new(re(c * t), re(c * u), re(-s * d), re(-s * e)),
    }
}

/// Ladder-basis site matrices for real parameters (a, b):
/// index 0 is spin up, index 1 spin down.
pub fn ladder_matrices(a: f64, b: f64) -> [M2; 2] {
    let (ch, sh) = (b.cosh(), b.sinh());
    [
        M2::new(re(ch), re(ch), re(sh), re(sh)),
        M2::new(re(a * ch), re(-a * ch), re(-a * sh), re(a * sh)),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MpsForm {
    /// Site 0 carries the `b` matrix; exactly the circuit state.
    Original,
    /// Every site carries the `a` matrix; normalised.
    Translational,
    /// Ladder matrices; normalised.
    Ladder { a: f64, b: f64 },
}

fn trace_state(n: usize, first: &[M2; 2], rest: &[M2; 2]) -> Vec<Complex64> {
    (0..1usize << n)
        .map(|k| {
            let bit = |s: usize| (k >> (n - 1 - s)) & 1;
            let mut prod = first[bit(0)];
            for s in 1..n {
                prod *= rest[bit(s)];
            }
            prod.trace()
        })
        .collect()
}

/// z-basis state vector of an MPS form. The original and translational forms
/// are built from the y-basis matrices and rotated to the z basis.
pub fn mps_to_state(angles: Angles, n: usize, form: MpsForm) -> Result<StateVector, AnalyticError> {
    if n < 2 {
        return Err(AnalyticError::TooFewSites(n));
    }
    if n > N_MAX {
        return Err(AnalyticError::SizeLimit { n, max: N_MAX });
    }
    let m = mps_matrices(angles);
    let state = match form {
        MpsForm::Original | MpsForm::Translational => {
            let a = [m.a_plus, m.a_minus];
            let first = if form == MpsForm::Original {
                [m.b_plus, m.b_minus]
            } else {
                a
            };
            let scale = 2f64.powf(-(n as f64) / 2.0);
            let y_amps: Vec<Complex64> =
                trace_state(n, &first, &a).into_iter().map(|z| z * scale).collect();
            y_to_z(n, y_amps)?
        }
        MpsForm::Ladder { a, b } => {
            let c = ladder_matrices(a, b);
            StateVector::from_amps(n, trace_state(n, &c, &c))?
        }
    };
    match form {
        MpsForm::Original => Ok(state),
        _ => Ok(state.normalized()?),
    }
}

/// Rotate amplitudes over |y,+>, |y,-> (index 0, 1) into the z basis, with
/// |y,±> = (|z,+> ± i|z,->)/sqrt(2).
fn y_to_z(n: usize, amps: Vec<Complex64>) -> Result<StateVector, AnalyticError> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let u = crate::dsl::OpMatrix::from_row_slice(
        2,
        2,
        &[re(r), re(r), Complex64::new(0.0, r), Complex64::new(0.0, -r)],
    );
    let mut st = StateVector::from_amps(n, amps)?;
    for s in 0..n {
        st.apply(&u, &[s])?;
    }
    Ok(st)
}
