use super::{AnalyticError, Angles};

/// |ST| must stay below this for the finite-size closed forms.
pub const ST_GUARD: f64 = 1.0 - 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    X,
    Z,
    /// Z_i Z_{i+r}
    ZZ(usize),
}

struct Sym {
    c: f64,
    s: f64,
    d: f64,
    t: f64,
    st: f64,
}

fn symbols(angles: Angles) -> Result<Sym, AnalyticError> {
    let f = angles.trig().full;
    let st = f.sin_theta * f.sin_sum;
    if st.abs() > ST_GUARD {
        return Err(AnalyticError::DegenerateST(st));
    }
    Ok(Sym {
        c: f.cos_theta,
        s: f.sin_theta,
        d: f.cos_sum,
        t: f.sin_sum,
        st,
    })
}

fn check_size(n: usize) -> Result<(), AnalyticError> {
    if n < 2 {
        Err(AnalyticError::TooFewSites(n))
    } else {
        Ok(())
    }
}

fn check_distance(r: usize, n: usize) -> Result<i32, AnalyticError> {
    if r > n {
        Err(AnalyticError::BadDistance { r, n })
    } else {
        Ok(r as i32)
    }
}

/// (f(r), (ST)^N f(-r)) of the correlation closed form, written so that no
/// negative powers appear.
fn corr_terms(y: &Sym, n: i32, r: i32) -> (f64, f64) {
    let den = (y.st - 1.0).powi(2);
    let cd2 = (y.c * y.d).powi(2);
    let diff2 = (y.s - y.t).powi(2);
    let forward = (cd2 + diff2 * y.st.powi(r)) / den;
    let backward = (y.st.powi(n) * cd2 + diff2 * y.st.powi(n - r)) / den;
    (forward, backward)
}

/// Numerators shared by the translational and parity forms of <X_i>.
fn x_terms(y: &Sym, n: i32) -> f64 {
    let lead = y.c * y.c * (y.s - y.t) / (y.st - 1.0);
    let tail = y.s.powi(n) * y.t.powi(n - 2) * y.d * y.d * (y.s - y.t) / (y.st - 1.0);
    lead + tail
}

/// Translation-invariant state: every site carries the bulk matrix.
pub fn expval_translational(
    angles: Angles,
    n: usize,
    obs: Observable,
) -> Result<f64, AnalyticError> {
    check_size(n)?;
    let y = symbols(angles)?;
    let ni = n as i32;
    let norm2 = 1.0 + y.st.powi(ni);
    Ok(match obs {
        Observable::X => x_terms(&y, ni) / norm2,
        Observable::Z => y.c * y.d * (y.st.powi(ni) - 1.0) / (y.st - 1.0) / norm2,
        Observable::ZZ(r) => {
            let r = check_distance(r, n)?;
            let (f, b) = corr_terms(&y, ni, r);
            (f + b) / norm2
        }
    })
}

/// Squared norm of the parity-projected state, 1 + (ST)^N + T^N + S^N.
pub fn parity_norm_sqr(angles: Angles, n: usize) -> f64 {
    let f = angles.trig().full;
    let (s, t) = (f.sin_theta, f.sin_sum);
    let ni = n as i32;
    1.0 + (s * t).powi(ni) + t.powi(ni) + s.powi(ni)
}

/// Translation-invariant state projected onto positive parity.
pub fn expval_parity(angles: Angles, n: usize, obs: Observable) -> Result<f64, AnalyticError> {
    check_size(n)?;
    let y = symbols(angles)?;
    let ni = n as i32;
    let norm2 = parity_norm_sqr(angles, n);
    if norm2 < 1e-14 {
        return Err(AnalyticError::DegenerateST(y.st));
    }
    match obs {
        Observable::X => {
            let extra = y.t.powi(ni - 2) * (y.t - y.s) * (y.st + 1.0);
            Ok((x_terms(&y, ni) + extra) / norm2)
        }
        Observable::ZZ(r) => {
            let r = check_distance(r, n)?;
            let (f, b) = corr_terms(&y, ni, r);
            let extra = y.s.powi(ni - r) * y.t.powi(r) + y.s.powi(r) * y.t.powi(ni - r);
            Ok((f + b + extra) / norm2)
        }
        Observable::Z => Err(AnalyticError::Unsupported(
            "<Z> of the parity-projected state is identically zero",
        )),
    }
}

/// <X_i> of the circuit state, whose site 0 carries the boundary matrix.
pub fn expval_original(angles: Angles, n: usize, site: usize) -> Result<f64, AnalyticError> {
    check_size(n)?;
    if site >= n {
        return Err(AnalyticError::SiteOutOfRange { site, n });
    }
    let y = symbols(angles)?;
    let tb = angles.trig();
    let (c2, s2) = (tb.half.cos_theta.powi(2), tb.half.sin_theta.powi(2));
    let (e, u, f) = (tb.full.cos_diff, tb.full.sin_diff, tb.full.cos_phi);
    let (cc, s, d, t, st) = (y.c, y.s, y.d, y.t, y.st);
    if site > 0 {
        let decay = st.powi(site as i32 - 1);
        return Ok(cc * cc * (s - t) / (st - 1.0)
            - decay * (cc * cc * d * d * s / (st - 1.0) + s * cc * d * f));
    }
    let ni = n as i32;
    let st_n1 = st.powi(ni - 1);
    // (ST)^{N-1} / T without dividing by T
    let st_n1_over_t = s.powi(ni - 1) * t.powi(ni - 2);
    Ok(cc * (c2 * t + s2 * u) + cc * s * d / (st - 1.0) * (c2 * d + s2 * e)
        - cc * s * st_n1
        - st_n1_over_t * (c2 * d * d * (cc + st - 1.0) + s2 * d * e * (cc - st + 1.0))
            / (st - 1.0))
}
