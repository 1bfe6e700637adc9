//! Brute-force reference computations.
//!
//! Everything here is deliberately literal: expectation values are formed
//! from explicit Kronecker-product operators or from per-basis-state loops,
//! symmetry projectors average over explicit group elements, and generating
//! function coefficients come from plain polynomial multiplication. None of
//! it shares numerical kernels with `motifsearch-core`, so it can be used to
//! check that crate.
//!
//! Basis convention (shared with the core crate by agreement, not by code):
//! site `0` is the most significant bit of a basis index and bit value `0`
//! is the `Z = +1` state.

use num_complex::Complex64 as C64;
use std::fmt;
use thiserror::Error;

/// Largest system accepted by the expectation and parity oracles.
pub const MAX_DENSE_SITES: usize = 12;
/// Largest system accepted by the permutation averaging oracle (`n!` terms).
pub const MAX_PERMUTATION_SITES: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle size limit exceeded: {n} sites > {max}")]
    SizeLimit { n: usize, max: usize },
    #[error("state length {len} is not a power of two")]
    BadLength { len: usize },
    #[error("site {site} out of range for {n} sites")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("site {0} appears twice in a Pauli string")]
    RepeatedSite(usize),
}

pub type Result<T> = std::result::Result<T, OracleError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> [[C64; 2]; 2] {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

fn site_count(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(OracleError::BadLength { len });
    }
    Ok(len.trailing_zeros() as usize)
}

fn check_string(n: usize, ops: &[(usize, Pauli)]) -> Result<()> {
    for (k, &(site, _)) in ops.iter().enumerate() {
        if site >= n {
            return Err(OracleError::SiteOutOfRange { site, n });
        }
        if ops[..k].iter().any(|&(s, _)| s == site) {
            return Err(OracleError::RepeatedSite(site));
        }
    }
    Ok(())
}

/// Dense `2^n x 2^n` matrix of a Pauli string, built as an explicit
/// Kronecker product with site 0 leftmost.
pub fn pauli_string_matrix(n: usize, ops: &[(usize, Pauli)]) -> Result<Vec<Vec<C64>>> {
    if n > MAX_DENSE_SITES {
        return Err(OracleError::SizeLimit { n, max: MAX_DENSE_SITES });
    }
    check_string(n, ops)?;
    let mut m = vec![vec![C64::new(1.0, 0.0)]];
    for site in 0..n {
        let p = ops
            .iter()
            .find(|&&(s, _)| s == site)
            .map(|&(_, p)| p)
            .unwrap_or(Pauli::I)
            .matrix();
        let d = m.len();
        let mut next = vec![vec![C64::new(0.0, 0.0); 2 * d]; 2 * d];
        for r in 0..d {
            for c in 0..d {
                for a in 0..2 {
                    for b in 0..2 {
                        next[2 * r + a][2 * c + b] = m[r][c] * p[a][b];
                    }
                }
            }
        }
        m = next;
    }
    Ok(m)
}

/// `<psi|P|psi> / <psi|psi>` for a Pauli string `P`, via the full matrix.
pub fn dense_expectation(state: &[C64], ops: &[(usize, Pauli)]) -> Result<f64> {
    let n = site_count(state.len())?;
    let m = pauli_string_matrix(n, ops)?;
    let mut num = C64::new(0.0, 0.0);
    for (r, row) in m.iter().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (c, v) in row.iter().enumerate() {
            acc += v * state[c];
        }
        num += state[r].conj() * acc;
    }
    let den: f64 = state.iter().map(|a| a.norm_sqr()).sum();
    Ok(num.re / den)
}

/// Same quantity as [`dense_expectation`], computed by acting with the Pauli
/// string on each basis state in turn. Used to cross-check the matrix path.
pub fn loop_expectation(state: &[C64], ops: &[(usize, Pauli)]) -> Result<f64> {
    let n = site_count(state.len())?;
    if n > MAX_DENSE_SITES {
        return Err(OracleError::SizeLimit { n, max: MAX_DENSE_SITES });
    }
    check_string(n, ops)?;
    let mut num = C64::new(0.0, 0.0);
    for (idx, amp) in state.iter().enumerate() {
        // P|idx> = phase |flipped>
        let mut target = idx;
        let mut phase = C64::new(1.0, 0.0);
        for &(site, p) in ops {
            let bit = (idx >> (n - 1 - site)) & 1;
            match p {
                Pauli::I => {}
                Pauli::X => target ^= 1 << (n - 1 - site),
                Pauli::Y => {
                    target ^= 1 << (n - 1 - site);
                    // Y|0> = i|1>, Y|1> = -i|0>
                    phase *= if bit == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) };
                }
                Pauli::Z => {
                    if bit == 1 {
                        phase = -phase;
                    }
                }
            }
        }
        num += state[target].conj() * phase * amp;
    }
    let den: f64 = state.iter().map(|a| a.norm_sqr()).sum();
    Ok(num.re / den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryGroup {
    /// All `n!` site permutations, averaged.
    Permutation,
    /// `{1, prod_i X_i}`, averaged.
    Parity,
}

/// Projects `state` onto the trivial representation of `group` by explicit
/// averaging over group elements.
pub fn dense_symmetrizer(state: &[C64], group: SymmetryGroup) -> Result<Vec<C64>> {
    let n = site_count(state.len())?;
    match group {
        SymmetryGroup::Parity => {
            if n > MAX_DENSE_SITES {
                return Err(OracleError::SizeLimit { n, max: MAX_DENSE_SITES });
            }
            let mask = state.len() - 1;
            Ok((0..state.len())
                .map(|i| (state[i] + state[i ^ mask]) * 0.5)
                .collect())
        }
        SymmetryGroup::Permutation => {
            if n > MAX_PERMUTATION_SITES {
                return Err(OracleError::SizeLimit { n, max: MAX_PERMUTATION_SITES });
            }
            let perms = permutations(n);
            let weight = 1.0 / perms.len() as f64;
            let mut out = vec![C64::new(0.0, 0.0); state.len()];
            for perm in &perms {
                for (idx, amp) in state.iter().enumerate() {
                    let mut moved = 0usize;
                    for (site, &dest) in perm.iter().enumerate() {
                        let bit = (idx >> (n - 1 - site)) & 1;
                        moved |= bit << (n - 1 - dest);
                    }
                    out[moved] += amp * weight;
                }
            }
            Ok(out)
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // Heap's algorithm, iterative
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Binomial coefficient as a float, by the multiplicative formula.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_pow(p: &[f64], k: usize) -> Vec<f64> {
    (0..k).fold(vec![1.0], |acc, _| poly_mul(&acc, p))
}

/// Coefficients of `x^0 ..= x^N` in `lambda_+(x)^N + lambda_-(x)^N`, where
/// `lambda_pm` are the roots of `lambda^2 - (a + x b) lambda + x g`.
///
/// Expands the square-root-free binomial sum
/// `2^{1-N} sum_i C(N, 2i) [(a + x b)^2 - 4 x g]^i (a + x b)^{N - 2i}`
/// term by term. `N = 0` returns `[2]`.
pub fn coefficient_extractor(a: f64, b: f64, g: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![2.0];
    }
    let lin = [a, b];
    let disc = {
        let sq = poly_mul(&lin, &lin);
        vec![sq[0], sq[1] - 4.0 * g, sq[2]]
    };
    let mut total = vec![0.0; n + 1];
    for i in 0..=n / 2 {
        let term = poly_mul(&poly_pow(&disc, i), &poly_pow(&lin, n - 2 * i));
        let w = binomial(n, 2 * i);
        for (k, v) in term.iter().enumerate() {
            total[k] += w * v;
        }
    }
    let scale = 0.5f64.powi(n as i32 - 1);
    total.iter().map(|v| v * scale).collect()
}

/// One oracle comparison.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub case: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleReport {
    /// Absolute-tolerance comparison.
    pub fn compare(case: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let abs_err = (lhs - rhs).abs();
        let rel_err = if rhs != 0.0 { abs_err / rhs.abs() } else { abs_err };
        OracleReport {
            case: case.into(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            tolerance,
            pass: abs_err <= tolerance,
        }
    }

    pub const CSV_HEADER: &'static str = "case,lhs,rhs,abs_err,rel_err,tolerance,pass";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.17e},{:.17e},{:.3e},{:.3e},{:.1e},{}",
            self.case, self.lhs, self.rhs, self.abs_err, self.rel_err, self.tolerance, self.pass
        )
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {:.12} vs {:.12} (abs {:.2e}, tol {:.1e})",
            if self.pass { "pass" } else { "FAIL" },
            self.case,
            self.lhs,
            self.rhs,
            self.abs_err,
            self.tolerance
        )
    }
}

/// Renders reports as CSV text, header first.
pub fn reports_to_csv(reports: &[OracleReport]) -> String {
    let mut out = String::from(OracleReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}
