use serde::{Deserialize, Serialize};

/// The two variational angles: `theta` drives the entangling blocks, `phi`
/// the initial rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Angles {
    pub theta: f64,
    pub phi: f64,
}

impl Angles {
    pub fn new(theta: f64, phi: f64) -> Self {
        Angles { theta, phi }
    }

    pub fn trig(&self) -> TrigBundle {
        TrigBundle::new(*self)
    }
}

/// Cosines and sines of theta, theta+phi, theta-phi and phi, all scaled by
/// the same factor (1 or 1/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigSet {
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub cos_sum: f64,
    pub sin_sum: f64,
    pub cos_diff: f64,
    pub sin_diff: f64,
    pub cos_phi: f64,
    pub sin_phi: f64,
}

impl TrigSet {
    fn scaled(a: Angles, k: f64) -> Self {
        let (t, p) = (a.theta * k, a.phi * k);
        TrigSet {
            cos_theta: t.cos(),
            sin_theta: t.sin(),
            cos_sum: (t + p).cos(),
            sin_sum: (t + p).sin(),
            cos_diff: (t - p).cos(),
            sin_diff: (t - p).sin(),
            cos_phi: p.cos(),
            sin_phi: p.sin(),
        }
    }

    pub fn values(&self) -> [f64; 8] {
        [
            self.cos_theta,
            self.sin_theta,
            self.cos_sum,
            self.sin_sum,
            self.cos_diff,
            self.sin_diff,
            self.cos_phi,
            self.sin_phi,
        ]
    }
}

/// Scalars of the permutation-symmetric generating function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratingScalars {
    /// cos(phi/2)
    pub a: f64,
    /// sin(theta + phi/2)
    pub b: f64,
    /// sin(theta)
    pub g: f64,
}

/// Every trigonometric quantity used by the closed forms.
///
/// The full-angle set doubles as the short-hand of the expectation-value
/// formulas: `c = cos θ`, `s = sin θ`, `d = cos(θ+φ)`, `t = sin(θ+φ)`
/// (see [`TrigBundle::short`]). The half-angle set feeds the MPS matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigBundle {
    pub angles: Angles,
    pub half: TrigSet,
    pub full: TrigSet,
    pub generating: GeneratingScalars,
}

/// (cos θ, sin θ, cos(θ+φ), sin(θ+φ))
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortHand {
    pub c: f64,
    pub s: f64,
    pub d: f64,
    pub t: f64,
}

impl TrigBundle {
    pub fn new(angles: Angles) -> Self {
        TrigBundle {
            angles,
            half: TrigSet::scaled(angles, 0.5),
            full: TrigSet::scaled(angles, 1.0),
            generating: GeneratingScalars {
                a: (angles.phi / 2.0).cos(),
                b: (angles.theta + angles.phi / 2.0).sin(),
                g: angles.theta.sin(),
            },
        }
    }

    pub fn short(&self) -> ShortHand {
        ShortHand {
            c: self.full.cos_theta,
            s: self.full.sin_theta,
            d: self.full.cos_sum,
            t: self.full.sin_sum,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_angle_consistency() {
        for &(th, ph) in &[(0.3, 0.7), (-1.2, 2.9), (3.0, -0.4)] {
            let b = Angles::new(th, ph).trig();
            let pairs = [
                (b.half.cos_theta, b.half.sin_theta, b.full.cos_theta, b.full.sin_theta),
                (b.half.cos_sum, b.half.sin_sum, b.full.cos_sum, b.full.sin_sum),
                (b.half.cos_diff, b.half.sin_diff, b.full.cos_diff, b.full.sin_diff),
                (b.half.cos_phi, b.half.sin_phi, b.full.cos_phi, b.full.sin_phi),
            ];
            for (hc, hs, fc, fs) in pairs {
                assert!((hc * hc - hs * hs - fc).abs() < 1e-14);
                assert!((2.0 * hc * hs - fs).abs() < 1e-14);
            }
            assert!(b.full.values().iter().chain(b.half.values().iter()).all(|v| v.abs() <= 1.0));
            assert_eq!(b.short().t, b.full.sin_sum);
        }
    }
}
