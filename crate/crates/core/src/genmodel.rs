//! Latent space network generators: the Gaussian latent position model
//! (GLPM) in the plane and the hyperbolic disk model, plus the GLPM's
//! closed-form summary measures and their inversion.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Network;

/// Latent dimension; both models are planar.
pub const LATENT_DIM: usize = 2;

/// GLPM parameters: `z_i ~ N(0, γ I_2)`, `p_ij = τ exp(-|z_i - z_j|² / 2φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlpmParams {
    pub gamma: f64,
    pub phi: f64,
    pub tau: f64,
}

impl GlpmParams {
    pub fn new(gamma: f64, phi: f64, tau: f64) -> Result<Self> {
        let p = Self { gamma, phi, tau };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.phi > 0.0) {
            return Err(Error::InvalidParameter(format!("phi must be positive, got {}", self.phi)));
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::InvalidParameter(format!("tau must lie in [0, 1], got {}", self.tau)));
        }
        Ok(())
    }

    /// Edge probability at latent distance `d`.
    pub fn edge_probability(&self, d: f64) -> f64 {
        self.tau * (-d * d / (2.0 * self.phi)).exp()
    }
}

/// Radial law of the hyperbolic disk model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialLaw {
    /// Uniform with respect to hyperbolic area: density `sinh r / (cosh R - 1)`.
    #[default]
    AreaUniform,
    /// `r ~ Uniform(0, R)`.
    Uniform,
}

/// Hyperbolic disk model: positions on a disk of radius `R`,
/// `logit p_ij = R - d_H(z_i, z_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicParams {
    pub radius: f64,
    #[serde(default)]
    pub radial: RadialLaw,
}

impl HyperbolicParams {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { radius, radial: RadialLaw::default() })
    }

    pub fn with_radial(mut self, radial: RadialLaw) -> Self {
        self.radial = radial;
        self
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    Ok(())
}

/// Draws positions and one Bernoulli edge per unordered pair.
pub fn sample_glpm<R: Rng + ?Sized>(n: usize, params: &GlpmParams, rng: &mut R) -> Result<(Network, Vec<[f64; 2]>)> {
    check_n(n)?;
    params.validate()?;
    let sd = params.gamma.sqrt();
    let z: Vec<[f64; 2]> = (0..n)
        .map(|_| {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            [sd * a, sd * b]
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = z[i][0] - z[j][0];
            let dy = z[i][1] - z[j][1];
            let p = params.edge_probability((dx * dx + dy * dy).sqrt());
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Ok((Network::from_edges(n, edges)?, z))
}

/// Hyperbolic distance between polar points `(r, θ)` in curvature −1.
pub fn hyperbolic_polar_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    // cosh d = cosh(r1 - r2) + 2 sinh r1 sinh r2 sin²(Δθ/2), the law of
    // cosines rearranged to avoid cancellation for nearby points
    let half = 0.5 * (a.1 - b.1);
    let s = half.sin();
    let c = (a.0 - b.0).cosh() + 2.0 * a.0.sinh() * b.0.sinh() * s * s;
    c.max(1.0).acosh()
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Positions are returned in polar form `(r, θ)`.
pub fn sample_hyperbolic<R: Rng + ?Sized>(
    n: usize,
    params: &HyperbolicParams,
    rng: &mut R,
) -> Result<(Network, Vec<(f64, f64)>)> {
    check_n(n)?;
    let big_r = params.radius;
    if !(big_r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {big_r}")));
    }
    let pos: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let r = match params.radial {
                RadialLaw::Uniform => u * big_r,
                RadialLaw::AreaUniform => (1.0 + u * (big_r.cosh() - 1.0)).acosh(),
            };
            let theta = rng.random::<f64>() * 2.0 * PI;
            (r, theta)
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = logistic(big_r - hyperbolic_polar_distance(pos[i], pos[j]));
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Ok((Network::from_edges(n, edges)?, pos))
}

/// `R = 2 ln(8n / (π k̄))`.
pub fn radius_for_degree(n: usize, target_kbar: f64) -> Result<f64> {
    if !(target_kbar > 0.0) {
        return Err(Error::InvalidParameter(format!("target degree must be positive, got {target_kbar}")));
    }
    let r = 2.0 * (8.0 * n as f64 / (PI * target_kbar)).ln();
    if !(r > 1e-12) {
        return Err(Error::InfeasibleTarget { n, kbar: target_kbar });
    }
    Ok(r)
}

/// Expected average degree and clustering coefficient of the GLPM:
/// `k̄ = (n-1) τ (φ / (2γ+φ))^{d/2}`, `C = τ ((γ+φ) / (3γ+φ))^{d/2}`.
pub fn glpm_theoretical_measures(n: usize, params: &GlpmParams) -> (f64, f64) {
    let half_d = LATENT_DIM as f64 / 2.0;
    let GlpmParams { gamma, phi, tau } = *params;
    let kbar = (n as f64 - 1.0) * tau * (phi / (2.0 * gamma + phi)).powf(half_d);
    let c = tau * ((gamma + phi) / (3.0 * gamma + phi)).powf(half_d);
    (kbar, c)
}

const PHI_BRACKET: (f64, f64) = (1e-8, 1e8);
const PHI_REL_TOL: f64 = 1e-10;

/// Moment-matches `(φ, τ)` with `γ = 1` to an observed mean degree and
/// clustering coefficient.
///
/// `τ` is eliminated through the clustering equation; the degree equation
/// is then increasing in `φ` and is solved by bisection in log space.
pub fn calibrate_glpm(n: usize, observed_kbar: f64, observed_c: f64) -> Result<GlpmParams> {
    const GAMMA: f64 = 1.0;
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    if !(observed_kbar > 0.0) || !(observed_c >= 0.0) {
        return Err(Error::CalibrationInfeasible(format!(
            "need positive mean degree and non-negative clustering, got k̄ = {observed_kbar}, C = {observed_c}"
        )));
    }
    let tau_of = |phi: f64| observed_c * (3.0 * GAMMA + phi) / (GAMMA + phi);
    let excess = |phi: f64| {
        let p = GlpmParams { gamma: GAMMA, phi, tau: tau_of(phi) };
        glpm_theoretical_measures(n, &p).0 - observed_kbar
    };

    let (mut lo, mut hi) = PHI_BRACKET;
    if excess(lo) > 0.0 || excess(hi) < 0.0 {
        return Err(Error::CalibrationInfeasible(format!(
            "no φ in [{lo:e}, {hi:e}] matches k̄ = {observed_kbar} with C = {observed_c}"
        )));
    }
    while hi / lo - 1.0 > PHI_REL_TOL {
        let mid = (lo * hi).sqrt();
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let phi = (lo * hi).sqrt();
    let tau = tau_of(phi);
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::CalibrationInfeasible(format!("solved τ = {tau:.4} lies outside [0, 1] (φ = {phi:.4})")));
    }
    Ok(GlpmParams { gamma: GAMMA, phi, tau })
}
