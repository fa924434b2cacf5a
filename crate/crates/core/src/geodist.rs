//! Approximate distribution of the geodesic (hop) distance between two GLPM
//! nodes given their latent distance, and the induced conditional law of
//! latent distance given an observed geodesic distance.
//!
//! `ξ_k(d)` is the probability of one particular walk of length `k`
//! between two nodes whose latent positions are the origin and a point at
//! distance `d`. It has the Gaussian form `h_k N(d; 0, ω_k I)` with
//! coefficients given by a three-term recursion. Walk counts are turned
//! into geodesic probabilities with the Poisson approximation
//! `P(δ ≤ k) ≈ 1 - exp(-n^{k-1} ξ_k)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genmodel::{GlpmParams, LATENT_DIM};

/// Recursion coefficients `(h_r, α_r, ω_r)` for `r = 1..=K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecursionCoefficients {
    pub h: Vec<f64>,
    pub alpha: Vec<f64>,
    pub omega: Vec<f64>,
    pub params: GlpmParams,
}

/// Isotropic `d`-variate normal density at a point at distance `dist` from
/// the mean, with per-axis variance `var`.
fn normal_density(dist: f64, var: f64) -> f64 {
    let d = LATENT_DIM as f64;
    (2.0 * PI * var).powf(-d / 2.0) * (-dist * dist / (2.0 * var)).exp()
}

/// Builds `K` steps of the walk recursion with the anchor node at the origin:
///
/// ```text
/// h_1 = τ (2πφ)^{d/2},  α_1 = 1,  ω_1 = φ
/// h_{r+1} = h_r · h_1 · α_r^{-d} · N(0; 0, (ω_r + γ) / α_r²)
/// α_{r+1} = α_r γ / (ω_r + γ)
/// ω_{r+1} = (ω_r φ + ω_r γ + γ φ) / (ω_r + γ)
/// ```
///
/// Each extra hop contributes one more edge kernel `τ exp(-|·|²/2φ)`, which
/// is where the factor `h_1` (and so `τ`) enters every step.
pub fn recursion_coefficients(params: &GlpmParams, k_max: usize) -> Result<RecursionCoefficients> {
    params.validate()?;
    if k_max == 0 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    let GlpmParams { gamma, phi, tau } = *params;
    let d = LATENT_DIM as f64;
    let h1 = tau * (2.0 * PI * phi).powf(d / 2.0);
    let (mut h, mut alpha, mut omega) = (vec![h1], vec![1.0f64], vec![phi]);
    for r in 0..k_max - 1 {
        let (hr, ar, wr) = (h[r], alpha[r], omega[r]);
        h.push(hr * h1 * ar.powf(-d) * normal_density(0.0, (wr + gamma) / (ar * ar)));
        alpha.push(ar * gamma / (wr + gamma));
        omega.push((wr * phi + wr * gamma + gamma * phi) / (wr + gamma));
    }
    Ok(RecursionCoefficients { h, alpha, omega, params: *params })
}

impl RecursionCoefficients {
    pub fn k_max(&self) -> usize {
        self.h.len()
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.k_max() {
            return Err(Error::KOutOfRange { k, max: self.k_max() });
        }
        Ok(())
    }
}

/// `ξ_k(d) = h_k N(d; 0, ω_k)`.
pub fn walk_probability(coeffs: &RecursionCoefficients, k: usize, d_latent: f64) -> Result<f64> {
    coeffs.check_k(k)?;
    Ok(coeffs.h[k - 1] * normal_density(d_latent, coeffs.omega[k - 1]))
}

/// Approximate `P(δ = k | d)`.
///
/// `k = 1` is the edge probability `ξ_1` itself; for `k ≥ 2`,
/// `exp(-n^{k-2} ξ_{k-1}) - exp(-n^{k-1} ξ_k)`, floored at zero.
pub fn geodesic_pmf(coeffs: &RecursionCoefficients, n: usize, k: usize, d_latent: f64) -> Result<f64> {
    coeffs.check_k(k)?;
    if k == 1 {
        return walk_probability(coeffs, 1, d_latent);
    }
    let nf = n as f64;
    let prev = nf.powi(k as i32 - 2) * walk_probability(coeffs, k - 1, d_latent)?;
    let cur = nf.powi(k as i32 - 1) * walk_probability(coeffs, k, d_latent)?;
    Ok(((-prev).exp() - (-cur).exp()).max(0.0))
}

/// Density of the distance between two independent `N(0, γ I_2)` points:
/// `d / √(2γ)` is Chi with two degrees of freedom.
pub fn distance_prior(d_latent: f64, gamma: f64) -> f64 {
    if d_latent < 0.0 {
        return 0.0;
    }
    d_latent / (2.0 * gamma) * (-d_latent * d_latent / (4.0 * gamma)).exp()
}

/// Grid-discretised `P(d | δ = k)` for `k = 1..=K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalDistanceTable {
    step: f64,
    grid: Vec<f64>,
    /// `pmf[k-1][m]` is the mass of the cell `(grid[m] - step, grid[m]]`.
    pmf: Vec<Vec<f64>>,
    cdf: Vec<Vec<f64>>,
    pub n: usize,
    pub params: GlpmParams,
}

/// Default grid: `(0, 6√γ]` in 600 cells.
pub const DEFAULT_GRID_CELLS: usize = 600;

pub fn default_grid_max(gamma: f64) -> f64 {
    6.0 * gamma.sqrt()
}

/// Builds the table with weights `ℓ_k(d) · prior(d)` normalised per row.
pub fn build_conditional_table(
    n: usize,
    params: &GlpmParams,
    k_max: usize,
    grid_max: f64,
    cells: usize,
) -> Result<ConditionalDistanceTable> {
    if !(grid_max >= default_grid_max(params.gamma) * (1.0 - 1e-12)) {
        return Err(Error::InvalidParameter(format!(
            "grid must reach 6√γ = {}, got {grid_max}",
            default_grid_max(params.gamma)
        )));
    }
    if cells < 100 {
        return Err(Error::InvalidParameter(format!("grid needs at least 100 cells, got {cells}")));
    }
    let coeffs = recursion_coefficients(params, k_max)?;
    let step = grid_max / cells as f64;
    let grid: Vec<f64> = (1..=cells).map(|m| m as f64 * step).collect();
    let prior: Vec<f64> = grid.iter().map(|&d| distance_prior(d, params.gamma)).collect();

    let mut pmf = Vec::with_capacity(k_max);
    let mut cdf = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut row = Vec::with_capacity(cells);
        for (&d, &p) in grid.iter().zip(&prior) {
            row.push(geodesic_pmf(&coeffs, n, k, d)? * p);
        }
        let mass: f64 = row.iter().sum::<f64>() * step;
        if !(mass >= 1e-12) {
            return Err(Error::DegenerateRow { k, mass });
        }
        let total: f64 = row.iter().sum();
        row.iter_mut().for_each(|w| *w /= total);
        let mut acc = 0.0;
        let c: Vec<f64> = row
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        pmf.push(row);
        cdf.push(c);
    }
    Ok(ConditionalDistanceTable { step, grid, pmf, cdf, n, params: *params })
}

impl ConditionalDistanceTable {
    pub fn k_max(&self) -> usize {
        self.pmf.len()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn row(&self, k: usize) -> Result<&[f64]> {
        self.check_k(k)?;
        Ok(&self.pmf[k - 1])
    }

    /// Mean latent distance of row `k`, using cell midpoints.
    pub fn row_mean(&self, k: usize) -> Result<f64> {
        let row = self.row(k)?;
        Ok(row.iter().zip(&self.grid).map(|(w, d)| w * (d - 0.5 * self.step)).sum())
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.k_max() {
            return Err(Error::KOutOfRange { k, max: self.k_max() });
        }
        Ok(())
    }

    /// Inverse-CDF draw from row `k`, uniform within the chosen cell.
    pub fn sample<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<f64> {
        self.check_k(k)?;
        let cdf = &self.cdf[k - 1];
        let u: f64 = rng.random::<f64>() * cdf[cdf.len() - 1];
        let m = cdf.partition_point(|&c| c < u).min(cdf.len() - 1);
        let jitter: f64 = rng.random();
        Ok(self.grid[m] - jitter * self.step)
    }

    /// CSV with header `k,d,probability`; `d` is the right edge of each cell.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,d,probability\n");
        for (k, row) in self.pmf.iter().enumerate() {
            for (d, p) in self.grid.iter().zip(row) {
                let _ = writeln!(s, "{},{},{}", k + 1, d, p);
            }
        }
        s
    }
}
