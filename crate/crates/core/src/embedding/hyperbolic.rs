//! Spectral (strain-minimising) embedding into the Poincaré disk.
//!
//! `A = cosh(√κ Δ)` is, for exact hyperbolic input, a Lorentzian Gram
//! matrix with one positive and `dim` negative eigenvalues. The leading
//! eigenpair gives the time-like coordinate `x0`, the most negative pairs
//! give the spatial directions, and `x0` is mapped to a Poincaré radius.
//!
//! Two presets are provided:
//!
//! * [`HyperbolicMdsOptions::hydra`] (the default) follows the conventions
//!   of the `hydra` R package: unscaled eigenvector rows as directions, the
//!   radial map `r = sqrt((α x0 - x_min) / (α x0 + x_min))` with `α = 1.1`,
//!   and an equi-angular adjustment of strength 0.5.
//! * [`HyperbolicMdsOptions::strain`] is the plain hyperboloid
//!   construction. It recovers exact hyperbolic configurations up to
//!   isometry.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{check_dim, geodesic_to_matrix, Embedding, Manifold};
use crate::error::{Error, Result};
use crate::graph::GeodesicMatrix;
use crate::linalg::sym_eigen;

/// How the time-like coordinate `x0` becomes a Poincaré radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialMap {
    /// `r = sqrt((x0 - 1) / (x0 + 1))` with `x0` clamped below at 1.
    Hyperboloid,
    /// `r = sqrt((α x0 - x_min) / (α x0 + x_min))`, `α > 1`.
    Rescaled { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicMdsOptions {
    pub curvature: f64,
    pub radial: RadialMap,
    /// Interpolation weight in `[0, 1]` towards equally spaced angles.
    pub equi_adj: f64,
    /// Scale direction rows by `sqrt(|λ|)` before normalising.
    pub scale_directions: bool,
}

impl HyperbolicMdsOptions {
    pub fn hydra() -> Self {
        Self {
            curvature: 1.0,
            radial: RadialMap::Rescaled { alpha: 1.1 },
            equi_adj: 0.5,
            scale_directions: false,
        }
    }

    pub fn strain() -> Self {
        Self {
            curvature: 1.0,
            radial: RadialMap::Hyperboloid,
            equi_adj: 0.0,
            scale_directions: true,
        }
    }

    pub fn with_curvature(mut self, curvature: f64) -> Self {
        self.curvature = curvature;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.curvature > 0.0) || !self.curvature.is_finite() {
            return Err(Error::NonPositiveCurvature(self.curvature));
        }
        if !(0.0..=1.0).contains(&self.equi_adj) {
            return Err(Error::InvalidParameter(format!("equi_adj must lie in [0, 1], got {}", self.equi_adj)));
        }
        if let RadialMap::Rescaled { alpha } = self.radial {
            if !(alpha > 1.0) {
                return Err(Error::InvalidParameter(format!("alpha must exceed 1, got {alpha}")));
            }
        }
        Ok(())
    }
}

impl Default for HyperbolicMdsOptions {
    fn default() -> Self {
        Self::hydra()
    }
}

pub fn hyperbolic_mds(delta: &GeodesicMatrix, dim: usize, opts: &HyperbolicMdsOptions) -> Result<Embedding> {
    check_dim(dim)?;
    hyperbolic_mds_matrix(&geodesic_to_matrix(delta), opts)
}

/// Hyperbolic MDS on an arbitrary symmetric dissimilarity matrix.
pub fn hyperbolic_mds_matrix(delta: &DMatrix<f64>, opts: &HyperbolicMdsOptions) -> Result<Embedding> {
    opts.validate()?;
    let n = delta.nrows();
    let manifold = Manifold::PoincareDisk { curvature: opts.curvature };
    if n < 3 {
        return small_case(delta, opts, manifold);
    }
    let sk = opts.curvature.sqrt();
    let a = delta.map(|d| (sk * d).cosh());
    let eig = sym_eigen(a);

    let lead = eig.values[0].max(0.0).sqrt();
    // Perron vector of an entrywise-positive matrix; the sign convention in
    // sym_eigen makes it non-negative.
    let x0: Vec<f64> = (0..n).map(|i| (lead * eig.vectors[(i, 0)]).abs()).collect();

    // two most negative eigenpairs, second-most-negative first
    let cols = [n - 2, n - 1];
    let mut theta = Vec::with_capacity(n);
    for i in 0..n {
        let mut u = [0.0; 2];
        for (c, &k) in cols.iter().enumerate() {
            let s = if opts.scale_directions { (-eig.values[k]).max(0.0).sqrt() } else { 1.0 };
            u[c] = eig.vectors[(i, k)] * s;
        }
        let norm = (u[0] * u[0] + u[1] * u[1]).sqrt();
        theta.push(if norm > 0.0 { u[1].atan2(u[0]) } else { 0.0 });
    }

    let radius = radial_coordinates(&x0, opts.radial);
    if opts.equi_adj > 0.0 {
        equi_angular_adjust(&mut theta, opts.equi_adj);
    }
    let coords = radius
        .iter()
        .zip(&theta)
        .map(|(&r, &t)| [r * t.cos(), r * t.sin()])
        .collect();
    Embedding::new(manifold, coords)
}

fn radial_coordinates(x0: &[f64], map: RadialMap) -> Vec<f64> {
    match map {
        RadialMap::Hyperboloid => x0
            .iter()
            .map(|&x| {
                let x = x.max(1.0);
                ((x - 1.0) / (x + 1.0)).sqrt()
            })
            .collect(),
        RadialMap::Rescaled { alpha } => {
            let x_min = x0.iter().copied().fold(f64::INFINITY, f64::min).max(f64::MIN_POSITIVE);
            x0.iter()
                .map(|&x| ((alpha * x - x_min) / (alpha * x + x_min)).sqrt())
                .collect()
        }
    }
}

/// Pulls sorted angles towards an equally spaced sequence with the same
/// mean offset: `θ_(k) ← (1 - w) θ_(k) + w (−π + 2πk/n + c)`.
fn equi_angular_adjust(theta: &mut [f64], weight: f64) {
    let n = theta.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| theta[a].total_cmp(&theta[b]).then(a.cmp(&b)));
    let step = 2.0 * PI / n as f64;
    let equi: Vec<f64> = (0..n).map(|k| -PI + step * k as f64).collect();
    let shift = order.iter().zip(&equi).map(|(&i, e)| theta[i] - e).sum::<f64>() / n as f64;
    let adjusted: Vec<f64> = order
        .iter()
        .zip(&equi)
        .map(|(&i, e)| (1.0 - weight) * theta[i] + weight * (e + shift))
        .collect();
    for (&i, t) in order.iter().zip(adjusted) {
        theta[i] = t;
    }
}

/// One or two points: place them on a diameter at the exact distance.
fn small_case(delta: &DMatrix<f64>, opts: &HyperbolicMdsOptions, manifold: Manifold) -> Result<Embedding> {
    let n = delta.nrows();
    let coords = match n {
        0 => vec![],
        1 => vec![[0.0, 0.0]],
        _ => {
            // each point at hyperbolic distance d/2 from the origin
            let half = 0.5 * delta[(0, 1)] * opts.curvature.sqrt();
            let r = (0.5 * half).tanh();
            vec![[-r, 0.0], [r, 0.0]]
        }
    };
    Embedding::new(manifold, coords)
}
