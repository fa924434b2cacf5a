//! Two-dimensional embeddings of geodesic distance matrices in the
//! Euclidean plane and the Poincaré disk, and the stress statistic used to
//! compare them.

mod classical;
mod hyperbolic;
mod stress;

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GeodesicMatrix, Network};

pub use classical::{classical_mds, classical_mds_matrix};
pub use hyperbolic::{hyperbolic_mds, hyperbolic_mds_matrix, HyperbolicMdsOptions, RadialMap};
pub use stress::{stress, stress_difference, stress_difference_geodesic, stress_matrix, PairConvention, StressReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Manifold {
    EuclideanPlane,
    PoincareDisk { curvature: f64 },
}

impl Manifold {
    pub fn name(&self) -> &'static str {
        match self {
            Manifold::EuclideanPlane => "euclidean",
            Manifold::PoincareDisk { .. } => "poincare",
        }
    }

    pub fn curvature(&self) -> f64 {
        match self {
            Manifold::EuclideanPlane => 0.0,
            Manifold::PoincareDisk { curvature } => *curvature,
        }
    }
}

/// Per-node planar coordinates tagged with the manifold they live in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    manifold: Manifold,
    coords: Vec<[f64; 2]>,
}

impl Embedding {
    /// Poincaré coordinates must lie strictly inside the unit disk.
    pub fn new(manifold: Manifold, coords: Vec<[f64; 2]>) -> Result<Self> {
        if let Manifold::PoincareDisk { curvature } = manifold {
            if !(curvature > 0.0) {
                return Err(Error::NonPositiveCurvature(curvature));
            }
            if let Some(i) = coords.iter().position(|u| !(u[0] * u[0] + u[1] * u[1] < 1.0)) {
                return Err(Error::InvalidParameter(format!("point {i} is not inside the unit disk")));
            }
        }
        Ok(Self { manifold, coords })
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    /// Distance between points `i` and `j` in the embedding's manifold.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        manifold_distance(self, i, j)
    }

    /// All pairwise distances, row-major.
    pub fn distance_matrix(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.distance(i, j);
                out[(i, j)] = d;
                out[(j, i)] = d;
            }
        }
        out
    }

    /// CSV with header `node_label,x,y,manifold,curvature`.
    pub fn to_csv(&self, net: Option<&Network>) -> String {
        let mut s = String::from("node_label,x,y,manifold,curvature\n");
        for (i, u) in self.coords.iter().enumerate() {
            let label = net.map_or_else(|| i.to_string(), |n| n.label(i));
            let _ = writeln!(
                s,
                "{label},{},{},{},{}",
                u[0],
                u[1],
                self.manifold.name(),
                self.manifold.curvature()
            );
        }
        s
    }
}

/// Euclidean: straight-line distance. Poincaré disk with curvature `-κ`:
/// `acosh(1 + 2|u-v|² / ((1-|u|²)(1-|v|²))) / √κ`.
pub fn manifold_distance(emb: &Embedding, i: usize, j: usize) -> f64 {
    let (u, v) = (emb.coords[i], emb.coords[j]);
    let dx = u[0] - v[0];
    let dy = u[1] - v[1];
    let sq = dx * dx + dy * dy;
    match emb.manifold {
        Manifold::EuclideanPlane => sq.sqrt(),
        Manifold::PoincareDisk { curvature } => {
            let nu = 1.0 - (u[0] * u[0] + u[1] * u[1]);
            let nv = 1.0 - (v[0] * v[0] + v[1] * v[1]);
            (1.0 + 2.0 * sq / (nu * nv)).acosh() / curvature.sqrt()
        }
    }
}

pub(crate) fn geodesic_to_matrix(delta: &GeodesicMatrix) -> DMatrix<f64> {
    let n = delta.n();
    DMatrix::from_row_slice(n, n, &delta.to_f64())
}

fn check_dim(dim: usize) -> Result<()> {
    if dim != 2 {
        return Err(Error::DimensionUnsupported(dim));
    }
    Ok(())
}
