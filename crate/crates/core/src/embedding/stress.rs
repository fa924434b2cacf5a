use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{classical_mds, geodesic_to_matrix, hyperbolic_mds, Embedding, HyperbolicMdsOptions};
use crate::error::{Error, Result};
use crate::graph::{geodesic_distances, GeodesicMatrix, Network};

/// Which index pairs the stress sum runs over.
///
/// `Ordered` sums over all `i != j` and is `√2` times the `Unordered`
/// value. `Ordered` reproduces the published Karate club stresses
/// (24.65 / 18.20) and is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairConvention {
    #[default]
    Ordered,
    Unordered,
}

/// `sqrt(Σ (δ_ij - d(u_i, u_j))²)`.
pub fn stress(delta: &GeodesicMatrix, emb: &Embedding, pairs: PairConvention) -> Result<f64> {
    stress_matrix(&geodesic_to_matrix(delta), emb, pairs)
}

pub fn stress_matrix(delta: &DMatrix<f64>, emb: &Embedding, pairs: PairConvention) -> Result<f64> {
    let n = delta.nrows();
    if emb.n() != n {
        return Err(Error::SizeMismatch { expected: n, found: emb.n() });
    }
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let r = delta[(i, j)] - emb.distance(i, j);
            sum += r * r;
        }
    }
    if pairs == PairConvention::Ordered {
        sum *= 2.0;
    }
    Ok(sum.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StressReport {
    pub stress_euclidean: f64,
    pub stress_hyperbolic: f64,
    /// `stress_hyperbolic - stress_euclidean`; negative favours hyperbolic.
    pub difference: f64,
    pub pair_convention: PairConvention,
}

impl StressReport {
    fn new(stress_euclidean: f64, stress_hyperbolic: f64, pair_convention: PairConvention) -> Self {
        Self {
            stress_euclidean,
            stress_hyperbolic,
            difference: stress_hyperbolic - stress_euclidean,
            pair_convention,
        }
    }
}

/// Both embeddings of one network's geodesics and their stresses.
pub fn stress_difference(net: &Network, opts: &HyperbolicMdsOptions, pairs: PairConvention) -> Result<StressReport> {
    stress_difference_geodesic(&geodesic_distances(net)?, opts, pairs)
}

pub fn stress_difference_geodesic(
    delta: &GeodesicMatrix,
    opts: &HyperbolicMdsOptions,
    pairs: PairConvention,
) -> Result<StressReport> {
    let euc = classical_mds(delta, 2)?;
    let hyp = hyperbolic_mds(delta, 2, opts)?;
    Ok(StressReport::new(stress(delta, &euc, pairs)?, stress(delta, &hyp, pairs)?, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{classical_mds_matrix, Manifold};
    use proptest::prelude::*;

    fn c4() -> GeodesicMatrix {
        geodesic_distances(&Network::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()).unwrap()
    }

    #[test]
    fn exact_embedding_has_zero_stress() {
        let pts = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let emb = Embedding::new(Manifold::EuclideanPlane, pts).unwrap();
        let d = emb.distance_matrix();
        assert_eq!(stress_matrix(&d, &emb, PairConvention::Ordered).unwrap(), 0.0);
    }

    #[test]
    fn four_cycle_square_stress() {
        let g = c4();
        let emb = classical_mds(&g, 2).unwrap();
        let want = 2.0 * (2f64.sqrt() - 1.0);
        let un = stress(&g, &emb, PairConvention::Unordered).unwrap();
        let or = stress(&g, &emb, PairConvention::Ordered).unwrap();
        assert!((un - want).abs() < 1e-12);
        assert!((or - want * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn size_mismatch() {
        let emb = Embedding::new(Manifold::EuclideanPlane, vec![[0.0, 0.0]]).unwrap();
        assert!(matches!(stress(&c4(), &emb, PairConvention::Ordered), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn report_difference_is_exact_and_deterministic() {
        let net = Network::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let opts = HyperbolicMdsOptions::default();
        let a = stress_difference(&net, &opts, PairConvention::Ordered).unwrap();
        let b = stress_difference(&net, &opts, PairConvention::Ordered).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.difference + a.stress_euclidean, a.stress_hyperbolic);
    }

    proptest! {
        #[test]
        fn planted_planar_configurations_are_recovered(
            pts in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 3..25)
        ) {
            let pts: Vec<[f64; 2]> = pts.into_iter().map(|(x, y)| [x, y]).collect();
            let d = Embedding::new(Manifold::EuclideanPlane, pts).unwrap().distance_matrix();
            let emb = classical_mds_matrix(&d).unwrap();
            prop_assert!(stress_matrix(&d, &emb, PairConvention::Ordered).unwrap() < 1e-8);
        }

        #[test]
        fn stress_is_isometry_invariant(
            pts in proptest::collection::vec((-0.6f64..0.6, -0.6f64..0.6), 3..15),
            angle in 0.0f64..std::f64::consts::TAU,
            shift in (-3.0f64..3.0, -3.0f64..3.0),
        ) {
            let (s, c) = angle.sin_cos();
            let rotate = |p: &[f64; 2]| [c * p[0] - s * p[1], s * p[0] + c * p[1]];
            let base: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
            let n = base.len();
            let delta = DMatrix::from_fn(n, n, |i, j| ((i as f64) - (j as f64)).abs().sqrt());

            let e1 = Embedding::new(Manifold::EuclideanPlane, base.clone()).unwrap();
            let moved = base.iter().map(|p| { let r = rotate(p); [r[0] + shift.0, r[1] + shift.1] }).collect();
            let e2 = Embedding::new(Manifold::EuclideanPlane, moved).unwrap();
            let s1 = stress_matrix(&delta, &e1, PairConvention::Ordered).unwrap();
            let s2 = stress_matrix(&delta, &e2, PairConvention::Ordered).unwrap();
            prop_assert!((s1 - s2).abs() < 1e-10);

            let m = Manifold::PoincareDisk { curvature: 1.0 };
            let h1 = Embedding::new(m, base.clone()).unwrap();
            let h2 = Embedding::new(m, base.iter().map(rotate).collect()).unwrap();
            let t1 = stress_matrix(&delta, &h1, PairConvention::Ordered).unwrap();
            let t2 = stress_matrix(&delta, &h2, PairConvention::Ordered).unwrap();
            prop_assert!((t1 - t2).abs() < 1e-10);
        }

        #[test]
        fn hyperbolic_stress_is_mobius_invariant(
            pts in proptest::collection::vec((-0.6f64..0.6, -0.6f64..0.6), 3..15),
            a in (-0.5f64..0.5, -0.5f64..0.5),
        ) {
            // disk automorphism z ↦ (z - a) / (1 - conj(a) z)
            let mobius = |&(x, y): &(f64, f64)| {
                let (nx, ny) = (x - a.0, y - a.1);
                let (dx, dy) = (1.0 - (a.0 * x + a.1 * y), -(a.0 * y - a.1 * x));
                let q = dx * dx + dy * dy;
                [(nx * dx + ny * dy) / q, (ny * dx - nx * dy) / q]
            };
            let n = pts.len();
            let delta = DMatrix::from_fn(n, n, |i, j| ((i as f64) - (j as f64)).abs().ln_1p());
            let m = Manifold::PoincareDisk { curvature: 1.0 };
            let h1 = Embedding::new(m, pts.iter().map(|&(x, y)| [x, y]).collect()).unwrap();
            let h2 = Embedding::new(m, pts.iter().map(mobius).collect()).unwrap();
            let t1 = stress_matrix(&delta, &h1, PairConvention::Ordered).unwrap();
            let t2 = stress_matrix(&delta, &h2, PairConvention::Ordered).unwrap();
            prop_assert!((t1 - t2).abs() < 1e-9 * t1.max(1.0));
        }
    }
}
