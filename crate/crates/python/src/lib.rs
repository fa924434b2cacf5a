//! Python bindings: `import pynetgeom`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use netgeom::embedding::{classical_mds, hyperbolic_mds, stress_difference, HyperbolicMdsOptions, PairConvention};
use netgeom::genmodel::{calibrate_glpm, radius_for_degree, GlpmParams, HyperbolicParams};
use netgeom::graph::{geodesic_distances, network_measures, parse_edge_list};
use netgeom::inference::{run_method, Method, TestOptions};

fn err(e: netgeom::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Network", module = "pynetgeom", frozen)]
pub struct PyNetwork {
    inner: netgeom::graph::Network,
}

#[pymethods]
impl PyNetwork {
    /// Builds a network on nodes `0..n` from `(i, j)` pairs.
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Self { inner: netgeom::graph::Network::from_edges(n, edges).map_err(err)? })
    }

    /// Parses whitespace-separated edge-list text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self { inner: parse_edge_list(text, true).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn density(&self) -> f64 {
        self.inner.density()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn labels(&self) -> Vec<String> {
        (0..self.inner.n()).map(|i| self.inner.label(i)).collect()
    }

    /// `(density, mean degree, transitivity)`.
    fn measures(&self) -> PyResult<(f64, f64, f64)> {
        let m = network_measures(&self.inner).map_err(err)?;
        Ok((m.density, m.avg_degree, m.transitivity))
    }

    fn geodesics(&self) -> PyResult<Vec<Vec<u32>>> {
        let g = geodesic_distances(&self.inner).map_err(err)?;
        Ok((0..g.n()).map(|i| g.row(i).to_vec()).collect())
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list()
    }

    fn __repr__(&self) -> String {
        format!("Network(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

#[pyclass(name = "TestResult", module = "pynetgeom", frozen, get_all)]
pub struct PyTestResult {
    method: String,
    stress_euclidean: f64,
    stress_hyperbolic: f64,
    observed_diff: f64,
    /// `None` for the stress comparison.
    p_value: Option<f64>,
    alpha: f64,
    replicates_requested: usize,
    replicates_used: usize,
    replicates_discarded: usize,
    decision: String,
    null_samples: Vec<f64>,
}

#[pymethods]
impl PyTestResult {
    fn __repr__(&self) -> String {
        let p = self.p_value.map_or_else(|| "None".to_string(), |p| format!("{p:.4}"));
        format!(
            "TestResult(method={:?}, observed_diff={:.4}, p_value={p}, decision={:?})",
            self.method, self.observed_diff, self.decision
        )
    }
}

fn options(curvature: f64) -> HyperbolicMdsOptions {
    HyperbolicMdsOptions::default().with_curvature(curvature)
}

/// Planar classical MDS coordinates of the network's geodesics.
#[pyfunction]
fn classical_embedding(net: &PyNetwork) -> PyResult<Vec<[f64; 2]>> {
    let g = geodesic_distances(&net.inner).map_err(err)?;
    Ok(classical_mds(&g, 2).map_err(err)?.coords().to_vec())
}

/// Poincaré-disk coordinates from hyperbolic MDS.
#[pyfunction]
#[pyo3(signature = (net, curvature = 1.0))]
fn hyperbolic_embedding(net: &PyNetwork, curvature: f64) -> PyResult<Vec<[f64; 2]>> {
    let g = geodesic_distances(&net.inner).map_err(err)?;
    Ok(hyperbolic_mds(&g, 2, &options(curvature)).map_err(err)?.coords().to_vec())
}

/// `(S_E, S_H, S_H - S_E)`.
#[pyfunction]
#[pyo3(signature = (net, curvature = 1.0))]
fn stresses(net: &PyNetwork, curvature: f64) -> PyResult<(f64, f64, f64)> {
    let r = stress_difference(&net.inner, &options(curvature), PairConvention::Ordered).map_err(err)?;
    Ok((r.stress_euclidean, r.stress_hyperbolic, r.difference))
}

/// Runs `"stress"`, `"permutation"` or `"bootstrap"`.
#[pyfunction]
#[pyo3(signature = (net, method = "stress", replicates = 1000, alpha = 0.05, seed = 1))]
fn detect(net: &PyNetwork, method: &str, replicates: usize, alpha: f64, seed: u64) -> PyResult<PyTestResult> {
    let m = match method {
        "stress" => Method::Stress,
        "permutation" => Method::Permutation,
        "bootstrap" => Method::Bootstrap,
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    let opts = TestOptions::default().with_replicates(replicates).with_alpha(alpha);
    let r = run_method(m, &net.inner, &opts, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(err)?;
    Ok(PyTestResult {
        method: m.name().into(),
        stress_euclidean: r.stresses.stress_euclidean,
        stress_hyperbolic: r.stresses.stress_hyperbolic,
        observed_diff: r.observed_diff,
        p_value: (m != Method::Stress).then_some(r.p_value),
        alpha: r.alpha,
        replicates_requested: r.replicates_requested,
        replicates_used: r.replicates_used,
        replicates_discarded: r.replicates_discarded,
        decision: r.decision.tag.name().into(),
        null_samples: r.null_samples,
    })
}

/// Samples a GLPM network; returns the network and latent positions.
#[pyfunction]
#[pyo3(signature = (n, tau, phi, gamma = 1.0, seed = 1))]
fn sample_glpm(n: usize, tau: f64, phi: f64, gamma: f64, seed: u64) -> PyResult<(PyNetwork, Vec<[f64; 2]>)> {
    let p = GlpmParams::new(gamma, phi, tau).map_err(err)?;
    let (net, z) = netgeom::genmodel::sample_glpm(n, &p, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(err)?;
    Ok((PyNetwork { inner: net }, z))
}

/// Samples a hyperbolic disk network targeting mean degree `kbar`;
/// returns the network and polar positions `(r, theta)`.
#[pyfunction]
#[pyo3(signature = (n, kbar, seed = 1))]
fn sample_hyperbolic(n: usize, kbar: f64, seed: u64) -> PyResult<(PyNetwork, Vec<(f64, f64)>)> {
    let p = HyperbolicParams::new(radius_for_degree(n, kbar).map_err(err)?).map_err(err)?;
    let (net, pos) = netgeom::genmodel::sample_hyperbolic(n, &p, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(err)?;
    Ok((PyNetwork { inner: net }, pos))
}

/// `(gamma, phi, tau)` matching a mean degree and clustering coefficient.
#[pyfunction]
fn calibrate(n: usize, kbar: f64, clustering: f64) -> PyResult<(f64, f64, f64)> {
    let p = calibrate_glpm(n, kbar, clustering).map_err(err)?;
    Ok((p.gamma, p.phi, p.tau))
}

#[pymodule]
fn pynetgeom(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNetwork>()?;
    m.add_class::<PyTestResult>()?;
    m.add_function(wrap_pyfunction!(classical_embedding, m)?)?;
    m.add_function(wrap_pyfunction!(hyperbolic_embedding, m)?)?;
    m.add_function(wrap_pyfunction!(stresses, m)?)?;
    m.add_function(wrap_pyfunction!(detect, m)?)?;
    m.add_function(wrap_pyfunction!(sample_glpm, m)?)?;
    m.add_function(wrap_pyfunction!(sample_hyperbolic, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate, m)?)?;
    Ok(())
}
