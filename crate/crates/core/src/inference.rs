//! The three geometry-detection procedures.
//!
//! All of them use the stress difference `S_H - S_E` of the network's
//! geodesics as the statistic; negative values favour the hyperbolic disk.
//! Methods 2 and 3 compare the observed difference against the left tail of
//! a null sample drawn from permuted or bootstrapped networks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{stress_difference_geodesic, HyperbolicMdsOptions, PairConvention, StressReport};
use crate::error::{Error, Result};
use crate::genmodel::{calibrate_glpm, GlpmParams};
use crate::geodist::{build_conditional_table, default_grid_max, ConditionalDistanceTable, DEFAULT_GRID_CELLS};
use crate::graph::{geodesic_distances, network_measures, pair_index, GeodesicMatrix, Network};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Hyperbolic,
    Euclidean,
}

impl Geometry {
    pub fn name(&self) -> &'static str {
        match self {
            Geometry::Hyperbolic => "hyperbolic",
            Geometry::Euclidean => "euclidean",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Stress,
    Permutation,
    Bootstrap,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Stress, Method::Permutation, Method::Bootstrap];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Stress => "stress",
            Method::Permutation => "permutation",
            Method::Bootstrap => "bootstrap",
        }
    }

    pub fn number(&self) -> u8 {
        match self {
            Method::Stress => 1,
            Method::Permutation => 2,
            Method::Bootstrap => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryDecision {
    pub tag: Geometry,
    pub basis: Method,
}

/// Settings shared by the three methods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestOptions {
    pub replicates: usize,
    pub alpha: f64,
    pub hyperbolic: HyperbolicMdsOptions,
    pub pairs: PairConvention,
}

impl Default for TestOptions {
    fn default() -> Self {
        Self {
            replicates: 1000,
            alpha: 0.05,
            hyperbolic: HyperbolicMdsOptions::default(),
            pairs: PairConvention::default(),
        }
    }
}

impl TestOptions {
    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidParameter("replicate count must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: Method,
    pub stresses: StressReport,
    /// `S_H - S_E` of the input network.
    pub observed_diff: f64,
    pub null_samples: Vec<f64>,
    pub p_value: f64,
    pub alpha: f64,
    pub replicates_requested: usize,
    pub replicates_used: usize,
    pub replicates_discarded: usize,
    pub decision: GeometryDecision,
    /// Fitted GLPM parameters (bootstrap only).
    pub calibration: Option<GlpmParams>,
}

/// `#{s ≤ observed} / #samples`.
pub fn empirical_p_value(null_samples: &[f64], observed: f64) -> Result<f64> {
    if null_samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let below = null_samples.iter().filter(|&&s| s <= observed).count();
    Ok(below as f64 / null_samples.len() as f64)
}

/// Method 1: hyperbolic iff the hyperbolic embedding has strictly lower stress.
pub fn method1_stress_decision(net: &Network, opts: &TestOptions) -> Result<(StressReport, GeometryDecision)> {
    let delta = geodesic_distances(net)?;
    let report = stress_difference_geodesic(&delta, &opts.hyperbolic, opts.pairs)?;
    let tag = if report.difference < 0.0 { Geometry::Hyperbolic } else { Geometry::Euclidean };
    Ok((report, GeometryDecision { tag, basis: Method::Stress }))
}

/// Shuffles the upper-triangle entries of the adjacency matrix.
pub fn permute_adjacency<R: Rng + ?Sized>(net: &Network, rng: &mut R) -> Network {
    let mut upper = net.upper_triangle();
    upper.shuffle(rng);
    Network::from_upper_triangle(net.n(), &upper)
}

/// Draws one bootstrap network: a latent distance for every pair from the
/// table row of its observed geodesic, then a GLPM edge at that distance.
pub fn bootstrap_replicate<R: Rng + ?Sized>(
    geodesics: &GeodesicMatrix,
    params: &GlpmParams,
    table: &ConditionalDistanceTable,
    rng: &mut R,
) -> Result<Network> {
    let n = geodesics.n();
    let mut upper = vec![false; n * n.saturating_sub(1) / 2];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = table.sample(geodesics.get(i, j) as usize, rng)?;
            upper[pair_index(n, i, j)] = rng.random::<f64>() < params.edge_probability(d);
        }
    }
    Ok(Network::from_upper_triangle(n, &upper))
}

/// Smallest survivor count accepted from a replicate run.
pub fn min_replicates(requested: usize) -> usize {
    requested.min(20.max(requested.div_ceil(10)))
}

/// The random stream used for attempt `index` of a run seeded with `master`.
pub fn replicate_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

struct NullSample {
    samples: Vec<f64>,
    discarded: usize,
}

/// Runs attempts `0, 1, 2, …` until `requested` connected replicates have
/// been collected or `10 · requested` attempts are spent. Attempts are
/// evaluated in parallel chunks but consumed in index order, so the result
/// does not depend on scheduling.
fn collect_null<F>(requested: usize, master: u64, opts: &TestOptions, draw: F) -> Result<NullSample>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Network> + Sync,
{
    let cap = requested.saturating_mul(10);
    let mut samples = Vec::with_capacity(requested);
    let mut discarded = 0;
    let mut next = 0usize;
    while samples.len() < requested && next < cap {
        let chunk = (requested - samples.len()).max(16).min(cap - next);
        let results: Vec<Result<Option<f64>>> = (next..next + chunk)
            .into_par_iter()
            .map(|idx| {
                let mut rng = replicate_rng(master, idx as u64);
                let net = draw(&mut rng)?;
                match geodesic_distances(&net) {
                    Ok(delta) => Ok(Some(stress_difference_geodesic(&delta, &opts.hyperbolic, opts.pairs)?.difference)),
                    Err(Error::Disconnected { .. }) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect();
        next += chunk;
        for r in results {
            if samples.len() == requested {
                break;
            }
            match r? {
                Some(s) => samples.push(s),
                None => discarded += 1,
            }
        }
    }
    let needed = min_replicates(requested);
    if samples.len() < needed {
        return Err(Error::TooFewReplicates { used: samples.len(), attempts: next, needed });
    }
    Ok(NullSample { samples, discarded })
}

fn resampling_result(
    method: Method,
    stresses: StressReport,
    null: NullSample,
    opts: &TestOptions,
    calibration: Option<GlpmParams>,
) -> Result<TestResult> {
    let p_value = empirical_p_value(&null.samples, stresses.difference)?;
    let tag = if p_value < opts.alpha { Geometry::Hyperbolic } else { Geometry::Euclidean };
    Ok(TestResult {
        method,
        stresses,
        observed_diff: stresses.difference,
        replicates_requested: opts.replicates,
        replicates_used: null.samples.len(),
        replicates_discarded: null.discarded,
        null_samples: null.samples,
        p_value,
        alpha: opts.alpha,
        decision: GeometryDecision { tag, basis: method },
        calibration,
    })
}

/// Method 2: permutation test against networks with the same edge count.
pub fn method2_permutation_test<R: Rng + ?Sized>(net: &Network, opts: &TestOptions, rng: &mut R) -> Result<TestResult> {
    opts.validate()?;
    let delta = geodesic_distances(net)?;
    let stresses = stress_difference_geodesic(&delta, &opts.hyperbolic, opts.pairs)?;
    let master: u64 = rng.random();
    let null = collect_null(opts.replicates, master, opts, |r| Ok(permute_adjacency(net, r)))?;
    resampling_result(Method::Permutation, stresses, null, opts, None)
}

/// Fits the GLPM to the network and tabulates `P(d | δ = k)` up to the
/// largest observed geodesic.
pub fn bootstrap_model(net: &Network, delta: &GeodesicMatrix) -> Result<(GlpmParams, ConditionalDistanceTable)> {
    let m = network_measures(net)?;
    let params = calibrate_glpm(net.n(), m.avg_degree, m.transitivity)?;
    let k_max = (delta.max() as usize).max(1);
    let table = build_conditional_table(net.n(), &params, k_max, default_grid_max(params.gamma), DEFAULT_GRID_CELLS)?;
    Ok((params, table))
}

/// Method 3: conditional parametric bootstrap under the calibrated GLPM.
pub fn method3_bootstrap_test<R: Rng + ?Sized>(net: &Network, opts: &TestOptions, rng: &mut R) -> Result<TestResult> {
    opts.validate()?;
    let delta = geodesic_distances(net)?;
    let stresses = stress_difference_geodesic(&delta, &opts.hyperbolic, opts.pairs)?;
    let (params, table) = bootstrap_model(net, &delta)?;
    let master: u64 = rng.random();
    let null = collect_null(opts.replicates, master, opts, |r| bootstrap_replicate(&delta, &params, &table, r))?;
    resampling_result(Method::Bootstrap, stresses, null, opts, Some(params))
}

/// Runs one method; Method 1 is wrapped in a `TestResult` with no null sample.
pub fn run_method<R: Rng + ?Sized>(method: Method, net: &Network, opts: &TestOptions, rng: &mut R) -> Result<TestResult> {
    match method {
        Method::Stress => {
            let (stresses, decision) = method1_stress_decision(net, opts)?;
            Ok(TestResult {
                method,
                stresses,
                observed_diff: stresses.difference,
                null_samples: Vec::new(),
                p_value: f64::NAN,
                alpha: opts.alpha,
                replicates_requested: 0,
                replicates_used: 0,
                replicates_discarded: 0,
                decision,
                calibration: None,
            })
        }
        Method::Permutation => method2_permutation_test(net, opts, rng),
        Method::Bootstrap => method3_bootstrap_test(net, opts, rng),
    }
}
