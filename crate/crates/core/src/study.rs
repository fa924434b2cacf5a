//! Sensitivity / specificity study over simulated networks.
//!
//! For every network size, connected networks are drawn from the hyperbolic
//! disk model and from the GLPM over a grid of parameters, binned by their
//! achieved density, and classified by each method. Sensitivity is the
//! fraction of hyperbolic networks called hyperbolic; specificity is the
//! fraction of GLPM networks called Euclidean.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genmodel::{radius_for_degree, sample_glpm, sample_hyperbolic, GlpmParams, HyperbolicParams};
use crate::graph::{is_connected, Network};
use crate::inference::{run_method, Geometry, Method, TestOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub sizes: Vec<usize>,
    /// Half-open density bands `(low, high]`.
    pub bands: Vec<(f64, f64)>,
    /// Networks per arm (hyperbolic / GLPM) per cell.
    pub replicates: usize,
    pub methods: Vec<Method>,
    pub permutations: usize,
    pub bootstraps: usize,
    pub alpha: f64,
    pub seed: u64,
    pub gamma: f64,
    pub phi: f64,
    pub tau_grid: Vec<f64>,
    /// Target densities for the hyperbolic arm; `k̄ = ρ (n - 1)`.
    pub hyperbolic_density_grid: Vec<f64>,
    /// Generation attempts per (size, arm) before giving up on unfilled bands.
    pub max_attempts: usize,
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let k = ((hi - lo) / step).round() as usize;
    (0..=k).map(|i| ((lo + i as f64 * step) * 1e6).round() / 1e6).collect()
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            sizes: vec![15, 30, 60],
            bands: vec![(0.0, 0.2), (0.2, 0.4), (0.4, 1.0)],
            replicates: 30,
            methods: Method::ALL.to_vec(),
            permutations: 200,
            bootstraps: 200,
            alpha: 0.05,
            seed: 1,
            gamma: 1.0,
            phi: 2.0,
            tau_grid: grid(0.1, 1.0, 0.05),
            hyperbolic_density_grid: grid(0.025, 0.9, 0.025),
            max_attempts: 20_000,
        }
    }
}

fn parse_list<T: std::str::FromStr>(v: &str, line: usize) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| Error::Config { line, msg: format!("cannot parse `{s}`") }))
        .collect()
}

fn parse_one<T: std::str::FromStr>(v: &str, line: usize) -> Result<T> {
    v.parse::<T>().map_err(|_| Error::Config { line, msg: format!("cannot parse `{v}`") })
}

fn parse_method(s: &str) -> Option<Method> {
    match s {
        "stress" | "1" => Some(Method::Stress),
        "permutation" | "2" => Some(Method::Permutation),
        "bootstrap" | "3" => Some(Method::Bootstrap),
        _ => None,
    }
}

impl StudyConfig {
    /// Parses flat `key = value` text on top of the defaults. Lists are
    /// comma-separated; bands are written `low:high`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::Config { line, msg: "expected `key = value`".into() })?;
            match key {
                "sizes" => c.sizes = parse_list(value, line)?,
                "bands" => {
                    c.bands = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|b| {
                            let (lo, hi) = b
                                .split_once(':')
                                .ok_or_else(|| Error::Config { line, msg: format!("band `{b}` is not low:high") })?;
                            Ok((parse_one(lo.trim(), line)?, parse_one(hi.trim(), line)?))
                        })
                        .collect::<Result<_>>()?
                }
                "replicates" => c.replicates = parse_one(value, line)?,
                "methods" => {
                    c.methods = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|m| parse_method(m).ok_or_else(|| Error::Config { line, msg: format!("unknown method `{m}`") }))
                        .collect::<Result<_>>()?
                }
                "permutations" => c.permutations = parse_one(value, line)?,
                "bootstraps" => c.bootstraps = parse_one(value, line)?,
                "alpha" => c.alpha = parse_one(value, line)?,
                "seed" => c.seed = parse_one(value, line)?,
                "gamma" => c.gamma = parse_one(value, line)?,
                "phi" => c.phi = parse_one(value, line)?,
                "tau_grid" => c.tau_grid = parse_list(value, line)?,
                "hyperbolic_density_grid" => c.hyperbolic_density_grid = parse_list(value, line)?,
                "max_attempts" => c.max_attempts = parse_one(value, line)?,
                _ => return Err(Error::Config { line, msg: format!("unknown key `{key}`") }),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config { line: 0, msg });
        if self.replicates == 0 || self.permutations == 0 || self.bootstraps == 0 {
            return bad("replicate counts must be at least 1".into());
        }
        if self.sizes.is_empty() || self.sizes.iter().any(|&n| n < 4) {
            return bad("sizes must be non-empty and at least 4".into());
        }
        if self.methods.is_empty() {
            return bad("no methods selected".into());
        }
        if self.bands.is_empty() {
            return bad("no density bands".into());
        }
        let mut bands = self.bands.clone();
        bands.sort_by(|a, b| a.0.total_cmp(&b.0));
        for &(lo, hi) in &bands {
            if !(0.0 <= lo && lo < hi && hi <= 1.0) {
                return bad(format!("band ({lo}, {hi}] is not inside (0, 1]"));
            }
        }
        if bands.windows(2).any(|w| w[1].0 < w[0].1) {
            return bad("density bands overlap".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        GlpmParams::new(self.gamma, self.phi, 0.5).map_err(|e| Error::Config { line: 0, msg: e.to_string() })?;
        if self.tau_grid.is_empty() || self.tau_grid.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
            return bad("tau_grid must be non-empty with values in (0, 1]".into());
        }
        if self.hyperbolic_density_grid.is_empty() || self.hyperbolic_density_grid.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
            return bad("hyperbolic_density_grid must be non-empty with values in (0, 1]".into());
        }
        if self.max_attempts == 0 {
            return bad("max_attempts must be at least 1".into());
        }
        Ok(())
    }

    fn replicates_for(&self, m: Method) -> usize {
        match m {
            Method::Stress => 0,
            Method::Permutation => self.permutations,
            Method::Bootstrap => self.bootstraps,
        }
    }
}

/// Counts for one `(size, band, method)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyCell {
    pub n: usize,
    pub band: (f64, f64),
    pub method: Method,
    /// False when either arm produced no connected network in this band.
    pub available: bool,
    pub hyperbolic_generated: usize,
    pub glpm_generated: usize,
    /// Networks the method returned a decision for.
    pub hyperbolic_total: usize,
    pub hyperbolic_correct: usize,
    pub glpm_total: usize,
    pub glpm_correct: usize,
    /// Networks where the method could not run (calibration or replicate failure).
    pub failed: usize,
}

impl StudyCell {
    pub fn sensitivity(&self) -> Option<f64> {
        (self.hyperbolic_total > 0).then(|| self.hyperbolic_correct as f64 / self.hyperbolic_total as f64)
    }

    pub fn specificity(&self) -> Option<f64> {
        (self.glpm_total > 0).then(|| self.glpm_correct as f64 / self.glpm_total as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub cells: Vec<StudyCell>,
}

impl StudyReport {
    pub fn cell(&self, n: usize, band: (f64, f64), method: Method) -> Option<&StudyCell> {
        self.cells.iter().find(|c| c.n == n && c.band == band && c.method == method)
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>5}  {:>11}  {:<11}  {:>17}  {:>17}  {:>6}",
            "n", "density", "method", "sensitivity", "specificity", "failed"
        );
        let rate = |v: Option<f64>, num: usize, den: usize| match v {
            Some(v) => format!("{v:.4} ({num}/{den})"),
            None => "-".into(),
        };
        for c in &self.cells {
            let band = format!("({}, {}]", c.band.0, c.band.1);
            if !c.available {
                let _ = writeln!(s, "{:>5}  {:>11}  {:<11}  unavailable", c.n, band, c.method.name());
                continue;
            }
            let _ = writeln!(
                s,
                "{:>5}  {:>11}  {:<11}  {:>17}  {:>17}  {:>6}",
                c.n,
                band,
                c.method.name(),
                rate(c.sensitivity(), c.hyperbolic_correct, c.hyperbolic_total),
                rate(c.specificity(), c.glpm_correct, c.glpm_total),
                c.failed
            );
        }
        s
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with a path of indices into an independent seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix(master), |h, &p| splitmix(h ^ splitmix(p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Arm {
    Hyperbolic,
    Glpm,
}

impl Arm {
    fn truth(self) -> Geometry {
        match self {
            Arm::Hyperbolic => Geometry::Hyperbolic,
            Arm::Glpm => Geometry::Euclidean,
        }
    }
}

fn band_of(bands: &[(f64, f64)], density: f64) -> Option<usize> {
    bands.iter().position(|&(lo, hi)| density > lo && density <= hi)
}

fn draw(cfg: &StudyConfig, arm: Arm, n: usize, attempt: usize, rng: &mut ChaCha8Rng) -> Result<Network> {
    match arm {
        Arm::Glpm => {
            let tau = cfg.tau_grid[attempt % cfg.tau_grid.len()];
            Ok(sample_glpm(n, &GlpmParams::new(cfg.gamma, cfg.phi, tau)?, rng)?.0)
        }
        Arm::Hyperbolic => {
            let rho = cfg.hyperbolic_density_grid[attempt % cfg.hyperbolic_density_grid.len()];
            let radius = radius_for_degree(n, rho * (n as f64 - 1.0))?;
            Ok(sample_hyperbolic(n, &HyperbolicParams::new(radius)?, rng)?.0)
        }
    }
}

/// Connected networks of one arm at one size, bucketed by density band.
/// Each network carries the attempt index it came from.
fn generate_arm(cfg: &StudyConfig, arm: Arm, n: usize) -> Result<Vec<Vec<(usize, Network)>>> {
    let arm_id = arm as u64;
    let mut buckets: Vec<Vec<(usize, Network)>> = vec![Vec::new(); cfg.bands.len()];
    let full = |b: &Vec<Vec<(usize, Network)>>| b.iter().all(|v| v.len() >= cfg.replicates);
    let mut next = 0;
    while next < cfg.max_attempts && !full(&buckets) {
        let chunk = 64.min(cfg.max_attempts - next);
        let drawn: Vec<Result<Option<(usize, Network)>>> = (next..next + chunk)
            .into_par_iter()
            .map(|a| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[n as u64, arm_id, a as u64]));
                let net = draw(cfg, arm, n, a, &mut rng)?;
                Ok(is_connected(&net).then_some((a, net)))
            })
            .collect();
        next += chunk;
        for d in drawn {
            if let Some((a, net)) = d? {
                if let Some(b) = band_of(&cfg.bands, net.density()) {
                    if buckets[b].len() < cfg.replicates {
                        buckets[b].push((a, net));
                    }
                }
            }
        }
    }
    Ok(buckets)
}

/// `Some(correct)` for a decision, `None` for an expected failure.
fn classify(cfg: &StudyConfig, arm: Arm, n: usize, attempt: usize, net: &Network, method: Method) -> Result<Option<bool>> {
    let opts = TestOptions::default().with_replicates(cfg.replicates_for(method).max(1)).with_alpha(cfg.alpha);
    let seed = derive_seed(cfg.seed, &[n as u64, arm as u64, attempt as u64, 100 + method.number() as u64]);
    match run_method(method, net, &opts, &mut ChaCha8Rng::seed_from_u64(seed)) {
        Ok(r) => Ok(Some(r.decision.tag == arm.truth())),
        Err(Error::CalibrationInfeasible(_) | Error::TooFewReplicates { .. } | Error::DegenerateRow { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn run_simulation_study(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for &n in &cfg.sizes {
        let hyp = generate_arm(cfg, Arm::Hyperbolic, n)?;
        let glpm = generate_arm(cfg, Arm::Glpm, n)?;

        let mut jobs = Vec::new();
        for (b, (hb, gb)) in hyp.iter().zip(&glpm).enumerate() {
            for (mi, &m) in cfg.methods.iter().enumerate() {
                jobs.extend(hb.iter().map(|(a, net)| (b, mi, m, Arm::Hyperbolic, *a, net)));
                jobs.extend(gb.iter().map(|(a, net)| (b, mi, m, Arm::Glpm, *a, net)));
            }
        }
        let outcomes: Vec<Result<Option<bool>>> = jobs
            .par_iter()
            .map(|&(_, _, m, arm, a, net)| classify(cfg, arm, n, a, net, m))
            .collect();

        let mut size_cells: Vec<StudyCell> = Vec::new();
        for (b, &band) in cfg.bands.iter().enumerate() {
            for &m in &cfg.methods {
                size_cells.push(StudyCell {
                    n,
                    band,
                    method: m,
                    available: !hyp[b].is_empty() && !glpm[b].is_empty(),
                    hyperbolic_generated: hyp[b].len(),
                    glpm_generated: glpm[b].len(),
                    hyperbolic_total: 0,
                    hyperbolic_correct: 0,
                    glpm_total: 0,
                    glpm_correct: 0,
                    failed: 0,
                });
            }
        }
        for (&(b, mi, _, arm, _, _), out) in jobs.iter().zip(outcomes) {
            let cell = &mut size_cells[b * cfg.methods.len() + mi];
            match (out?, arm) {
                (None, _) => cell.failed += 1,
                (Some(ok), Arm::Hyperbolic) => {
                    cell.hyperbolic_total += 1;
                    cell.hyperbolic_correct += ok as usize;
                }
                (Some(ok), Arm::Glpm) => {
                    cell.glpm_total += 1;
                    cell.glpm_correct += ok as usize;
                }
            }
        }
        cells.extend(size_cells);
    }
    Ok(StudyReport { config: cfg.clone(), cells })
}
