//! Versioned JSON reports, CSV plot data and atomic file output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::embedding::{PairConvention, StressReport};
use crate::error::{Error, Result};
use crate::genmodel::GlpmParams;
use crate::inference::{Method, TestResult};
use crate::study::StudyReport;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stresses {
    pub euclidean: f64,
    pub hyperbolic: f64,
    /// Whether the stress sums run over ordered or unordered pairs.
    pub pair_convention: PairConvention,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplicateCounts {
    pub requested: usize,
    pub used: usize,
    pub discarded: usize,
}

/// One method's outcome. `decision` is `"hyperbolic"`, `"euclidean"` or
/// `"n/a"`; the last comes with a `note`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: Method,
    pub observed_difference: f64,
    pub stresses: Stresses,
    pub p_value: Option<f64>,
    pub alpha: f64,
    pub replicates: ReplicateCounts,
    pub decision: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<GlpmParams>,
    #[serde(default)]
    pub null_samples: Vec<f64>,
}

fn stresses(s: &StressReport) -> Stresses {
    Stresses { euclidean: s.stress_euclidean, hyperbolic: s.stress_hyperbolic, pair_convention: s.pair_convention }
}

impl MethodReport {
    pub fn from_result(r: &TestResult) -> Self {
        Self {
            method: r.method,
            observed_difference: r.observed_diff,
            stresses: stresses(&r.stresses),
            p_value: (r.method != Method::Stress).then_some(r.p_value),
            alpha: r.alpha,
            replicates: ReplicateCounts {
                requested: r.replicates_requested,
                used: r.replicates_used,
                discarded: r.replicates_discarded,
            },
            decision: r.decision.tag.name().to_string(),
            note: None,
            calibration: r.calibration,
            null_samples: r.null_samples.clone(),
        }
    }

    /// A method that could not be run on this network.
    pub fn not_available(method: Method, observed: &StressReport, alpha: f64, requested: usize, note: &str) -> Self {
        Self {
            method,
            observed_difference: observed.difference,
            stresses: stresses(observed),
            p_value: None,
            alpha,
            replicates: ReplicateCounts { requested, used: 0, discarded: 0 },
            decision: "n/a".into(),
            note: Some(note.into()),
            calibration: None,
            null_samples: Vec::new(),
        }
    }

    /// One-line human-readable verdict.
    pub fn verdict(&self) -> String {
        let head = format!("Method {} ({})", self.method.number(), self.method.name());
        if let Some(note) = &self.note {
            return format!("{head}: N/A ({note})");
        }
        match self.p_value {
            None => format!("{head}: difference = {:.4}, {}", self.observed_difference, self.decision),
            Some(p) => format!(
                "{head}: difference = {:.4}, p = {:.4} ({} of {} replicates, {} discarded), {}",
                self.observed_difference,
                p,
                self.replicates.used,
                self.replicates.requested,
                self.replicates.discarded,
                self.decision
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectReport {
    pub version: u32,
    pub kind: String,
    pub input: String,
    pub seed: u64,
    pub runtime_ms: u64,
    pub methods: Vec<MethodReport>,
}

impl DetectReport {
    pub fn new(input: &str, seed: u64, methods: Vec<MethodReport>, runtime_ms: u64) -> Self {
        Self { version: REPORT_VERSION, kind: "detect".into(), input: input.into(), seed, runtime_ms, methods }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyFile {
    pub version: u32,
    pub kind: String,
    pub seed: u64,
    pub runtime_ms: u64,
    pub study: StudyReport,
}

impl StudyFile {
    pub fn new(study: StudyReport, runtime_ms: u64) -> Self {
        Self { version: REPORT_VERSION, kind: "study".into(), seed: study.config.seed, runtime_ms, study }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path.file_name().ok_or_else(|| Error::Io(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

/// Null samples and the observed statistic, one row each:
/// `method,kind,value` with `kind` either `null` or `observed`.
pub fn test_result_csv(results: &[MethodReport]) -> String {
    let mut s = String::from("method,kind,value\n");
    for r in results {
        for v in &r.null_samples {
            let _ = writeln!(s, "{},null,{v}", r.method.name());
        }
        let _ = writeln!(s, "{},observed,{}", r.method.name(), r.observed_difference);
    }
    s
}

/// One row per `(size, band, method)` cell.
pub fn study_csv(report: &StudyReport) -> String {
    let mut s = String::from(
        "n,band_low,band_high,method,available,hyperbolic_correct,hyperbolic_total,sensitivity,\
         glpm_correct,glpm_total,specificity,failed\n",
    );
    let opt = |v: Option<f64>| v.map_or_else(String::new, |v| v.to_string());
    for c in &report.cells {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            c.n,
            c.band.0,
            c.band.1,
            c.method.name(),
            c.available,
            c.hyperbolic_correct,
            c.hyperbolic_total,
            opt(c.sensitivity()),
            c.glpm_correct,
            c.glpm_total,
            opt(c.specificity()),
            c.failed
        );
    }
    s
}

/// Turns a detect or study JSON report into CSV.
pub fn plot_data_from_json(text: &str) -> Result<String> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Io(format!("bad report: {e}")))?;
    match value.get("kind").and_then(|k| k.as_str()) {
        Some("detect") => {
            let r: DetectReport = serde_json::from_value(value).map_err(|e| Error::Io(format!("bad report: {e}")))?;
            Ok(test_result_csv(&r.methods))
        }
        Some("study") => {
            let r: StudyFile = serde_json::from_value(value).map_err(|e| Error::Io(format!("bad report: {e}")))?;
            Ok(study_csv(&r.study))
        }
        other => Err(Error::Io(format!("unknown report kind {other:?}"))),
    }
}
