use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::estimate::{estimate_phi_integral, sample_root_counts, Estimate};
use super::sampling::{ModelKind, Region, SamplingModel};
use super::ExperimentError;
use crate::numtheory::is_prime;
use crate::padic::DEFAULT_PRECISION;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Two-sided gate on `|z|` used by suites and the command line.
pub const Z_GATE: f64 = 4.0;

/// One line of a report file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub quantity: String,
    pub n: u32,
    pub p: u64,
    pub model: ModelKind,
    pub region: Region,
    pub samples: u64,
    pub mean: f64,
    pub stderr: f64,
    pub target_num: String,
    pub target_den: String,
    pub z: Option<f64>,
    pub inconclusive: u64,
    pub seed: u64,
    pub version: String,
    pub precision: u32,
    pub rejected: u64,
    pub timestamp: String,
}

impl ExperimentReport {
    pub fn new(quantity: &str, model: &SamplingModel, region: Region, estimate: &Estimate, seed: u64) -> Self {
        ExperimentReport {
            quantity: quantity.to_string(),
            n: model.n,
            p: model.p,
            model: model.kind,
            region,
            samples: estimate.samples,
            mean: estimate.mean,
            stderr: estimate.stderr,
            target_num: estimate.target.numer().to_string(),
            target_den: estimate.target.denom().to_string(),
            z: estimate.z,
            inconclusive: estimate.inconclusive,
            seed,
            version: VERSION.to_string(),
            precision: model.precision,
            rejected: estimate.rejected,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn passes(&self, sigmas: f64) -> bool {
        self.z.is_some_and(|z| z.abs() <= sigmas)
    }

    pub fn target_f64(&self) -> f64 {
        let num: f64 = self.target_num.parse().unwrap_or(f64::NAN);
        let den: f64 = self.target_den.parse().unwrap_or(f64::NAN);
        num / den
    }

    pub fn to_json_line(&self) -> Result<String, ExperimentError> {
        serde_json::to_string(self).map_err(|e| ExperimentError::Format(e.to_string()))
    }

    pub fn from_json_line(line: &str) -> Result<Self, ExperimentError> {
        serde_json::from_str(line).map_err(|e| ExperimentError::Format(e.to_string()))
    }

    /// The report with its timestamp blanked, for reproducibility checks.
    pub fn without_timestamp(&self) -> Self {
        ExperimentReport {
            timestamp: String::new(),
            ..self.clone()
        }
    }
}

pub fn write_jsonl(path: &Path, reports: &[ExperimentReport]) -> Result<(), ExperimentError> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in reports {
        writeln!(w, "{}", r.to_json_line()?)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_jsonl(path: &Path) -> Result<Vec<ExperimentReport>, ExperimentError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(ExperimentReport::from_json_line(&line)?);
        }
    }
    Ok(out)
}

pub fn write_csv<W: Write>(w: W, reports: &[ExperimentReport]) -> Result<(), ExperimentError> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in reports {
        wtr.serialize(r).map_err(|e| ExperimentError::Format(e.to_string()))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(r: R) -> Result<Vec<ExperimentReport>, ExperimentError> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(|e| ExperimentError::Format(e.to_string())))
        .collect()
}

/// Parameters of a Monte Carlo suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n: u32,
    pub p: u64,
    pub samples: u64,
    pub seed: u64,
    pub precision: u32,
    /// JSON-lines file the reports are written to, if any.
    pub output: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn new(n: u32, p: u64, samples: u64, seed: u64) -> Self {
        SuiteConfig {
            n,
            p,
            samples,
            seed,
            precision: DEFAULT_PRECISION,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.n == 0 {
            return Err(ExperimentError::InvalidConfig("n must be positive".into()));
        }
        if self.samples == 0 {
            return Err(ExperimentError::InvalidConfig("samples must be positive".into()));
        }
        if !is_prime(self.p) {
            return Err(ExperimentError::InvalidConfig(format!(
                "p must be prime, got {}",
                self.p
            )));
        }
        if self.precision < 4 {
            return Err(ExperimentError::InvalidConfig("precision must be at least 4".into()));
        }
        Ok(())
    }

    pub fn model(&self, kind: ModelKind) -> SamplingModel {
        SamplingModel::new(kind, self.n, self.p).with_precision(self.precision)
    }
}

/// Root expectations under one model, for each region it has a target in.
pub fn root_reports(config: &SuiteConfig, kind: ModelKind) -> Result<Vec<ExperimentReport>, ExperimentError> {
    config.validate()?;
    let model = config.model(kind);
    let regions: &[Region] = match kind {
        ModelKind::Haar => &[Region::Integers, Region::MaximalIdeal, Region::All],
        ModelKind::Monic => &[Region::Integers, Region::All],
        ModelKind::MonicXn => &[Region::MaximalIdeal, Region::All],
    };
    let samples = sample_root_counts(&model, config.samples, config.seed)?;
    regions
        .iter()
        .map(|&r| {
            let est = samples.estimate(r)?;
            Ok(ExperimentReport::new("root_expectation", &model, r, &est, config.seed))
        })
        .collect()
}

/// Integrals of `phi` over `O_K` and the maximal ideal.
pub fn phi_reports(config: &SuiteConfig, regions: &[Region]) -> Result<Vec<ExperimentReport>, ExperimentError> {
    config.validate()?;
    let model = config.model(ModelKind::Haar);
    let ctx = model.context()?;
    regions
        .iter()
        .map(|&r| {
            let est = estimate_phi_integral(&ctx, r, config.samples, config.seed)?;
            Ok(ExperimentReport::new("phi_integral", &model, r, &est, config.seed))
        })
        .collect()
}

/// The default suite: root expectations under all three models and both
/// `phi` integrals, nine reports in a fixed order.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<ExperimentReport>, ExperimentError> {
    config.validate()?;
    let mut reports = Vec::new();
    for kind in ModelKind::ALL {
        reports.extend(root_reports(config, kind)?);
    }
    reports.extend(phi_reports(config, &[Region::Integers, Region::MaximalIdeal])?);
    if let Some(path) = &config.output {
        write_jsonl(path, &reports)?;
    }
    Ok(reports)
}
