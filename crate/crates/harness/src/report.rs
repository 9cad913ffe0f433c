//! Trial records, aggregates and their CSV/JSON renderings.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::experiment::ExperimentConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub iterations: u64,
    /// Objective evaluations: iterations plus `|S_0|`.
    pub evals: u64,
    pub success: bool,
    pub value: Option<i64>,
    pub bound: f64,
    /// `iterations / bound`.
    pub ratio: Option<f64>,
    pub wallclock_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// 95% Wilson interval for the success probability.
    pub success_ci: (f64, f64),
    pub mean_iterations: f64,
    pub median_iterations: f64,
    /// Over successful trials.
    pub mean_ratio: Option<f64>,
    pub mean_value: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub engine_version: String,
    pub config: ExperimentConfig,
    pub aggregate: Aggregate,
    pub records: Vec<TrialRecord>,
}

/// Wilson score interval at `z`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // the closed form lands a rounding error away from the exact endpoints
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (count > 0).then(|| sum / count as f64)
}

pub fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

pub fn aggregate(records: &[TrialRecord]) -> Aggregate {
    let trials = records.len();
    let successes = records.iter().filter(|r| r.success).count();
    let mut iterations: Vec<f64> = records.iter().map(|r| r.iterations as f64).collect();
    Aggregate {
        trials,
        successes,
        success_rate: if trials == 0 {
            0.0
        } else {
            successes as f64 / trials as f64
        },
        success_ci: wilson_interval(successes, trials, 1.96),
        mean_iterations: mean(iterations.iter().copied()).unwrap_or(0.0),
        median_iterations: median(&mut iterations),
        mean_ratio: mean(records.iter().filter(|r| r.success).filter_map(|r| r.ratio)),
        mean_value: mean(records.iter().filter_map(|r| r.value.map(|v| v as f64))),
    }
}

pub fn build_report(config: &ExperimentConfig, records: Vec<TrialRecord>) -> Report {
    Report {
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        aggregate: aggregate(&records),
        records,
    }
}

pub fn render_csv(records: &[TrialRecord]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for r in records {
        writer
            .serialize(r)
            .map_err(|e| HarnessError::Validation(format!("csv: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| HarnessError::Validation(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Renders `report` in `format`. Records must be non-empty.
pub fn emit_report(report: &Report, format: Format) -> Result<String> {
    if report.records.is_empty() {
        return Err(HarnessError::Validation(
            "no trial records to report".into(),
        ));
    }
    match format {
        Format::Csv => render_csv(&report.records),
        Format::Json => Ok(render_json(report)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
        let (lo, hi) = wilson_interval(100, 100, 1.96);
        assert!(lo > 0.96 && hi == 1.0);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
