use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use crate::bounds::{
    best_bound_for_profile, verify_chain_for_profile, BoundOptions, BoundReport, CoherenceProfile,
    REPORT_CSV_HEADER,
};
use crate::qmatrix::ValidationReport;
use crate::sampling::RNG_ALGORITHM;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sample: u64,
    pub report: BoundReport,
    /// `None` when the chain was not checked (disabled, or no admissible
    /// parameters).
    pub chain_passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub sampler: String,
    pub n_qubits: usize,
    pub samples: u64,
    pub seed: u64,
    pub rng: String,
    pub total: u64,
    pub conditions_satisfied: u64,
    pub violations: u64,
    pub chain_checked: u64,
    pub chain_failures: u64,
    pub min_gap: f64,
    pub mean_gap: f64,
    pub tightness_wins: u64,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.chain_failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub summary: SweepSummary,
    pub rows: Vec<SweepRow>,
}

fn sample_rows(
    config: &ExperimentConfig,
    opts: &BoundOptions,
    index: u64,
) -> Result<Vec<SweepRow>> {
    let state = config.sampler_spec().sample(index)?;
    if let Some(tol) = config.tol_phys {
        let report = ValidationReport::of(state.matrix(), tol);
        if !report.passed {
            return Err(Error::Validation(format!("sample {index}: {report}")));
        }
    }
    let raw = CoherenceProfile::from_state(&state, 1.0)?;
    let profiles = config
        .betas
        .iter()
        .map(|&b| raw.rebased(b))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(config.alphas.len() * profiles.len());
    for &alpha in &config.alphas {
        for profile in &profiles {
            let report = best_bound_for_profile(profile, alpha, opts)?;
            let chain_passed = match report.params() {
                Some(params) if config.check_chain => Some(
                    verify_chain_for_profile(profile, &params, opts)?
                        .iter()
                        .all(|s| s.passed),
                ),
                _ => None,
            };
            rows.push(SweepRow {
                sample: index,
                report,
                chain_passed,
            });
        }
    }
    Ok(rows)
}

/// Runs every sample on a worker pool; rows come back ordered by sample
/// index, then α, then β, independent of scheduling.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let opts = BoundOptions::with_tol(config.tol_ineq());
    let work = || {
        (0..config.samples)
            .into_par_iter()
            .map(|i| sample_rows(config, &opts, i))
            .collect::<Result<Vec<_>>>()
    };
    let per_sample = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::arg(format!("worker pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let rows: Vec<SweepRow> = per_sample.into_iter().flatten().collect();
    let summary = summarize(config, &rows, opts.tol_ineq);
    Ok(SweepOutcome { summary, rows })
}

fn summarize(config: &ExperimentConfig, rows: &[SweepRow], tol: f64) -> SweepSummary {
    let count = |pred: &dyn Fn(&SweepRow) -> bool| rows.iter().filter(|r| pred(r)).count() as u64;
    let gaps = rows.iter().map(|r| r.report.gap);
    SweepSummary {
        sampler: config.sampler.name().to_owned(),
        n_qubits: config.n_qubits,
        samples: config.samples,
        seed: config.seed,
        rng: RNG_ALGORITHM.to_owned(),
        total: rows.len() as u64,
        conditions_satisfied: count(&|r| r.report.conditions_met),
        violations: count(&|r| r.report.is_violation(tol)),
        chain_checked: count(&|r| r.chain_passed.is_some()),
        chain_failures: count(&|r| r.chain_passed == Some(false)),
        min_gap: gaps.clone().fold(f64::INFINITY, f64::min),
        mean_gap: gaps.sum::<f64>() / rows.len().max(1) as f64,
        tightness_wins: count(&|r| r.report.rhs_theorem > r.report.rhs_baseline_k1 + tol),
    }
}

/// `sample`, the report columns, then `chain_passed` (empty when unchecked).
pub fn csv_header() -> Vec<&'static str> {
    std::iter::once("sample")
        .chain(REPORT_CSV_HEADER)
        .chain(std::iter::once("chain_passed"))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(csv_header()).map_err(csv_err)?;
    for row in rows {
        let mut record = vec![row.sample.to_string()];
        record.extend(row.report.csv_fields());
        record.push(row.chain_passed.map(|b| b.to_string()).unwrap_or_default());
        w.write_record(&record).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(rows: &[SweepRow], path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(rows, std::io::BufWriter::new(file))
}
