use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ScenarioConfig;
use super::trial::{run_trial, TrialRecord};
use crate::metrics::AdvantageDb;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub delta_db: AdvantageDb,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub num_trials: usize,
    /// Trials that produced a metric and enter the CDF.
    pub num_samples: usize,
    /// Trials that failed and are left out of the CDF.
    pub num_excluded: usize,
    pub median_delta_db: Option<AdvantageDb>,
    /// Fraction of samples with `delta > 0 dB`; infinite values count.
    pub fraction_positive: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub tool_version: String,
    pub config: ScenarioConfig,
    pub trials: Vec<TrialRecord>,
    pub cdf: Vec<CdfPoint>,
    pub summary: CampaignSummary,
}

/// Runs `cfg.num_trials` trials in parallel; records come back in index
/// order whatever the scheduling.
pub fn run_campaign(cfg: &ScenarioConfig) -> CampaignResult {
    let trials: Vec<TrialRecord> = (0..cfg.num_trials as u64).into_par_iter().map(|i| run_trial(cfg, i)).collect();
    assemble(cfg, trials)
}

pub fn assemble(cfg: &ScenarioConfig, mut trials: Vec<TrialRecord>) -> CampaignResult {
    trials.sort_by_key(|t| t.trial_index);
    let mut samples: Vec<AdvantageDb> = trials.iter().filter_map(|t| t.metrics.as_ref().map(|m| m.delta_db)).collect();
    samples.sort_by(|a, b| a.total_cmp(b));
    let n = samples.len();
    let cdf = samples
        .iter()
        .enumerate()
        .map(|(k, &delta_db)| CdfPoint { delta_db, probability: (k + 1) as f64 / n as f64 })
        .collect();
    let summary = CampaignSummary {
        num_trials: trials.len(),
        num_samples: n,
        num_excluded: trials.len() - n,
        median_delta_db: median(&samples),
        fraction_positive: if n == 0 { 0.0 } else { samples.iter().filter(|d| d.is_positive()).count() as f64 / n as f64 },
    };
    CampaignResult { tool_version: TOOL_VERSION.to_string(), config: cfg.clone(), trials, cdf, summary }
}

/// Median of sorted samples; the mean of the middle pair for even counts.
pub fn median(sorted: &[AdvantageDb]) -> Option<AdvantageDb> {
    let n = sorted.len();
    if n == 0 {
        return None;
    }
    if n % 2 == 1 {
        return Some(sorted[n / 2]);
    }
    match (sorted[n / 2 - 1], sorted[n / 2]) {
        (AdvantageDb::Finite(a), AdvantageDb::Finite(b)) => Some(AdvantageDb::Finite(0.5 * (a + b))),
        _ => Some(AdvantageDb::Infinite),
    }
}
