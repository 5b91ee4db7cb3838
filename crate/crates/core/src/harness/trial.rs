use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::config::{ChannelModel, ScenarioConfig};
use crate::channel::{los_steering, sample_stochastic_channel, ChannelVector, Placement};
use crate::estimate::{ls_estimate, villain_estimate, ChannelEstimate, EstimateError, Estimator};
use crate::metrics::{advantage, delivered_power_theory, AdvantageDb, MetricsError};
use crate::numerics::{dot_t, pinv_row, C64};
use crate::pilot::{gen_attack, gen_pilot, synthesize_pilot_rx, AttackSpec, PilotError, PilotPhase};
use crate::precode::{mrt, PrecodeError, Precoder};
use crate::rng::{substream, Role};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrialError {
    #[error(transparent)]
    Pilot(#[from] PilotError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error(transparent)]
    Precode(#[from] PrecodeError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Per-trial outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialMetrics {
    pub delta_db: AdvantageDb,
    pub ue_power: f64,
    pub ed_power: f64,
    /// `P ||(I - j j^+) h||^2`, the best zero-leakage UE power.
    pub delivered_power_theory: f64,
    /// `z^T (s^T)^+` for LS under Gaussian jamming.
    pub ls_omega: Option<C64>,
    pub degenerate_flag: bool,
    pub residual_sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metrics: Option<TrialMetrics>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// Everything a trial produced, for callers that need more than metrics.
#[derive(Debug, Clone)]
pub struct TrialArtifacts {
    pub h: ChannelVector,
    pub j: ChannelVector,
    pub ue_placement: Option<Placement>,
    pub ed_placement: Option<Placement>,
    pub phase: PilotPhase,
    pub estimate: ChannelEstimate,
    pub precoder: Precoder,
    pub metrics: TrialMetrics,
}

pub fn draw_channels(cfg: &ScenarioConfig, trial_index: u64) -> (ChannelVector, ChannelVector, Option<Placement>, Option<Placement>) {
    match &cfg.channel {
        ChannelModel::Los { ue_angle_deg, ed_angle_deg } => {
            (los_steering(&cfg.geometry, *ue_angle_deg), los_steering(&cfg.geometry, *ed_angle_deg), None, None)
        }
        ChannelModel::Stochastic(model) => {
            let mut ue_rng = substream(cfg.master_seed, trial_index, Role::UeChannel);
            let mut ed_rng = substream(cfg.master_seed, trial_index, Role::EdChannel);
            let (h, pu) = sample_stochastic_channel(model, &cfg.geometry, &mut ue_rng);
            let (j, pe) = sample_stochastic_channel(model, &cfg.geometry, &mut ed_rng);
            (h, j, Some(pu), Some(pe))
        }
    }
}

pub fn simulate_trial(cfg: &ScenarioConfig, trial_index: u64) -> Result<TrialArtifacts, TrialError> {
    let seed = cfg.master_seed;
    let (h, j, ue_placement, ed_placement) = draw_channels(cfg, trial_index);

    let pilot = gen_pilot(cfg.pilot.length, cfg.pilot.symbol_energy, &mut substream(seed, trial_index, Role::Pilot))?;
    let spec = cfg.attack_spec();
    let attack = gen_attack(&spec, cfg.pilot.length, &pilot, &mut substream(seed, trial_index, Role::Attack))?;
    let phase = synthesize_pilot_rx(
        &h,
        &j,
        &pilot,
        &attack,
        cfg.bs_noise_var(),
        &mut substream(seed, trial_index, Role::BsNoise),
    )?;

    let estimate = match cfg.estimator {
        Estimator::Ls => ls_estimate(&phase, &cfg.tolerance)?,
        Estimator::Villain => villain_estimate(&phase, &cfg.tolerance)?,
    };
    let precoder = mrt(&estimate, cfg.power_budget, &cfg.tolerance)?;
    let report = advantage(&h, &j, &precoder)?;

    let ls_omega = match (cfg.estimator, spec) {
        (Estimator::Ls, AttackSpec::GaussianJam { .. }) => {
            Some(dot_t(&attack, &pinv_row(&pilot.symbols, &cfg.tolerance).map_err(EstimateError::from)?))
        }
        _ => None,
    };
    let metrics = TrialMetrics {
        delta_db: report.delta_db,
        ue_power: report.ue_power,
        ed_power: report.ed_power,
        delivered_power_theory: delivered_power_theory(&h, &j, cfg.power_budget),
        ls_omega,
        degenerate_flag: estimate.degenerate,
        residual_sigma: estimate.residual_sigma,
    };
    Ok(TrialArtifacts { h, j, ue_placement, ed_placement, phase, estimate, precoder, metrics })
}

/// Runs one trial; errors are recorded rather than propagated.
pub fn run_trial(cfg: &ScenarioConfig, trial_index: u64) -> TrialRecord {
    match simulate_trial(cfg, trial_index) {
        Ok(a) => TrialRecord { trial_index, metrics: Some(a.metrics), error: None },
        Err(e) => TrialRecord { trial_index, metrics: None, error: Some(e.to_string()) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::AttackConfig;

    #[test]
    fn passive_los_ls_reference_value() {
        let cfg = ScenarioConfig::los_reference(AttackConfig::Silent, Estimator::Ls);
        let m = run_trial(&cfg, 0).metrics.unwrap();
        let d = m.delta_db.finite().unwrap();
        assert!((d - 16.7).abs() < 0.1, "delta {d}");
        assert!(m.ls_omega.is_none());
    }

    #[test]
    fn active_los_villain_is_float_limited() {
        let cfg = ScenarioConfig::los_reference(AttackConfig::GaussianJam { jam_power_over_es_db: 25.0 }, Estimator::Villain);
        for i in 0..20 {
            let m = run_trial(&cfg, i).metrics.unwrap();
            assert!(m.delta_db.at_least(150.0), "trial {i}: {}", m.delta_db);
            assert!(!m.degenerate_flag);
        }
    }

    #[test]
    fn trial_is_reproducible_byte_for_byte() {
        let cfg = ScenarioConfig::stochastic_reference(15.0, Estimator::Villain);
        let a = serde_json::to_vec(&run_trial(&cfg, 42)).unwrap();
        let b = serde_json::to_vec(&run_trial(&cfg, 42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ls_under_jamming_records_omega() {
        let cfg = ScenarioConfig::los_reference(AttackConfig::GaussianJam { jam_power_over_es_db: 25.0 }, Estimator::Ls);
        assert!(run_trial(&cfg, 0).metrics.unwrap().ls_omega.is_some());
    }

    #[test]
    fn failing_trials_are_recorded() {
        // A single-antenna VILLAIN estimate is identically zero.
        let mut cfg = ScenarioConfig::los_reference(AttackConfig::GaussianJam { jam_power_over_es_db: 10.0 }, Estimator::Villain);
        cfg.geometry.num_antennas = 1;
        let rec = run_trial(&cfg, 0);
        assert!(rec.metrics.is_none());
        assert!(rec.error.unwrap().contains("too small"));
    }
}
