use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{StochasticChannelConfig, UlaGeometry};
use crate::estimate::Estimator;
use crate::numerics::ToleranceConfig;
use crate::pilot::AttackSpec;
use crate::precode::Constellation;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PilotConfig {
    pub length: usize,
    #[serde(default = "unit")]
    pub symbol_energy: f64,
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AttackConfig {
    Silent,
    GaussianJam { jam_power_over_es_db: f64 },
    PilotReplay { replay_scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    /// `Es / N_bs` in dB; absent means a noiseless BS.
    pub snr_db: Option<f64>,
    pub ue_noise_var: f64,
    pub ed_noise_var: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ChannelModel {
    Los { ue_angle_deg: f64, ed_angle_deg: f64 },
    Stochastic(StochasticChannelConfig),
}

/// Full parameterization of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub geometry: UlaGeometry,
    pub pilot: PilotConfig,
    #[serde(default = "unit")]
    pub power_budget: f64,
    pub attack: AttackConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
    pub channel: ChannelModel,
    pub estimator: Estimator,
    #[serde(default)]
    pub constellation: Constellation,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "one_trial")]
    pub num_trials: usize,
    #[serde(default)]
    pub tolerance: ToleranceConfig,
}

fn one_trial() -> usize {
    1
}

pub fn db_to_linear(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

impl ScenarioConfig {
    /// Noiseless LoS scene with the UE at 70° and the eavesdropper at 20°
    /// in front of an 8-antenna half-wavelength array.
    pub fn los_reference(attack: AttackConfig, estimator: Estimator) -> Self {
        Self {
            geometry: UlaGeometry::half_wavelength(8),
            pilot: PilotConfig { length: 8, symbol_energy: 1.0 },
            power_budget: 1.0,
            attack,
            noise: NoiseConfig::default(),
            channel: ChannelModel::Los { ue_angle_deg: 70.0, ed_angle_deg: 20.0 },
            estimator,
            constellation: Constellation::Qpsk,
            master_seed: 0,
            num_trials: 1,
            tolerance: ToleranceConfig::default(),
        }
    }

    /// Randomized-placement campaign: 16 antennas, length-4 pilots, a
    /// jammer 30 dB above the UE, 10^4 trials.
    pub fn stochastic_reference(snr_db: f64, estimator: Estimator) -> Self {
        Self {
            geometry: UlaGeometry::half_wavelength(16),
            pilot: PilotConfig { length: 4, symbol_energy: 1.0 },
            power_budget: 1.0,
            attack: AttackConfig::GaussianJam { jam_power_over_es_db: 30.0 },
            noise: NoiseConfig { snr_db: Some(snr_db), ue_noise_var: 0.0, ed_noise_var: 0.0 },
            channel: ChannelModel::Stochastic(StochasticChannelConfig::default()),
            estimator,
            constellation: Constellation::Qpsk,
            master_seed: 0,
            num_trials: 10_000,
            tolerance: ToleranceConfig::default(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: String| Err(ConfigError::Invalid(msg));
        self.geometry.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.pilot.length == 0 {
            return invalid("pilot length must be at least 1".into());
        }
        if !(self.pilot.symbol_energy > 0.0 && self.pilot.symbol_energy.is_finite()) {
            return invalid(format!("symbol energy must be positive, got {}", self.pilot.symbol_energy));
        }
        if !(self.power_budget > 0.0 && self.power_budget.is_finite()) {
            return invalid(format!("power budget must be positive, got {}", self.power_budget));
        }
        self.attack_spec().validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if let Some(snr) = self.noise.snr_db {
            if !snr.is_finite() {
                return invalid("snr_db must be finite".into());
            }
        }
        if !(self.noise.ue_noise_var >= 0.0 && self.noise.ed_noise_var >= 0.0) {
            return invalid("downlink noise variances must be nonnegative".into());
        }
        match &self.channel {
            ChannelModel::Los { ue_angle_deg, ed_angle_deg } => {
                if !(ue_angle_deg.is_finite() && ed_angle_deg.is_finite()) {
                    return invalid("angles must be finite".into());
                }
            }
            ChannelModel::Stochastic(s) => s.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?,
        }
        if self.num_trials == 0 {
            return invalid("num_trials must be at least 1".into());
        }
        if !(self.tolerance.rel_rank_tol >= 0.0) {
            return invalid("rel_rank_tol must be nonnegative".into());
        }
        Ok(())
    }

    /// Non-fatal remarks about the configuration.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.estimator == Estimator::Villain && self.pilot.length == 1 {
            out.push("VILLAIN with a length-1 pilot has no redundancy; the zero-leakage guarantee needs T > 1".into());
        }
        if self.estimator == Estimator::Villain && self.geometry.num_antennas == 1 {
            out.push("VILLAIN with a single antenna always yields a zero estimate".into());
        }
        out
    }

    pub fn attack_spec(&self) -> AttackSpec {
        match self.attack {
            AttackConfig::Silent => AttackSpec::Silent,
            AttackConfig::GaussianJam { jam_power_over_es_db } => {
                AttackSpec::GaussianJam { jam_power: self.pilot.symbol_energy * db_to_linear(jam_power_over_es_db) }
            }
            AttackConfig::PilotReplay { replay_scale } => AttackSpec::PilotReplay { replay_scale },
        }
    }

    /// `N_bs = Es / SNR`.
    pub fn bs_noise_var(&self) -> f64 {
        match self.noise.snr_db {
            Some(snr) => self.pilot.symbol_energy / db_to_linear(snr),
            None => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_layout() {
        let text = r#"{
            "geometry": {"num_antennas": 8},
            "pilot": {"length": 8},
            "attack": {"kind": "gaussian_jam", "jam_power_over_es_db": 25.0},
            "channel": {"model": "los", "ue_angle_deg": 70.0, "ed_angle_deg": 20.0},
            "estimator": "villain",
            "master_seed": 3
        }"#;
        let cfg = ScenarioConfig::from_json_str(text).unwrap();
        assert_eq!(cfg.geometry.spacing_wavelengths, 0.5);
        assert_eq!(cfg.num_trials, 1);
        assert_eq!(cfg.bs_noise_var(), 0.0);
        match cfg.attack_spec() {
            AttackSpec::GaussianJam { jam_power } => assert!((jam_power - 10f64.powf(2.5)).abs() < 1e-9),
            other => panic!("unexpected attack {other:?}"),
        }
    }

    #[test]
    fn stochastic_channel_fields_default() {
        let text = r#"{
            "geometry": {"num_antennas": 16},
            "pilot": {"length": 4},
            "attack": {"kind": "silent"},
            "noise": {"snr_db": 15.0},
            "channel": {"model": "stochastic", "num_paths": 4},
            "estimator": "ls"
        }"#;
        let cfg = ScenarioConfig::from_json_str(text).unwrap();
        let ChannelModel::Stochastic(s) = cfg.channel else { panic!() };
        assert_eq!(s.num_paths, 4);
        assert_eq!(s.dist_max_m, 100.0);
        assert!((cfg.bs_noise_var() - 10f64.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_values() {
        let mut cfg = ScenarioConfig::los_reference(AttackConfig::Silent, Estimator::Ls);
        cfg.num_trials = 0;
        assert!(matches!(cfg.validate(), Err(ConfigError::Invalid(_))));
        let mut cfg = ScenarioConfig::los_reference(AttackConfig::PilotReplay { replay_scale: 0.5 }, Estimator::Ls);
        assert!(cfg.validate().is_err());
        cfg.attack = AttackConfig::Silent;
        cfg.geometry.num_antennas = 0;
        assert!(cfg.validate().is_err());
        assert!(matches!(ScenarioConfig::from_json_str("{\"geometry\": 1}"), Err(ConfigError::Parse(_))));
        assert!(ScenarioConfig::from_json_str(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn warns_on_unit_length_pilot() {
        let mut cfg = ScenarioConfig::los_reference(AttackConfig::Silent, Estimator::Villain);
        assert!(cfg.warnings().is_empty());
        cfg.pilot.length = 1;
        assert_eq!(cfg.warnings().len(), 1);
    }

    #[test]
    fn json_roundtrip() {
        let cfg = ScenarioConfig::stochastic_reference(0.0, Estimator::Villain);
        let back = ScenarioConfig::from_json_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, back);
    }
}
