//! Scenario orchestration: configs, seeded trials, Monte Carlo campaigns,
//! result files, and the built-in verification suite.

pub mod campaign;
pub mod config;
pub mod output;
pub mod trial;
pub mod verify;

pub use campaign::{run_campaign, CampaignResult, CampaignSummary, CdfPoint};
pub use config::{AttackConfig, ChannelModel, ConfigError, NoiseConfig, PilotConfig, ScenarioConfig};
pub use output::{emit_beam_pattern, emit_cdf, emit_results, OutputError, OutputFormat};
pub use trial::{run_trial, simulate_trial, TrialArtifacts, TrialError, TrialMetrics, TrialRecord};
