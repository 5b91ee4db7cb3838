//! Pilot phase: secret pilots, attack signals, and the BS receive matrix
//! `Y = h s^T + j z^T + N`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::ChannelVector;
use crate::numerics::{CMatrix, C64};
use crate::rng::{complex_normal, complex_normal_vec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PilotError {
    #[error("pilot length must be at least 1")]
    EmptyPilot,
    #[error("symbol energy must be positive, got {0}")]
    BadEnergy(f64),
    #[error("invalid attack: {0}")]
    BadAttack(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("noise variance must be nonnegative, got {0}")]
    BadNoise(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PilotSequence {
    pub symbols: Vec<C64>,
    pub symbol_energy: f64,
}

impl PilotSequence {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// What the eavesdropper sends during the pilot phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AttackSpec {
    Silent,
    /// i.i.d. CN(0, Q) samples, independent of the pilot.
    GaussianJam { jam_power: f64 },
    /// Known-pilot attacker, `z = alpha * s`.
    PilotReplay { replay_scale: f64 },
}

impl AttackSpec {
    pub fn validate(&self) -> Result<(), PilotError> {
        match *self {
            AttackSpec::Silent => Ok(()),
            AttackSpec::GaussianJam { jam_power } if jam_power > 0.0 && jam_power.is_finite() => Ok(()),
            AttackSpec::GaussianJam { jam_power } => {
                Err(PilotError::BadAttack(format!("jam power must be positive, got {jam_power}")))
            }
            AttackSpec::PilotReplay { replay_scale } if replay_scale >= 1.0 && replay_scale.is_finite() => Ok(()),
            AttackSpec::PilotReplay { replay_scale } => {
                Err(PilotError::BadAttack(format!("replay scale must be >= 1, got {replay_scale}")))
            }
        }
    }

    pub fn is_active(&self) -> bool {
        !matches!(self, AttackSpec::Silent)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PilotPhase {
    pub rx: CMatrix,
    pub pilot: PilotSequence,
    pub attack: Vec<C64>,
    pub noise_var: f64,
}

/// i.i.d. CN(0, Es) pilot of length `len`.
pub fn gen_pilot<R: Rng + ?Sized>(len: usize, symbol_energy: f64, rng: &mut R) -> Result<PilotSequence, PilotError> {
    if len == 0 {
        return Err(PilotError::EmptyPilot);
    }
    if !(symbol_energy > 0.0) || !symbol_energy.is_finite() {
        return Err(PilotError::BadEnergy(symbol_energy));
    }
    let amp = symbol_energy.sqrt();
    let symbols = (0..len).map(|_| complex_normal(rng, 1.0) * amp).collect();
    Ok(PilotSequence { symbols, symbol_energy })
}

/// Attack signal of length `len`. The jamming draw uses `rng` only, which the
/// caller keeps separate from the pilot stream.
pub fn gen_attack<R: Rng + ?Sized>(
    spec: &AttackSpec,
    len: usize,
    pilot: &PilotSequence,
    rng: &mut R,
) -> Result<Vec<C64>, PilotError> {
    spec.validate()?;
    match *spec {
        AttackSpec::Silent => Ok(vec![C64::new(0.0, 0.0); len]),
        AttackSpec::GaussianJam { jam_power } => Ok(complex_normal_vec(rng, len, jam_power)),
        AttackSpec::PilotReplay { replay_scale } => {
            if pilot.len() != len {
                return Err(PilotError::DimensionMismatch(format!(
                    "replay of a length-{} pilot into a length-{len} attack",
                    pilot.len()
                )));
            }
            Ok(pilot.symbols.iter().map(|s| s * replay_scale).collect())
        }
    }
}

/// BS receive matrix `Y = h s^T + j z^T + N`, `N ~ CN(0, N_bs)` i.i.d.
pub fn synthesize_pilot_rx<R: Rng + ?Sized>(
    h: &ChannelVector,
    j: &ChannelVector,
    pilot: &PilotSequence,
    attack: &[C64],
    noise_var: f64,
    rng: &mut R,
) -> Result<PilotPhase, PilotError> {
    if h.len() != j.len() {
        return Err(PilotError::DimensionMismatch(format!("UE has {} antennas, ED channel {}", h.len(), j.len())));
    }
    if attack.len() != pilot.len() {
        return Err(PilotError::DimensionMismatch(format!(
            "pilot length {} but attack length {}",
            pilot.len(),
            attack.len()
        )));
    }
    if !(noise_var >= 0.0) || !noise_var.is_finite() {
        return Err(PilotError::BadNoise(noise_var));
    }
    let (hs, js) = (h.as_slice(), j.as_slice());
    let mut rx = CMatrix::from_fn(h.len(), pilot.len(), |r, t| hs[r] * pilot.symbols[t] + js[r] * attack[t]);
    if noise_var > 0.0 {
        for r in 0..rx.rows() {
            for t in 0..rx.cols() {
                rx[(r, t)] += complex_normal(rng, noise_var);
            }
        }
    }
    Ok(PilotPhase { rx, pilot: pilot.clone(), attack: attack.to_vec(), noise_var })
}
