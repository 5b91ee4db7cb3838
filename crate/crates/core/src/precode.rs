//! MRT precoding and the downlink signal model.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::ChannelVector;
use crate::estimate::ChannelEstimate;
use crate::numerics::{dot_t, norm2, ToleranceConfig, C64};
use crate::rng::complex_normal;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrecodeError {
    #[error("channel estimate norm {0:e} is too small to precode")]
    ZeroEstimate(f64),
    #[error("power budget must be positive, got {0}")]
    BadPower(f64),
    #[error("UE link gain |h^T w| = {0:e} is too small to rescale")]
    DegenerateLink(f64),
    #[error("dimension mismatch: precoder has {precoder} taps, channel {channel}")]
    DimensionMismatch { precoder: usize, channel: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Precoder {
    pub weights: Vec<C64>,
    pub power_budget: f64,
}

impl Precoder {
    pub fn power(&self) -> f64 {
        self.weights.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `h^T w`.
    pub fn response(&self, channel: &[C64]) -> C64 {
        dot_t(channel, &self.weights)
    }
}

/// `w = sqrt(P) * h_hat^* / ||h_hat||`.
pub fn mrt_vector(h_hat: &[C64], power: f64, tol: &ToleranceConfig) -> Result<Precoder, PrecodeError> {
    if !(power > 0.0) || !power.is_finite() {
        return Err(PrecodeError::BadPower(power));
    }
    let norm = norm2(h_hat);
    if tol.is_negligible(norm, 1.0) || !norm.is_finite() {
        return Err(PrecodeError::ZeroEstimate(norm));
    }
    let k = power.sqrt() / norm;
    Ok(Precoder { weights: h_hat.iter().map(|z| z.conj() * k).collect(), power_budget: power })
}

pub fn mrt(estimate: &ChannelEstimate, power: f64, tol: &ToleranceConfig) -> Result<Precoder, PrecodeError> {
    mrt_vector(&estimate.h_hat, power, tol)
}

/// Unit-energy data constellations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constellation {
    Bpsk,
    #[default]
    Qpsk,
    Qam16,
}

impl Constellation {
    pub fn points(&self) -> Vec<C64> {
        match self {
            Constellation::Bpsk => vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)],
            Constellation::Qpsk => {
                let a = std::f64::consts::FRAC_1_SQRT_2;
                vec![C64::new(a, a), C64::new(-a, a), C64::new(-a, -a), C64::new(a, -a)]
            }
            Constellation::Qam16 => {
                // Average energy of {±1, ±3}^2 is 10.
                let k = 1.0 / 10f64.sqrt();
                let levels = [-3.0, -1.0, 1.0, 3.0];
                levels.iter().flat_map(|&re| levels.iter().map(move |&im| C64::new(re * k, im * k))).collect()
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> C64 {
        let pts = self.points();
        pts[rng.random_range(0..pts.len())]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DownlinkObservation {
    pub symbol: C64,
    pub y_ue: C64,
    pub y_ed: C64,
    pub ue_noise_var: f64,
    pub ed_noise_var: f64,
    /// Genie gain `1 / |h^T w|`.
    pub beta: f64,
    pub s_hat: C64,
}

/// Transmits `x = w s` and observes it at the UE and the eavesdropper.
#[allow(clippy::too_many_arguments)]
pub fn downlink_tx_rx<R: Rng + ?Sized>(
    w: &Precoder,
    h: &ChannelVector,
    j: &ChannelVector,
    symbol: C64,
    ue_noise_var: f64,
    ed_noise_var: f64,
    tol: &ToleranceConfig,
    rng: &mut R,
) -> Result<DownlinkObservation, PrecodeError> {
    for ch in [h, j] {
        if ch.len() != w.weights.len() {
            return Err(PrecodeError::DimensionMismatch { precoder: w.weights.len(), channel: ch.len() });
        }
    }
    let ue_gain = w.response(h.as_slice());
    if tol.is_negligible(ue_gain.norm(), w.power_budget.sqrt()) {
        return Err(PrecodeError::DegenerateLink(ue_gain.norm()));
    }
    let noise = |rng: &mut R, var: f64| if var > 0.0 { complex_normal(rng, var) } else { C64::new(0.0, 0.0) };
    let y_ue = ue_gain * symbol + noise(rng, ue_noise_var);
    let y_ed = w.response(j.as_slice()) * symbol + noise(rng, ed_noise_var);
    let beta = 1.0 / ue_gain.norm();
    Ok(DownlinkObservation { symbol, y_ue, y_ed, ue_noise_var, ed_noise_var, beta, s_hat: y_ue * beta })
}
