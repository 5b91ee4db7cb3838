//! Security metrics: the UE-to-eavesdropper advantage, beam patterns, and
//! the zero-leakage optimum used as a reference for VILLAIN.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::channel::{los_steering, ChannelVector, UlaGeometry};
use crate::numerics::{apply_unit_complement, norm2, ToleranceConfig, C64};
use crate::precode::{mrt_vector, Precoder};

/// Eavesdropper power below this fraction of `P ||j||^2` counts as zero.
pub const LEAKAGE_FLOOR: f64 = 1e-30;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("UE and eavesdropper both receive zero power")]
    BothZero,
    #[error("UE and eavesdropper channels are collinear; no zero-leakage beam exists")]
    CollinearChannels,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Advantage in dB. `Infinite` marks a leakage below floating-point
/// resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AdvantageDb {
    Finite(f64),
    Infinite,
}

impl AdvantageDb {
    pub fn is_positive(&self) -> bool {
        match self {
            AdvantageDb::Finite(v) => *v > 0.0,
            AdvantageDb::Infinite => true,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            AdvantageDb::Finite(v) => Some(*v),
            AdvantageDb::Infinite => None,
        }
    }

    /// Total order with `Infinite` above every finite value.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (AdvantageDb::Finite(a), AdvantageDb::Finite(b)) => a.total_cmp(b),
            (AdvantageDb::Finite(_), AdvantageDb::Infinite) => Ordering::Less,
            (AdvantageDb::Infinite, AdvantageDb::Finite(_)) => Ordering::Greater,
            (AdvantageDb::Infinite, AdvantageDb::Infinite) => Ordering::Equal,
        }
    }

    pub fn at_least(&self, threshold_db: f64) -> bool {
        self.finite().is_none_or(|v| v >= threshold_db)
    }
}

impl fmt::Display for AdvantageDb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdvantageDb::Finite(v) => write!(f, "{v}"),
            AdvantageDb::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for AdvantageDb {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            AdvantageDb::Finite(v) => serializer.serialize_f64(*v),
            AdvantageDb::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for AdvantageDb {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => Ok(AdvantageDb::Finite(v)),
            Raw::Text(s) if s == "inf" => Ok(AdvantageDb::Infinite),
            Raw::Text(s) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdvantageReport {
    pub delta_db: AdvantageDb,
    pub ue_power: f64,
    pub ed_power: f64,
}

impl AdvantageReport {
    /// Equal noise at both receivers and `delta > 1` means this precoder
    /// supports a positive secrecy rate.
    pub fn positive_secrecy(&self) -> bool {
        self.delta_db.is_positive()
    }
}

/// `delta = |h^T w|^2 / |j^T w|^2` in dB.
pub fn advantage(h: &ChannelVector, j: &ChannelVector, w: &Precoder) -> Result<AdvantageReport, MetricsError> {
    if h.len() != w.weights.len() || j.len() != w.weights.len() {
        return Err(MetricsError::DimensionMismatch(format!(
            "precoder has {} taps, channels {} and {}",
            w.weights.len(),
            h.len(),
            j.len()
        )));
    }
    let ue_power = w.response(h.as_slice()).norm_sqr();
    let ed_power = w.response(j.as_slice()).norm_sqr();
    let p = w.power_budget;
    let ed_zero = ed_power < LEAKAGE_FLOOR * p * j.gain().powi(2);
    let ue_zero = ue_power < LEAKAGE_FLOOR * p * h.gain().powi(2);
    let delta_db = match (ue_zero, ed_zero) {
        (true, true) => return Err(MetricsError::BothZero),
        (false, true) => AdvantageDb::Infinite,
        _ => AdvantageDb::Finite(10.0 * (ue_power / ed_power).log10()),
    };
    Ok(AdvantageReport { delta_db, ue_power, ed_power })
}

/// `10 log10 |g(phi)^T w|^2` over the given angles.
pub fn beam_pattern(w: &Precoder, geom: &UlaGeometry, angles_deg: &[f64]) -> Vec<(f64, f64)> {
    angles_deg
        .iter()
        .map(|&phi| {
            let g = los_steering(geom, phi);
            (phi, 10.0 * w.response(g.as_slice()).norm_sqr().log10())
        })
        .collect()
}

/// Inclusive grid `start, start + step, ...` up to `stop`.
pub fn angle_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && stop >= start, "invalid grid");
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| start + step * k as f64).collect()
}

/// Default sweep: 0° to 180° in 0.25° steps.
pub fn default_angle_grid() -> Vec<f64> {
    angle_grid(0.0, 180.0, 0.25)
}

/// `(I - j j^+) h`.
pub fn project_out(h: &ChannelVector, j: &ChannelVector) -> Vec<C64> {
    let jn = j.gain();
    if jn == 0.0 {
        return h.as_slice().to_vec();
    }
    let unit: Vec<C64> = j.as_slice().iter().map(|z| z / jn).collect();
    apply_unit_complement(&unit, h.as_slice())
}

/// Best UE power achievable with zero leakage: `P ||(I - j j^+) h||^2`.
pub fn delivered_power_theory(h: &ChannelVector, j: &ChannelVector, power: f64) -> f64 {
    power * norm2(&project_out(h, j)).powi(2)
}

/// Maximizer of `|h^T w|^2` subject to `||w||^2 <= P` and `j^T w = 0`:
/// MRT on the component of `h` orthogonal to `j`.
pub fn constrained_optimum_oracle(
    h: &ChannelVector,
    j: &ChannelVector,
    power: f64,
    tol: &ToleranceConfig,
) -> Result<Precoder, MetricsError> {
    if h.len() != j.len() {
        return Err(MetricsError::DimensionMismatch(format!("{} vs {}", h.len(), j.len())));
    }
    let ph = project_out(h, j);
    if tol.is_negligible(norm2(&ph), h.gain()) {
        return Err(MetricsError::CollinearChannels);
    }
    mrt_vector(&ph, power, tol).map_err(|_| MetricsError::CollinearChannels)
}
