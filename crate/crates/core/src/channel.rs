//! UE and eavesdropper channel generation.
//!
//! Two models: the far-field line-of-sight steering vector of a uniform
//! linear array, and a clustered multipath model with log-distance pathloss
//! for randomized placements. Angles are in degrees, measured from the array
//! axis, so broadside is 90°.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{dot_h, norm2, C64};
use crate::rng::complex_normal;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("array needs at least one antenna")]
    NoAntennas,
    #[error("antenna spacing must be positive, got {0}")]
    BadSpacing(f64),
    #[error("invalid stochastic channel config: {0}")]
    BadStochasticConfig(String),
}

/// Downlink channel vector, stored as a column of length B.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelVector(Vec<C64>);

impl ChannelVector {
    pub fn new(entries: Vec<C64>) -> Self {
        assert!(!entries.is_empty(), "channel vector must have at least one entry");
        Self(entries)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn gain(&self) -> f64 {
        norm2(&self.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }

    /// `|h^H j| / (||h|| ||j||)`.
    pub fn coherence(&self, other: &ChannelVector) -> f64 {
        dot_h(&self.0, &other.0).norm() / (self.gain() * other.gain())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UlaGeometry {
    pub num_antennas: usize,
    #[serde(default = "default_spacing")]
    pub spacing_wavelengths: f64,
}

fn default_spacing() -> f64 {
    0.5
}

impl UlaGeometry {
    pub fn half_wavelength(num_antennas: usize) -> Self {
        Self { num_antennas, spacing_wavelengths: 0.5 }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if self.num_antennas == 0 {
            return Err(ChannelError::NoAntennas);
        }
        if !(self.spacing_wavelengths > 0.0) || !self.spacing_wavelengths.is_finite() {
            return Err(ChannelError::BadSpacing(self.spacing_wavelengths));
        }
        Ok(())
    }
}

/// Unit-norm far-field steering vector
/// `g(phi)_b = exp(-i 2 pi d cos(phi) b) / sqrt(B)`.
pub fn los_steering(geom: &UlaGeometry, phi_deg: f64) -> ChannelVector {
    let b = geom.num_antennas;
    let amp = 1.0 / (b as f64).sqrt();
    let step = -2.0 * std::f64::consts::PI * geom.spacing_wavelengths * libm::cos(phi_deg.to_radians());
    ChannelVector(
        (0..b)
            .map(|k| {
                let (sin, cos) = libm::sincos(step * k as f64);
                Complex64::new(amp * cos, amp * sin)
            })
            .collect(),
    )
}

/// Clustered multipath model with uniform placement in a sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StochasticChannelConfig {
    pub num_paths: usize,
    /// Center of the placement sector (90° is broadside).
    pub sector_center_deg: f64,
    pub sector_halfangle_deg: f64,
    /// Standard deviation of the Laplacian per-path angle offset.
    pub angular_spread_deg: f64,
    pub dist_min_m: f64,
    pub dist_max_m: f64,
    pub pathloss_exponent: f64,
    /// Pathloss amplitude at the reference distance.
    pub reference_gain: f64,
    /// Distance with amplitude `reference_gain`; defaults to the median
    /// placement distance `(dist_min_m + dist_max_m) / 2`.
    pub reference_distance_m: Option<f64>,
}

impl Default for StochasticChannelConfig {
    fn default() -> Self {
        Self {
            num_paths: 10,
            sector_center_deg: 90.0,
            sector_halfangle_deg: 60.0,
            angular_spread_deg: 10.0,
            dist_min_m: 10.0,
            dist_max_m: 100.0,
            pathloss_exponent: 3.5,
            reference_gain: 1.0,
            reference_distance_m: None,
        }
    }
}

impl StochasticChannelConfig {
    pub fn validate(&self) -> Result<(), ChannelError> {
        let bad = |msg: &str| Err(ChannelError::BadStochasticConfig(msg.to_string()));
        if self.num_paths == 0 {
            return bad("num_paths must be at least 1");
        }
        if !(self.dist_min_m > 0.0 && self.dist_min_m < self.dist_max_m && self.dist_max_m.is_finite()) {
            return bad("need 0 < dist_min_m < dist_max_m");
        }
        if !(self.pathloss_exponent > 0.0) {
            return bad("pathloss_exponent must be positive");
        }
        if !(self.reference_gain > 0.0) {
            return bad("reference_gain must be positive");
        }
        if !(self.reference_distance() > 0.0 && self.reference_distance().is_finite()) {
            return bad("reference_distance_m must be positive");
        }
        if !(self.angular_spread_deg >= 0.0) || !(self.sector_halfangle_deg >= 0.0) {
            return bad("angles must be nonnegative");
        }
        Ok(())
    }

    pub fn reference_distance(&self) -> f64 {
        self.reference_distance_m.unwrap_or(0.5 * (self.dist_min_m + self.dist_max_m))
    }

    /// Log-distance amplitude `g0 * (d / d_ref)^(-eta / 2)`, so that
    /// `E ||h||^2 = amplitude^2`.
    pub fn pathloss_amplitude(&self, distance_m: f64) -> f64 {
        self.reference_gain * libm::pow(distance_m / self.reference_distance(), -self.pathloss_exponent / 2.0)
    }
}

/// Where a stochastic draw placed the terminal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub distance_m: f64,
    pub azimuth_deg: f64,
    pub amplitude: f64,
}

/// Draws a placement and a multipath channel
/// `h = a(d) * sum_l gamma_l g(phi_l)`, `gamma_l ~ CN(0, 1/L)`.
pub fn sample_stochastic_channel<R: Rng + ?Sized>(
    cfg: &StochasticChannelConfig,
    geom: &UlaGeometry,
    rng: &mut R,
) -> (ChannelVector, Placement) {
    let distance_m = rng.random_range(cfg.dist_min_m..cfg.dist_max_m);
    let azimuth_deg = if cfg.sector_halfangle_deg > 0.0 {
        cfg.sector_center_deg + rng.random_range(-cfg.sector_halfangle_deg..cfg.sector_halfangle_deg)
    } else {
        cfg.sector_center_deg
    };
    let channel = multipath_at(cfg, geom, distance_m, azimuth_deg, rng);
    let amplitude = cfg.pathloss_amplitude(distance_m);
    (channel, Placement { distance_m, azimuth_deg, amplitude })
}

/// Multipath channel for a fixed placement.
pub fn multipath_at<R: Rng + ?Sized>(
    cfg: &StochasticChannelConfig,
    geom: &UlaGeometry,
    distance_m: f64,
    azimuth_deg: f64,
    rng: &mut R,
) -> ChannelVector {
    let amplitude = cfg.pathloss_amplitude(distance_m);
    let path_var = 1.0 / cfg.num_paths as f64;
    // Laplacian scale b has standard deviation b * sqrt(2).
    let laplace_scale = cfg.angular_spread_deg / std::f64::consts::SQRT_2;
    let mut h = vec![C64::new(0.0, 0.0); geom.num_antennas];
    for _ in 0..cfg.num_paths {
        let gain = complex_normal(rng, path_var) * amplitude;
        let phi = azimuth_deg + sample_laplace(rng, laplace_scale);
        for (hk, gk) in h.iter_mut().zip(los_steering(geom, phi).as_slice()) {
            *hk += gain * gk;
        }
    }
    ChannelVector(h)
}

fn sample_laplace<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> f64 {
    if scale == 0.0 {
        return 0.0;
    }
    let u: f64 = rng.random_range(-0.5..0.5);
    -scale * u.signum() * libm::log(1.0 - 2.0 * u.abs())
}
