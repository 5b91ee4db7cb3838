//! Channel estimation from the pilot-phase receive matrix.
//!
//! [`ls_estimate`] is the classic `Y (s^T)^+`. [`villain_estimate`] jointly
//! picks a rank-(B-1) orthogonal projector and a channel estimate in its
//! image so that `||P Y - h s^T||_F^2` is minimal. For fixed `P` the best
//! `h` is `P Y (s^T)^+`; substituting back leaves a rank-one removal problem
//! on the pilot-orthogonal residual `R = Y (I - (s^T)^+ s^T)`, solved by
//! discarding the dominant left singular direction of `R`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{
    apply_unit_complement, dot_h, fix_phase, norm2, pinv_row, top_left_singular_vector, unit_projector_complement,
    CMatrix, NumericsError, ToleranceConfig, C64,
};
use crate::pilot::PilotPhase;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimateError {
    #[error("degenerate pilot: {0}")]
    DegeneratePilot(#[from] NumericsError),
    #[error("receive matrix is {rows}x{cols} but the pilot has length {pilot_len}")]
    DimensionMismatch { rows: usize, cols: usize, pilot_len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    Ls,
    Villain,
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Estimator::Ls => "ls",
            Estimator::Villain => "villain",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Projector {
    Identity,
    Matrix(CMatrix),
}

impl Projector {
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        match self {
            Projector::Identity => x.to_vec(),
            Projector::Matrix(p) => p.mul_vec(x),
        }
    }

    pub fn to_matrix(&self, dim: usize) -> CMatrix {
        match self {
            Projector::Identity => CMatrix::identity(dim),
            Projector::Matrix(p) => p.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEstimate {
    pub h_hat: Vec<C64>,
    pub projector: Projector,
    /// Estimated eavesdropper direction `u` (VILLAIN only).
    pub eavesdropper_direction: Option<Vec<C64>>,
    /// Largest singular value of the pilot-orthogonal residual.
    pub residual_sigma: f64,
    /// Residual indistinguishable from zero; `u` carries no information.
    pub degenerate: bool,
}

fn check_dims(phase: &PilotPhase) -> Result<(), EstimateError> {
    if phase.rx.cols() != phase.pilot.len() {
        return Err(EstimateError::DimensionMismatch {
            rows: phase.rx.rows(),
            cols: phase.rx.cols(),
            pilot_len: phase.pilot.len(),
        });
    }
    Ok(())
}

/// `Y (I - (s^T)^+ s^T)`, computed as `Y - (Y (s^T)^+) s^T`.
pub fn pilot_residual(rx: &CMatrix, pilot: &[C64], h_ls: &[C64]) -> CMatrix {
    rx.sub(&CMatrix::outer_transpose(h_ls, pilot))
}

pub fn ls_estimate(phase: &PilotPhase, tol: &ToleranceConfig) -> Result<ChannelEstimate, EstimateError> {
    check_dims(phase)?;
    let pinv = pinv_row(&phase.pilot.symbols, tol)?;
    let h_hat = phase.rx.mul_vec(&pinv);
    let residual = pilot_residual(&phase.rx, &phase.pilot.symbols, &h_hat);
    let residual_sigma = top_left_singular_vector(&residual).sigma_max;
    Ok(ChannelEstimate {
        h_hat,
        projector: Projector::Identity,
        eavesdropper_direction: None,
        residual_sigma,
        degenerate: false,
    })
}

pub fn villain_estimate(phase: &PilotPhase, tol: &ToleranceConfig) -> Result<ChannelEstimate, EstimateError> {
    check_dims(phase)?;
    let pinv = pinv_row(&phase.pilot.symbols, tol)?;
    let h_ls = phase.rx.mul_vec(&pinv);
    let residual = pilot_residual(&phase.rx, &phase.pilot.symbols, &h_ls);
    let pair = top_left_singular_vector(&residual);

    let degenerate = tol.is_negligible(pair.sigma_max, phase.rx.frobenius_norm());
    let u = if degenerate { direction_orthogonal_to(&h_ls) } else { pair.u };

    let h_hat = apply_unit_complement(&u, &h_ls);
    Ok(ChannelEstimate {
        h_hat,
        projector: Projector::Matrix(unit_projector_complement(&u)),
        eavesdropper_direction: Some(u),
        residual_sigma: pair.sigma_max,
        degenerate,
    })
}

/// Direction used when the residual carries no eavesdropper information:
/// the coordinate axis least aligned with `x`, made orthogonal to `x`. The
/// resulting projector leaves `x` untouched whenever `B >= 2`.
fn direction_orthogonal_to(x: &[C64]) -> Vec<C64> {
    let n = x.len();
    let mut axis = vec![C64::new(0.0, 0.0); n];
    let nx2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let k = x
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    axis[k] = C64::new(1.0, 0.0);
    if n < 2 || nx2 == 0.0 {
        return axis;
    }
    let coeff = dot_h(x, &axis) / nx2;
    let mut u: Vec<C64> = axis.iter().zip(x).map(|(a, xi)| a - xi * coeff).collect();
    let nu = norm2(&u);
    u.iter_mut().for_each(|z| *z /= nu);
    fix_phase(&mut u);
    u
}

/// `||P Y - h s^T||_F^2`.
pub fn villain_objective(rx: &CMatrix, pilot: &[C64], projector: &Projector, h: &[C64]) -> f64 {
    let projected = match projector {
        Projector::Identity => rx.clone(),
        Projector::Matrix(p) => p.matmul(rx),
    };
    projected.sub(&CMatrix::outer_transpose(h, pilot)).frobenius_norm().powi(2)
}
