//! Secret-pilot channel estimation against active eavesdroppers.
//!
//! A BS with `B` antennas learns the UE channel from a length-`T` pilot
//! while an eavesdropper transmits during the pilot phase. The LS estimate
//! is pulled towards the eavesdropper; the VILLAIN estimate instead removes
//! the dominant pilot-orthogonal residual direction, so MRT on it sends
//! nothing towards the eavesdropper in the noiseless case while delivering
//! the most UE power any zero-leakage beam can.
//!
//! Modules follow the processing chain: [`channel`] and [`pilot`] build the
//! pilot phase, [`estimate`] and [`precode`] turn it into a beam, [`metrics`]
//! scores it, and [`harness`] runs configured experiments.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod estimate;
pub mod harness;
pub mod metrics;
pub mod numerics;
pub mod pilot;
pub mod precode;
pub mod rng;

pub use channel::{los_steering, ChannelVector, StochasticChannelConfig, UlaGeometry};
pub use estimate::{ls_estimate, villain_estimate, ChannelEstimate, Estimator, Projector};
pub use metrics::{advantage, beam_pattern, constrained_optimum_oracle, AdvantageDb, AdvantageReport};
pub use numerics::{CMatrix, ToleranceConfig, C64};
pub use pilot::{AttackSpec, PilotPhase, PilotSequence};
pub use precode::{mrt, mrt_vector, Constellation, Precoder};
