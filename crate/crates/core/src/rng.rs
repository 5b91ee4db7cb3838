//! Seeding discipline.
//!
//! Every random draw in a trial comes from its own ChaCha stream keyed by
//! `(master_seed, trial_index, role)`. Any trial can be replayed in isolation
//! and trials never share sequence state, so execution order is irrelevant.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

pub type Stream = ChaCha12Rng;

/// Role tags for the per-trial substreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Role {
    UeChannel = 1,
    EdChannel = 2,
    Pilot = 3,
    Attack = 4,
    BsNoise = 5,
    Downlink = 6,
}

/// Deterministic substream for one role of one trial.
pub fn substream(master_seed: u64, trial_index: u64, role: Role) -> Stream {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&trial_index.to_le_bytes());
    seed[16..24].copy_from_slice(&(role as u64).to_le_bytes());
    Stream::from_seed(seed)
}

/// Stream from a bare seed, for callers outside the trial structure.
pub fn stream_from_seed(seed: u64) -> Stream {
    Stream::seed_from_u64(seed)
}

/// One draw from CN(0, variance).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let sd = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(sd * re, sd * im)
}

pub fn complex_normal_vec<R: Rng + ?Sized>(rng: &mut R, len: usize, variance: f64) -> Vec<Complex64> {
    (0..len).map(|_| complex_normal(rng, variance)).collect()
}
