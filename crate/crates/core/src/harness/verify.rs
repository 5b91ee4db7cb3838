//! Built-in self-checks behind the `verify` subcommand.

use rand::Rng;

use super::config::{AttackConfig, ScenarioConfig};
use super::trial::simulate_trial;
use crate::channel::ChannelVector;
use crate::estimate::{villain_estimate, Estimator};
use crate::metrics::{beam_pattern, default_angle_grid, delivered_power_theory, project_out};
use crate::numerics::{dot_t, norm2, orth_projector, pinv_row, ToleranceConfig, C64};
use crate::pilot::{gen_pilot, synthesize_pilot_rx};
use crate::precode::{mrt, mrt_vector};
use crate::rng::{complex_normal_vec, stream_from_seed};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

const INSTANCES: u64 = 200;

pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        passive_los_advantage(),
        villain_los_zero_leakage(),
        matches_zero_leakage_optimum(),
        orthogonal_estimate_has_no_leakage(),
        numerics_invariants(),
    ]
}

fn passive_los_advantage() -> CheckOutcome {
    let cfg = ScenarioConfig::los_reference(AttackConfig::Silent, Estimator::Ls);
    match simulate_trial(&cfg, 0) {
        Ok(a) => {
            let d = a.metrics.delta_db.finite().unwrap_or(f64::INFINITY);
            CheckOutcome::new("passive LoS LS advantage = 16.7 dB", (d - 16.7).abs() <= 0.1, format!("delta = {d:.3} dB"))
        }
        Err(e) => CheckOutcome::new("passive LoS LS advantage = 16.7 dB", false, e.to_string()),
    }
}

fn villain_los_zero_leakage() -> CheckOutcome {
    let name = "VILLAIN LoS jamming: zero leakage, UE beam peak";
    let cfg = ScenarioConfig::los_reference(AttackConfig::GaussianJam { jam_power_over_es_db: 25.0 }, Estimator::Villain);
    let grid = default_angle_grid();
    let mut worst_leak: f64 = 0.0;
    for i in 0..INSTANCES {
        let a = match simulate_trial(&cfg, i) {
            Ok(a) => a,
            Err(e) => return CheckOutcome::new(name, false, format!("trial {i}: {e}")),
        };
        worst_leak = worst_leak.max(a.metrics.ed_power / cfg.power_budget);
        if !a.metrics.delta_db.at_least(150.0) {
            return CheckOutcome::new(name, false, format!("trial {i}: delta = {}", a.metrics.delta_db));
        }
        let pattern = beam_pattern(&a.precoder, &cfg.geometry, &grid);
        let peak = pattern.iter().max_by(|x, y| x.1.total_cmp(&y.1)).map(|p| p.0).unwrap_or(f64::NAN);
        if (peak - 70.0).abs() > 0.25 {
            return CheckOutcome::new(name, false, format!("trial {i}: beam peak at {peak}°"));
        }
    }
    CheckOutcome::new(name, worst_leak <= 1e-20, format!("worst |j^T w|^2 / P = {worst_leak:.3e}"))
}

fn matches_zero_leakage_optimum() -> CheckOutcome {
    let name = "noiseless VILLAIN + MRT = zero-leakage optimum";
    let tol = ToleranceConfig::default();
    let mut rng = stream_from_seed(0x5eed);
    let (mut worst_est, mut worst_pow, mut worst_leak) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..INSTANCES {
        let b = [4, 8, 16][rng.random_range(0..3)];
        let t = [2, 4, 8][rng.random_range(0..3)];
        let h = ChannelVector::new(complex_normal_vec(&mut rng, b, 1.0));
        let j = ChannelVector::new(complex_normal_vec(&mut rng, b, 1.0));
        let pilot = gen_pilot(t, 1.0, &mut rng).expect("valid pilot");
        let z = complex_normal_vec(&mut rng, t, 10.0);
        let phase = synthesize_pilot_rx(&h, &j, &pilot, &z, 0.0, &mut rng).expect("consistent dims");
        let est = match villain_estimate(&phase, &tol) {
            Ok(e) => e,
            Err(e) => return CheckOutcome::new(name, false, e.to_string()),
        };
        let target = project_out(&h, &j);
        let diff: Vec<C64> = est.h_hat.iter().zip(&target).map(|(a, b)| a - b).collect();
        worst_est = worst_est.max(norm2(&diff) / h.gain());
        let w = match mrt(&est, 1.0, &tol) {
            Ok(w) => w,
            Err(e) => return CheckOutcome::new(name, false, e.to_string()),
        };
        let theory = delivered_power_theory(&h, &j, 1.0);
        worst_pow = worst_pow.max((w.response(h.as_slice()).norm_sqr() - theory).abs() / theory);
        worst_leak = worst_leak.max(w.response(j.as_slice()).norm());
    }
    CheckOutcome::new(
        name,
        worst_est <= 1e-9 && worst_pow <= 1e-9 && worst_leak <= 1e-10,
        format!("estimate err {worst_est:.2e}, power err {worst_pow:.2e}, |j^T w| {worst_leak:.2e}"),
    )
}

fn orthogonal_estimate_has_no_leakage() -> CheckOutcome {
    let name = "MRT on a projected estimate never leaks";
    let tol = ToleranceConfig::default();
    let mut rng = stream_from_seed(0xab);
    let mut worst: f64 = 0.0;
    for _ in 0..INSTANCES {
        let b = rng.random_range(2..=16);
        let j = complex_normal_vec(&mut rng, b, 1.0);
        let h_tilde = complex_normal_vec(&mut rng, b, 1.0);
        let p = orth_projector(&j, &tol).expect("nonzero j");
        let w = mrt_vector(&p.mul_vec(&h_tilde), 2.0, &tol).expect("nonzero estimate");
        worst = worst.max(dot_t(&j, &w.weights).norm() / (2f64.sqrt() * norm2(&j)));
    }
    CheckOutcome::new(name, worst <= 1e-10, format!("worst |j^T w| / (sqrt(P) ||j||) = {worst:.2e}"))
}

fn numerics_invariants() -> CheckOutcome {
    let name = "projector and pseudoinverse invariants";
    let tol = ToleranceConfig::default();
    let mut rng = stream_from_seed(0xcd);
    let (mut worst, mut worst_trace) = (0.0f64, 0.0f64);
    for _ in 0..INSTANCES {
        let n = rng.random_range(1..=16);
        let a = complex_normal_vec(&mut rng, n, 1.0);
        let s = pinv_row(&a, &tol).expect("nonzero");
        worst = worst.max((dot_t(&a, &s) - C64::new(1.0, 0.0)).norm());
        let p = orth_projector(&a, &tol).expect("nonzero");
        let herm = p.sub(&p.adjoint()).frobenius_norm() / p.frobenius_norm().max(1.0);
        let idem = p.matmul(&p).sub(&p).frobenius_norm();
        let null = norm2(&p.mul_vec(&a)) / norm2(&a);
        worst_trace = worst_trace.max((p.trace().re - (n as f64 - 1.0)).abs());
        worst = worst.max(herm).max(idem).max(null);
    }
    CheckOutcome::new(
        name,
        worst <= 1e-13 && worst_trace <= 1e-10,
        format!("worst deviation {worst:.2e}, trace error {worst_trace:.2e}"),
    )
}
