mod common;

use proptest::prelude::*;
use villain::channel::{los_steering, ChannelVector, UlaGeometry};
use villain::estimate::{ls_estimate, pilot_residual, villain_estimate, villain_objective, Estimator, Projector};
use villain::harness::{run_trial, simulate_trial, AttackConfig, ScenarioConfig};
use villain::metrics::advantage;
use villain::numerics::{
    dot_h, dot_t, norm2, orth_projector, pinv_row, top_left_singular_vector, unit_projector_complement, CMatrix,
    ToleranceConfig, C64,
};
use villain::pilot::{gen_attack, gen_pilot, synthesize_pilot_rx, AttackSpec, PilotPhase};
use villain::precode::{mrt_vector, Constellation, Precoder};
use villain::rng::{complex_normal, complex_normal_vec, stream_from_seed, substream, Role, Stream};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn max_abs(m: &CMatrix) -> f64 {
    m.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Jammed pilot phase with random B, T and BS noise.
fn jammed_phase(rng: &mut Stream, b: usize, t: usize, q: f64, noise: f64) -> (ChannelVector, ChannelVector, PilotPhase) {
    let h = ChannelVector::new(complex_normal_vec(rng, b, 1.0));
    let j = ChannelVector::new(complex_normal_vec(rng, b, 1.0));
    let pilot = gen_pilot(t, 1.0, rng).unwrap();
    let z = complex_normal_vec(rng, t, q);
    let phase = synthesize_pilot_rx(&h, &j, &pilot, &z, noise, rng).unwrap();
    (h, j, phase)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pinv_and_projector_invariants(seed in any::<u64>(), n in 1usize..24, scale in -6.0f64..6.0) {
        let mut rng = stream_from_seed(seed);
        let a = complex_normal_vec(&mut rng, n, 10f64.powf(scale));
        let s = pinv_row(&a, &tol()).unwrap();
        prop_assert!((dot_t(&a, &s) - C64::new(1.0, 0.0)).norm() <= 1e-13);
        let p = orth_projector(&a, &tol()).unwrap();
        prop_assert!(p.sub(&p.adjoint()).frobenius_norm() <= 1e-13 * p.frobenius_norm().max(1.0));
        prop_assert!(max_abs(&p.matmul(&p).sub(&p)) <= 1e-13);
        prop_assert!((p.trace().re - (n as f64 - 1.0)).abs() <= 1e-10);
        prop_assert!(norm2(&p.mul_vec(&a)) <= 1e-14 * norm2(&a));
    }

    #[test]
    fn svd_matches_gram_oracle(seed in any::<u64>(), rows in 1usize..20, cols in 1usize..20) {
        let mut rng = stream_from_seed(seed);
        let m = CMatrix::from_fn(rows, cols, |_, _| complex_normal(&mut rng, 1.0));
        let pair = top_left_singular_vector(&m);
        let (sigma, v) = common::gram_top_pair(&m);
        prop_assert!((pair.sigma_max - sigma).abs() <= 1e-10 * sigma.max(1.0));
        prop_assert!(1.0 - common::alignment(&pair.u, &v) <= 1e-10);
        prop_assert!((norm2(&pair.u) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn villain_estimate_in_projector_image(seed in any::<u64>(), b in 2usize..12, t in 2usize..10, noise in 0.0f64..0.5) {
        let mut rng = stream_from_seed(seed);
        let (_, _, phase) = jammed_phase(&mut rng, b, t, 100.0, noise);
        let est = villain_estimate(&phase, &tol()).unwrap();
        let u = est.eavesdropper_direction.clone().unwrap();
        let p = est.projector.to_matrix(b);
        prop_assert!(norm2(&p.mul_vec(&u)) <= 1e-12);
        prop_assert!(p.sub(&p.adjoint()).frobenius_norm() <= 1e-12);
        prop_assert!(max_abs(&p.matmul(&p).sub(&p)) <= 1e-12);
        let reprojected = p.mul_vec(&est.h_hat);
        let diff: Vec<C64> = reprojected.iter().zip(&est.h_hat).map(|(a, b)| a - b).collect();
        prop_assert!(norm2(&diff) <= 1e-12 * norm2(&est.h_hat).max(1.0));
    }

    #[test]
    fn scale_equivariance(seed in any::<u64>(), b in 2usize..10, t in 2usize..8, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let c = C64::new(re, im);
        prop_assume!(c.norm() > 1e-2);
        let mut rng = stream_from_seed(seed);
        let (_, _, phase) = jammed_phase(&mut rng, b, t, 1000.0, 0.01);
        let scaled = PilotPhase { rx: phase.rx.scale(c), ..phase.clone() };
        let a = villain_estimate(&phase, &tol()).unwrap();
        let s = villain_estimate(&scaled, &tol()).unwrap();
        let diff: Vec<C64> = s.h_hat.iter().zip(&a.h_hat).map(|(x, y)| x - y * c).collect();
        prop_assert!(norm2(&diff) <= 1e-12 * c.norm() * norm2(&a.h_hat).max(1.0));
        let dp = s.projector.to_matrix(b).sub(&a.projector.to_matrix(b));
        prop_assert!(dp.frobenius_norm() <= 1e-12);
    }

    #[test]
    fn mrt_on_projected_estimate_never_leaks(seed in any::<u64>(), b in 2usize..16, power in 0.1f64..10.0) {
        let mut rng = stream_from_seed(seed);
        let j = complex_normal_vec(&mut rng, b, 1.0);
        let h = complex_normal_vec(&mut rng, b, 1.0);
        let p = orth_projector(&j, &tol()).unwrap();
        let w = mrt_vector(&p.mul_vec(&h), power, &tol()).unwrap();
        prop_assert!(dot_t(&j, &w.weights).norm() <= 1e-10 * (power.sqrt() * norm2(&j)));
        prop_assert!((w.power() - power).abs() <= 1e-12 * power);
    }

    #[test]
    fn steering_vector_properties(b in 1usize..64, phi in -720.0f64..720.0) {
        let geom = UlaGeometry::half_wavelength(b);
        let g = los_steering(&geom, phi);
        prop_assert!((g.gain() - 1.0).abs() <= 1e-12);
        let wrapped = los_steering(&geom, phi + 360.0);
        let mirrored = los_steering(&geom, -phi);
        let supplement = los_steering(&geom, 180.0 - phi);
        for (k, x) in g.as_slice().iter().enumerate() {
            prop_assert!((x - wrapped.as_slice()[k]).norm() <= 1e-9);
            prop_assert!((x - mirrored.as_slice()[k]).norm() <= 1e-9);
            prop_assert!((x.conj() - supplement.as_slice()[k]).norm() <= 1e-9);
        }
        let x = dot_h(g.as_slice(), los_steering(&geom, 40.0).as_slice()).norm_sqr();
        prop_assert!((x - common::ula_cross_gain(b, phi, 40.0)).abs() <= 1e-9);
    }

    #[test]
    fn advantage_is_scale_invariant(seed in any::<u64>(), b in 2usize..12, k in 0.01f64..100.0) {
        let mut rng = stream_from_seed(seed);
        let h = ChannelVector::new(complex_normal_vec(&mut rng, b, 1.0));
        let j = ChannelVector::new(complex_normal_vec(&mut rng, b, 1.0));
        let w = mrt_vector(&complex_normal_vec(&mut rng, b, 1.0), 1.0, &tol()).unwrap();
        let w2 = Precoder { weights: w.weights.iter().map(|z| z * k.sqrt()).collect(), power_budget: k };
        let a = advantage(&h, &j, &w).unwrap().delta_db.finite().unwrap();
        let c = advantage(&h, &j, &w2).unwrap().delta_db.finite().unwrap();
        prop_assert!((a - c).abs() <= 1e-12 * a.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// No rank-(B-1) projector with its best channel fits the pilot phase
    /// better than the VILLAIN solution.
    #[test]
    fn villain_objective_is_minimal(seed in any::<u64>(), b in 2usize..8, t in 2usize..8) {
        let mut rng = stream_from_seed(seed);
        let (_, _, phase) = jammed_phase(&mut rng, b, t, 50.0, 0.1);
        let s = &phase.pilot.symbols;
        let est = villain_estimate(&phase, &tol()).unwrap();
        let best = villain_objective(&phase.rx, s, &est.projector, &est.h_hat);

        let ls = ls_estimate(&phase, &tol()).unwrap();
        let ls_resid = pilot_residual(&phase.rx, s, &ls.h_hat).frobenius_norm().powi(2);
        prop_assert!(best <= ls_resid * (1.0 + 1e-12));

        for _ in 0..1000 {
            let mut u = complex_normal_vec(&mut rng, b, 1.0);
            let nu = norm2(&u);
            u.iter_mut().for_each(|z| *z /= nu);
            let p = unit_projector_complement(&u);
            let h = p.mul_vec(&ls.h_hat);
            let cand = villain_objective(&phase.rx, s, &Projector::Matrix(p), &h);
            prop_assert!(best <= cand * (1.0 + 1e-12) + 1e-12);
        }
    }

    #[test]
    fn los_noiseless_estimate_ignores_pilot_draw(seed in any::<u64>(), db in 0.0f64..40.0) {
        let cfg = |s: u64| ScenarioConfig {
            master_seed: s,
            ..ScenarioConfig::los_reference(AttackConfig::GaussianJam { jam_power_over_es_db: db }, Estimator::Villain)
        };
        let a = simulate_trial(&cfg(seed), 0).unwrap();
        let b = simulate_trial(&cfg(seed.wrapping_add(1)), 0).unwrap();
        let diff: Vec<C64> = a.estimate.h_hat.iter().zip(&b.estimate.h_hat).map(|(x, y)| x - y).collect();
        prop_assert!(norm2(&diff) <= 1e-12);
        prop_assert!((a.metrics.ue_power - b.metrics.ue_power).abs() <= 1e-12);
    }

    #[test]
    fn advantage_ignores_constellation(seed in any::<u64>(), snr in 0.0f64..30.0) {
        let mut cfg = ScenarioConfig::stochastic_reference(snr, Estimator::Villain);
        cfg.master_seed = seed;
        let mut deltas = Vec::new();
        for c in [Constellation::Bpsk, Constellation::Qpsk, Constellation::Qam16] {
            cfg.constellation = c;
            deltas.push(run_trial(&cfg, 3).metrics.unwrap().delta_db);
        }
        prop_assert_eq!(deltas[0], deltas[1]);
        prop_assert_eq!(deltas[1], deltas[2]);
    }

    #[test]
    fn stochastic_channels_not_collinear(seed in any::<u64>(), idx in 0u64..1000) {
        let cfg = ScenarioConfig { master_seed: seed, ..ScenarioConfig::stochastic_reference(15.0, Estimator::Ls) };
        let a = simulate_trial(&cfg, idx).unwrap();
        prop_assert!(a.h.coherence(&a.j) < 1.0 - 1e-9);
    }
}

#[test]
fn complex_normal_variance() {
    let mut rng = stream_from_seed(31);
    for var in [0.01, 1.0, 250.0] {
        let x = complex_normal_vec(&mut rng, 20_000, var);
        let mean = x.iter().map(|z| z.norm_sqr()).sum::<f64>() / x.len() as f64;
        assert!((mean / var - 1.0).abs() < 0.05, "{mean} vs {var}");
        let re = x.iter().map(|z| z.re * z.re).sum::<f64>() / x.len() as f64;
        assert!((re / (var / 2.0) - 1.0).abs() < 0.05);
    }
}

#[test]
fn pilot_and_attack_uncorrelated() {
    let n = 10_000;
    let pilot = gen_pilot(n, 1.0, &mut substream(4, 0, Role::Pilot)).unwrap();
    let z = gen_attack(&AttackSpec::GaussianJam { jam_power: 10.0 }, n, &pilot, &mut substream(4, 0, Role::Attack)).unwrap();
    let rho = dot_h(&pilot.symbols, &z).norm() / (norm2(&pilot.symbols) * norm2(&z));
    assert!(rho < 3.0 / (n as f64).sqrt(), "correlation {rho}");
}
