//! Outer-loop behavior of the accelerated MM algorithm: scalar closed form,
//! monotone objective traces, iterate feasibility, and the SQUAREM on/off
//! comparison.

mod common;

use common::*;
use num_complex::Complex64;
use risbeam::design::DesignModel;
use risbeam::metrics::Beamformers;
use risbeam::mm::{run_algorithm1, MmConfig, RateMaxBudgets};

/// Degenerate single-element system, a_max = 1: the optimum is the
/// full-power matched filter with the reflection phase aligning direct and
/// reflected paths, rate = log2(1 + P (|h| + |g|)^2 / (sigma^2 + psi)).
#[test]
fn scalar_system_attains_closed_form() {
    for seed in 0..5 {
        let st = test_stats(1, 1, 1, 5.0);
        let real = st.sample(seed);
        let noise = test_noise(1);
        let model = DesignModel::partial_csi(&real, &st, &noise);
        let p_bs = 1.0;
        let budgets = RateMaxBudgets {
            p_bs,
            p_ris: Some(1.0), // ample: |w| = 1 costs ~beta0*P + sigma_z^2
            a_max: 1.0,
        };
        let cfg = MmConfig {
            outer_tol: 1e-10,
            max_outer_iters: 600,
            ..MmConfig::default()
        };
        let out = run_algorithm1(&model, &budgets, None, &cfg).unwrap();
        let h = model.h_direct[0][0].norm();
        let g = model.g[0][(0, 0)].norm();
        let expected = (1.0
            + p_bs * (h + g) * (h + g) / (noise.sigma_k_sq[0] + model.psi[0][0]))
            .log2();
        let achieved = model.sum_rate_lb_bits(&out.bf);
        assert!(
            (achieved - expected).abs() <= 1e-6 * expected,
            "seed {seed}: achieved {achieved} vs closed form {expected}"
        );
    }
}

#[test]
fn objective_trace_is_monotone_and_iterates_feasible() {
    let p_bs = 1.8;
    let p_ris = 0.0967;
    let a_max = 1e4;
    for seed in 0..20 {
        let st = test_stats(4, 8, 2, 10.0);
        let real = st.sample(1000 + seed);
        let noise = test_noise(2);
        let model = DesignModel::partial_csi(&real, &st, &noise);
        let budgets = RateMaxBudgets {
            p_bs,
            p_ris: Some(p_ris),
            a_max,
        };
        let out = run_algorithm1(&model, &budgets, None, &MmConfig::default()).unwrap();
        for pair in out.trace.windows(2) {
            assert!(
                pair[1].objective_bits >= pair[0].objective_bits - 1e-9,
                "seed {seed}: objective decreased {} -> {}",
                pair[0].objective_bits,
                pair[1].objective_bits
            );
        }
        // Feasibility of the final iterate within 1e-8.
        assert!(out.bf.bs_power() <= p_bs * (1.0 + 1e-8));
        assert!(out.bf.modulus_band_ok(a_max, 1e-8));
        assert!(model.power.ris_power(&out.bf.f, &out.bf.w) <= p_ris * (1.0 + 1e-6));
    }
}

#[test]
fn squarem_acceleration_does_not_lose_quality() {
    let p_bs = 1.8;
    let p_ris = 0.0967;
    let a_max = 1e4;
    let mut wins = 0;
    let total = 20;
    for seed in 0..total {
        let st = test_stats(4, 8, 2, 10.0);
        let real = st.sample(2000 + seed);
        let noise = test_noise(2);
        let model = DesignModel::partial_csi(&real, &st, &noise);
        let budgets = RateMaxBudgets {
            p_bs,
            p_ris: Some(p_ris),
            a_max,
        };
        let init = risbeam::mm::default_init(&model, &budgets).unwrap();
        let on = run_algorithm1(
            &model,
            &budgets,
            Some(Beamformers::new(init.f.clone(), init.w.clone())),
            &MmConfig {
                squarem: true,
                ..MmConfig::default()
            },
        )
        .unwrap();
        let off = run_algorithm1(
            &model,
            &budgets,
            Some(init),
            &MmConfig {
                squarem: false,
                ..MmConfig::default()
            },
        )
        .unwrap();
        let a = model.sum_rate_lb_bits(&on.bf);
        let b = model.sum_rate_lb_bits(&off.bf);
        assert!(
            (a - b).abs() <= 1e-4 * b.max(1.0),
            "seed {seed}: final objectives diverge: {a} vs {b}"
        );
        if on.outer_iters <= off.outer_iters {
            wins += 1;
        }
    }
    assert!(
        wins * 100 >= total * 80,
        "SQUAREM took more outer iterations than plain MM in {} of {total} seeds",
        total - wins
    );
}

/// w = 0 (M = 0 model) runs the same machinery on the direct links only.
#[test]
fn no_ris_path_runs_direct_only() {
    let st = test_stats(4, 8, 2, 10.0);
    let real = st.sample(77);
    let noise = test_noise(2);
    let model = DesignModel::no_ris(&real, &noise);
    let budgets = RateMaxBudgets {
        p_bs: 1.9,
        p_ris: None,
        a_max: 1.0,
    };
    let out = run_algorithm1(&model, &budgets, None, &MmConfig::default()).unwrap();
    assert_eq!(out.bf.w.len(), 0);
    for pair in out.trace.windows(2) {
        assert!(pair[1].objective_bits >= pair[0].objective_bits - 1e-9);
    }
    // K = 1 closed form: matched filter at full power.
    let real1 = test_stats(4, 8, 1, 10.0).sample(78);
    let noise1 = test_noise(1);
    let model1 = DesignModel::no_ris(&real1, &noise1);
    let out1 = run_algorithm1(
        &model1,
        &RateMaxBudgets {
            p_bs: 1.9,
            p_ris: None,
            a_max: 1.0,
        },
        None,
        &MmConfig {
            outer_tol: 1e-10,
            ..MmConfig::default()
        },
    )
    .unwrap();
    let expected = (1.0 + 1.9 * real1.h_direct[0].norm_squared() / noise1.sigma_k_sq[0]).log2();
    let got = model1.sum_rate_lb_bits(&out1.bf);
    assert!(
        (got - expected).abs() <= 1e-6 * expected,
        "{got} vs {expected}"
    );
}
