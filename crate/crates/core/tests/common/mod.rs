//! Shared builders for the integration tests.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use risbeam::channel::{ChannelStatistics, Geometry, UlaSpec, UpaSpec};
use risbeam::design::DesignModel;
use risbeam::linalg::{CMat, CVec};
use risbeam::metrics::{Beamformers, NoiseModel};

pub fn test_geometry(n: usize, m: usize, k: usize) -> Geometry {
    let users = (0..k)
        .map(|i| [100.0 + 3.0 * i as f64, 2.0 - 2.5 * i as f64])
        .collect();
    Geometry {
        bs_position: [0.0, 0.0],
        ris_position: [80.0, 10.0],
        user_positions: users,
        bs_array: UlaSpec {
            count: n,
            spacing_wl: 0.5,
        },
        ris_array: UpaSpec::auto(m, 0.5),
    }
}

pub fn test_stats(n: usize, m: usize, k: usize, delta: f64) -> ChannelStatistics {
    ChannelStatistics::from_geometry(&test_geometry(n, m, k), 40.0, 3.5, 2.0, delta, 0.0, 0.0, 0.0)
        .unwrap()
}

pub fn test_noise(k: usize) -> NoiseModel {
    NoiseModel::new(1e-11, vec![1e-11; k]).unwrap()
}

pub fn partial_model(n: usize, m: usize, k: usize, delta: f64, seed: u64) -> DesignModel {
    let st = test_stats(n, m, k, delta);
    let real = st.sample(seed);
    DesignModel::partial_csi(&real, &st, &test_noise(k))
}

pub fn random_cmat(r: usize, c: usize, scale: f64, rng: &mut ChaCha8Rng) -> CMat {
    CMat::from_fn(r, c, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
    })
}

pub fn random_hpsd(nn: usize, scale: f64, rng: &mut ChaCha8Rng) -> CMat {
    let a = random_cmat(nn, nn, scale, rng);
    &a * a.adjoint()
}

pub fn random_band_w(m: usize, a_max: f64, rng: &mut ChaCha8Rng) -> CVec {
    CVec::from_fn(m, |_, _| {
        Complex64::from_polar(
            rng.gen_range(1.0..a_max.sqrt()),
            rng.gen_range(0.0..std::f64::consts::TAU),
        )
    })
}

pub fn feasible_bf(model: &DesignModel, p_bs: f64, a_max: f64, rng: &mut ChaCha8Rng) -> Beamformers {
    let n = model.num_bs_antennas();
    let k = model.num_users();
    let m = model.num_ris_elements();
    let mut f = random_cmat(n, k, 1.0, rng);
    let scale = (0.8 * p_bs / risbeam::linalg::fro2(&f)).sqrt();
    f *= Complex64::new(scale, 0.0);
    Beamformers::new(f, random_band_w(m, a_max, rng))
}
