//! Closed-form performance functionals: instantaneous rates, the average-rate
//! lower bound, average RIS transmit power and the total power-consumption
//! model.
//!
//! Convention for the reflection vector: `w` stores the optimization vector
//! of the quadratic forms, whose m-th *physical* reflection multiplier is
//! `conj(w_m)` (gain `|w_m|^2` either way). With the stacked per-user channel
//! `H_k = [G_k; h_k^H]` and `wt = [w; 1]`, the effective downlink row is
//! `wt^H H_k = h_k^H + h_{r,k}^H Diag(conj(w)) H_dr`, which matches the
//! direct-evaluation route; both are implemented and tested against each
//! other.

use num_complex::Complex64;
use thiserror::Error;

use crate::channel::{ChannelRealization, ChannelStatistics};
use crate::linalg::{cmat_zeros, fro2, CMat, CVec, RVec};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("noise power must be strictly positive ({0})")]
    NonPositiveNoise(f64),
}

/// BS precoder and RIS reflection vector.
#[derive(Debug, Clone)]
pub struct Beamformers {
    /// N x K precoder, column k serves user k.
    pub f: CMat,
    /// Reflection vector, length M. Physical multiplier of element m is
    /// `conj(w_m)`; all constraints involve `|w_m|^2` only.
    pub w: CVec,
}

impl Beamformers {
    pub fn new(f: CMat, w: CVec) -> Self {
        Beamformers { f, w }
    }

    pub fn bs_power(&self) -> f64 {
        fro2(&self.f)
    }

    /// `1 <= |w_m|^2 <= a_max` within tolerance.
    pub fn modulus_band_ok(&self, a_max: f64, tol: f64) -> bool {
        self.w.iter().all(|z| {
            let g = z.norm_sqr();
            g >= 1.0 - tol && g <= a_max * (1.0 + tol)
        })
    }
}

#[derive(Debug, Clone)]
pub struct NoiseModel {
    /// RIS thermal noise power (watts); zero only for passive surfaces.
    pub sigma_z_sq: f64,
    /// Per-user receiver noise power (watts).
    pub sigma_k_sq: Vec<f64>,
}

impl NoiseModel {
    pub fn new(sigma_z_sq: f64, sigma_k_sq: Vec<f64>) -> Result<Self, MetricsError> {
        if sigma_z_sq < 0.0 {
            return Err(MetricsError::NonPositiveNoise(sigma_z_sq));
        }
        for &s in &sigma_k_sq {
            if s <= 0.0 {
                return Err(MetricsError::NonPositiveNoise(s));
            }
        }
        Ok(NoiseModel {
            sigma_z_sq,
            sigma_k_sq,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PowerModel {
    /// BS transmit budget P_N (watts).
    pub p_bs_tx: f64,
    /// RIS average transmit budget P_M (watts).
    pub p_ris_tx: f64,
    /// Maximum amplification gain (linear).
    pub a_max: f64,
    /// Phase-shifter/control circuit power per RIS element (watts).
    pub p_c: f64,
    /// DC biasing power per active RIS element (watts).
    pub p_dc: f64,
    /// Circuit power per BS RF chain (watts).
    pub p_rf: f64,
}

impl PowerModel {
    pub fn validate(&self) -> Result<(), MetricsError> {
        let vals = [
            self.p_bs_tx,
            self.p_ris_tx,
            self.p_c,
            self.p_dc,
            self.p_rf,
        ];
        if vals.iter().any(|v| *v < 0.0) || self.a_max < 1.0 {
            return Err(MetricsError::Dimension(
                "power-model entries must be nonnegative with a_max >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RisMode {
    Active,
    Passive,
    None,
}

/// `wt = [w; 1]`.
pub fn w_tilde(w: &CVec) -> CVec {
    let m = w.len();
    let mut wt = CVec::from_element(m + 1, Complex64::new(1.0, 0.0));
    wt.rows_mut(0, m).copy_from(w);
    wt
}

/// Row vector `wt^H H_k` as a length-N column (conjugated entries).
pub fn effective_row(h_stack_k: &CMat, w: &CVec) -> CVec {
    let wt = w_tilde(w);
    h_stack_k.ad_mul(&wt).column(0).into()
}

/// Instantaneous per-user rates (bits/s/Hz) from the raw channels.
pub fn instantaneous_rate(
    bf: &Beamformers,
    real: &ChannelRealization,
    noise: &NoiseModel,
) -> Vec<f64> {
    let k_users = real.num_users();
    let m = real.num_ris_elements();
    let mut rates = Vec::with_capacity(k_users);
    for k in 0..k_users {
        // h_k^H + h_{r,k}^H Diag(conj(w)) H_dr, one scalar at a time.
        let n = real.num_bs_antennas();
        let mut row = CVec::from_element(n, Complex64::new(0.0, 0.0));
        for j in 0..n {
            let mut acc = real.h_direct[k][j].conj();
            for i in 0..m {
                acc += real.h_r[k][i].conj() * bf.w[i].conj() * real.h_dr[(i, j)];
            }
            row[j] = acc;
        }
        let mut sig = 0.0;
        let mut interf = 0.0;
        for i in 0..bf.f.ncols() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                s += row[j] * bf.f[(j, i)];
            }
            if i == k {
                sig = s.norm_sqr();
            } else {
                interf += s.norm_sqr();
            }
        }
        let mut amp_noise = 0.0;
        for i in 0..m {
            amp_noise += real.h_r[k][i].norm_sqr() * bf.w[i].norm_sqr();
        }
        let den = interf + noise.sigma_z_sq * amp_noise + noise.sigma_k_sq[k];
        rates.push((1.0 + sig / den).log2());
    }
    rates
}

/// Same rates through the stacked form `wt^H H_k`, exposed so the two
/// algebraic routes can be cross-checked.
pub fn instantaneous_rate_stacked(
    bf: &Beamformers,
    h_stack: &[CMat],
    h_r: &[CVec],
    noise: &NoiseModel,
) -> Vec<f64> {
    let mut rates = Vec::with_capacity(h_stack.len());
    for (k, hk) in h_stack.iter().enumerate() {
        let row = effective_row(hk, &bf.w);
        let q = bf.f.ad_mul(&CMat::from_column_slice(row.len(), 1, row.as_slice()));
        let mut sig = 0.0;
        let mut interf = 0.0;
        for i in 0..bf.f.ncols() {
            let p = q[(i, 0)].norm_sqr();
            if i == k {
                sig = p;
            } else {
                interf += p;
            }
        }
        let amp: f64 = h_r[k]
            .iter()
            .zip(bf.w.iter())
            .map(|(h, w)| h.norm_sqr() * w.norm_sqr())
            .sum();
        let den = interf + noise.sigma_z_sq * amp + noise.sigma_k_sq[k];
        rates.push((1.0 + sig / den).log2());
    }
    rates
}

/// Diagonal of `Psi_k = (beta_k sigma_z^2 / (delta_k+1)) (delta_k
/// Diag(hbar o hbar*) + I)`.
pub fn psi_diag(stats: &ChannelStatistics, k: usize, sigma_z_sq: f64) -> RVec {
    let scale = stats.beta_ris_user[k] * sigma_z_sq / (stats.delta_ris_user[k] + 1.0);
    RVec::from_fn(stats.num_ris_elements(), |m, _| {
        scale * (stats.delta_ris_user[k] * stats.hbar_r[k][m].norm_sqr() + 1.0)
    })
}

/// `Psi_k` as a (diagonal) matrix.
pub fn psi_matrix(stats: &ChannelStatistics, k: usize, sigma_z_sq: f64) -> CMat {
    let d = psi_diag(stats, k, sigma_z_sq);
    let mut m = cmat_zeros(d.len(), d.len());
    for i in 0..d.len() {
        m[(i, i)] = Complex64::new(d[i], 0.0);
    }
    m
}

/// Per-user average-rate lower bound (bits/s/Hz).
pub fn average_rate_lb(
    bf: &Beamformers,
    h_stack: &[CMat],
    psi: &[RVec],
    noise: &NoiseModel,
) -> Vec<f64> {
    average_rate_lb_sinr(bf, h_stack, psi, noise)
        .into_iter()
        .map(|s| (1.0 + s).log2())
        .collect()
}

/// SINR values inside the lower bound, shared by the bits/nats views.
pub fn average_rate_lb_sinr(
    bf: &Beamformers,
    h_stack: &[CMat],
    psi: &[RVec],
    noise: &NoiseModel,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(h_stack.len());
    for (k, hk) in h_stack.iter().enumerate() {
        let row = effective_row(hk, &bf.w);
        let mut sig = 0.0;
        let mut interf = 0.0;
        for i in 0..bf.f.ncols() {
            let p = row.dotc(&bf.f.column(i)).norm_sqr();
            if i == k {
                sig = p;
            } else {
                interf += p;
            }
        }
        let psi_term: f64 = psi[k]
            .iter()
            .zip(bf.w.iter())
            .map(|(p, w)| p * w.norm_sqr())
            .sum();
        out.push(sig / (interf + psi_term + noise.sigma_k_sq[k]));
    }
    out
}

pub fn sum_rate_lb_bits(
    bf: &Beamformers,
    h_stack: &[CMat],
    psi: &[RVec],
    noise: &NoiseModel,
) -> f64 {
    average_rate_lb(bf, h_stack, psi, noise).iter().sum()
}

/// `E{H X H^H} = Hbar X Hbar^H + Tr{X Sigma_t} Sigma_r` for
/// `H ~ CN(Hbar, Sigma_r (x) Sigma_t)`.
pub fn lemma1_expectation(
    hbar: &CMat,
    sigma_r: &CMat,
    sigma_t: &CMat,
    x: &CMat,
) -> Result<CMat, MetricsError> {
    let n = hbar.ncols();
    if x.nrows() != n || x.ncols() != n || sigma_t.nrows() != n || sigma_r.nrows() != hbar.nrows() {
        return Err(MetricsError::Dimension(format!(
            "lemma1 expects X,Sigma_t of side {n} and Sigma_r of side {}",
            hbar.nrows()
        )));
    }
    let tr = (x * sigma_t).trace();
    Ok(hbar * x * hbar.adjoint() + sigma_r * tr)
}

/// The matrix `Q` of the average RIS power, `E{H_dr F F^H H_dr^H}`.
pub fn ris_power_q(stats: &ChannelStatistics, f: &CMat) -> CMat {
    let c_los = stats.beta_bs_ris * stats.delta_bs_ris / (stats.delta_bs_ris + 1.0);
    let c_nlos = stats.beta_bs_ris / (stats.delta_bs_ris + 1.0);
    let ffh = f * f.adjoint();
    let tr = (&ffh * &stats.sigma_bs).trace();
    &stats.hbar_dr * &ffh * stats.hbar_dr.adjoint() * Complex64::new(c_los, 0.0)
        + &stats.sigma_ris * (tr * c_nlos)
}

/// Average RIS transmit power `Tr{Diag(|w|^2) Q} + ||w||^2 sigma_z^2`.
pub fn average_ris_power(bf: &Beamformers, stats: &ChannelStatistics, noise: &NoiseModel) -> f64 {
    let q = ris_power_q(stats, &bf.f);
    let mut acc = 0.0;
    let mut w2 = 0.0;
    for m in 0..bf.w.len() {
        let g = bf.w[m].norm_sqr();
        acc += g * q[(m, m)].re;
        w2 += g;
    }
    acc + w2 * noise.sigma_z_sq
}

/// Total power consumption for the three deployment modes.
pub fn total_power_consumption(
    bf: &Beamformers,
    stats: &ChannelStatistics,
    noise: &NoiseModel,
    pm: &PowerModel,
    mode: RisMode,
) -> f64 {
    let n = bf.f.nrows() as f64;
    let m = bf.w.len() as f64;
    match mode {
        RisMode::Active => {
            bf.bs_power()
                + average_ris_power(bf, stats, noise)
                + m * (pm.p_c + pm.p_dc)
                + n * pm.p_rf
        }
        RisMode::Passive => bf.bs_power() + m * pm.p_c + n * pm.p_rf,
        RisMode::None => bf.bs_power() + n * pm.p_rf,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::tests_support::small_stats;
    use crate::linalg::cvec_zeros;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn random_bf(n: usize, m: usize, k: usize, seed: u64) -> Beamformers {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = CMat::from_fn(n, k, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let w = CVec::from_fn(m, |_, _| {
            Complex64::from_polar(rng.gen_range(1.0..2.0), rng.gen_range(0.0..6.28))
        });
        Beamformers::new(f, w)
    }

    fn noise(k: usize) -> NoiseModel {
        NoiseModel::new(1e-11, vec![1e-11; k]).unwrap()
    }

    #[test]
    fn rate_reduces_without_ris() {
        let stats = small_stats(3, 4, 1);
        let real = stats.sample(1);
        let mut bf = random_bf(3, 4, 1, 2);
        bf.w = cvec_zeros(4);
        let r = instantaneous_rate(&bf, &real, &noise(1));
        let f0: CVec = bf.f.column(0).into();
        let expected =
            (1.0 + real.h_direct[0].dotc(&f0).norm_sqr() / 1e-11).log2();
        assert_relative_eq!(r[0], expected, epsilon = 1e-12);
    }

    #[test]
    fn rate_is_zero_for_zero_precoder() {
        let stats = small_stats(2, 3, 2);
        let real = stats.sample(5);
        let mut bf = random_bf(2, 3, 2, 6);
        bf.f.fill(Complex64::new(0.0, 0.0));
        for r in instantaneous_rate(&bf, &real, &noise(2)) {
            assert_eq!(r, 0.0);
        }
    }

    #[test]
    fn raw_and_stacked_routes_agree() {
        let stats = small_stats(2, 2, 2);
        let real = stats.sample(10);
        let bf = random_bf(2, 2, 2, 11);
        let nz = noise(2);
        let a = instantaneous_rate(&bf, &real, &nz);
        let b = instantaneous_rate_stacked(&bf, &real.stacked_all(), &real.h_r, &nz);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn psi_reductions() {
        let mut stats = small_stats(2, 3, 1);
        // Steering-vector LoS has |hbar| = 1, so both terms are proportional
        // to the identity regardless of delta.
        let d = psi_diag(&stats, 0, 2.0);
        let scale = stats.beta_ris_user[0] * 2.0 / (stats.delta_ris_user[0] + 1.0);
        for v in d.iter() {
            assert_relative_eq!(*v, scale * (stats.delta_ris_user[0] + 1.0), epsilon = 1e-15);
        }
        // delta = 0 -> beta sigma_z^2 I
        stats.delta_ris_user[0] = 0.0;
        let d = psi_diag(&stats, 0, 2.0);
        for v in d.iter() {
            assert_relative_eq!(*v, stats.beta_ris_user[0] * 2.0, epsilon = 1e-18);
        }
        // beta = 0 -> zero matrix
        stats.beta_ris_user[0] = 0.0;
        assert!(psi_diag(&stats, 0, 2.0).iter().all(|v| *v == 0.0));
        let pm = psi_matrix(&stats, 0, 2.0);
        assert!(pm.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn lower_bound_equals_rate_without_ris_noise() {
        let stats = small_stats(2, 3, 2);
        let real = stats.sample(21);
        let bf = random_bf(2, 3, 2, 22);
        let nz = NoiseModel::new(0.0, vec![1e-11; 2]).unwrap();
        let psi: Vec<RVec> = (0..2).map(|k| psi_diag(&stats, k, 0.0)).collect();
        let lb = average_rate_lb(&bf, &real.stacked_all(), &psi, &nz);
        let inst = instantaneous_rate(&bf, &real, &nz);
        for (x, y) in lb.iter().zip(inst.iter()) {
            assert_relative_eq!(*x, *y, epsilon = 1e-12);
        }
    }

    #[test]
    fn lower_bound_k1_isotropic_psi() {
        let stats = small_stats(2, 3, 1);
        let real = stats.sample(31);
        let bf = random_bf(2, 3, 1, 32);
        let c = 0.5e-11;
        let psi = vec![RVec::from_element(3, c)];
        let nz = noise(1);
        let lb = average_rate_lb(&bf, &real.stacked_all(), &psi, &nz)[0];
        let row = effective_row(&real.stacked(0), &bf.w);
        let f0: CVec = bf.f.column(0).into();
        let sig = row.dotc(&f0).norm_sqr();
        let den = c * bf.w.norm_squared() + 1e-11;
        assert_relative_eq!(lb, (1.0 + sig / den).log2(), epsilon = 1e-12);
    }

    #[test]
    fn ris_power_trivial_cases() {
        let stats = small_stats(2, 3, 1);
        let nz = noise(1);
        let mut bf = random_bf(2, 3, 1, 41);
        bf.w = cvec_zeros(3);
        assert_eq!(average_ris_power(&bf, &stats, &nz), 0.0);
        let mut bf = random_bf(2, 3, 1, 42);
        bf.f.fill(Complex64::new(0.0, 0.0));
        assert_relative_eq!(
            average_ris_power(&bf, &stats, &nz),
            bf.w.norm_squared() * nz.sigma_z_sq,
            epsilon = 1e-25
        );
    }

    #[test]
    fn lemma1_trivial_cases() {
        let m = 4;
        let n = 3;
        let zero = cmat_zeros(m, n);
        let out = lemma1_expectation(
            &zero,
            &CMat::identity(m, m),
            &CMat::identity(n, n),
            &CMat::identity(n, n),
        )
        .unwrap();
        let expected = CMat::identity(m, m) * Complex64::new(n as f64, 0.0);
        assert!((out - expected).norm() < 1e-14);

        let stats = small_stats(n, m, 1);
        let out = lemma1_expectation(
            &stats.hbar_dr,
            &stats.sigma_ris,
            &CMat::identity(n, n),
            &CMat::identity(n, n),
        )
        .unwrap();
        let expected =
            &stats.hbar_dr * stats.hbar_dr.adjoint() + &stats.sigma_ris * Complex64::new(n as f64, 0.0);
        assert!((out - expected).norm() < 1e-12);

        assert!(lemma1_expectation(
            &zero,
            &CMat::identity(m, m),
            &CMat::identity(n, n),
            &CMat::identity(n + 1, n + 1)
        )
        .is_err());
    }

    #[test]
    fn total_power_modes() {
        let stats = small_stats(8, 32, 1);
        let nz = noise(1);
        let pm = PowerModel {
            p_bs_tx: 1.0,
            p_ris_tx: 0.1,
            a_max: 1e4,
            p_c: 1e-4,
            p_dc: 3.16e-4,
            p_rf: 0.2,
        };
        // mode = none with ||F||^2 = 1, N = 8, P_RF = 0.2 -> 2.6 W
        let mut f = cmat_zeros(8, 1);
        f[(0, 0)] = Complex64::new(1.0, 0.0);
        let bf = Beamformers::new(f, cvec_zeros(32));
        assert_relative_eq!(
            total_power_consumption(&bf, &stats, &nz, &pm, RisMode::None),
            2.6,
            epsilon = 1e-12
        );
        // passive adds M * P_c
        assert_relative_eq!(
            total_power_consumption(&bf, &stats, &nz, &pm, RisMode::Passive)
                - total_power_consumption(&bf, &stats, &nz, &pm, RisMode::None),
            32.0 * 1e-4,
            epsilon = 1e-12
        );
        // active with F = 0, w = 0 -> circuit-only floor
        let bf0 = Beamformers::new(cmat_zeros(8, 1), cvec_zeros(32));
        assert_relative_eq!(
            total_power_consumption(&bf0, &stats, &nz, &pm, RisMode::Active),
            32.0 * (1e-4 + 3.16e-4) + 8.0 * 0.2,
            epsilon = 1e-12
        );
    }
}
