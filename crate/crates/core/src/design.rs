//! Design-time view of the channel handed to the optimizers.
//!
//! The optimizers never see hidden truth directly; they work from the known
//! per-user channels (`G_k`, `h_k`), the noise-amplification diagonals
//! `Psi_k` and the quadratic forms of the average RIS transmit power. The
//! same machinery covers the benchmark designs by swapping what goes into
//! those pieces:
//!
//! - partial CSI (the robust default): statistics-based `Psi_k` and power
//!   quadratics;
//! - perfect CSI: exact per-realization noise term and power forms built
//!   from the hidden truth;
//! - non-robust: NLoS contributions dropped everywhere at design time;
//! - passive / no-RIS: degenerate cases with, respectively, zero RIS noise
//!   and no RIS path at all.

use num_complex::Complex64;

use crate::channel::{ChannelRealization, ChannelStatistics};
use crate::linalg::{cmat_zeros, CMat, CVec, RVec};
use crate::metrics::{self, Beamformers, NoiseModel};

/// Quadratic forms of the average RIS transmit power:
/// `P(F, w) = w^H D_w(F) w = Tr{F^H D_F(w) F} + sigma_z^2 ||w||^2` with
/// `D_F(w) = L^H Diag(|w|^2) L + ||w||^2 S_B` and
/// `D_w(F) = Diag(diag(L F F^H L^H)) + Tr{F^H S_B F} I + sigma_z^2 I`.
#[derive(Debug, Clone)]
pub struct PowerQuadratics {
    /// `L`: scaled LoS (or exact) BS-RIS channel factor, M x N.
    pub los_factor: CMat,
    /// `S_B`: scaled BS-side correlation, N x N (zero under perfect CSI).
    pub sigma_b_scaled: CMat,
    pub sigma_z_sq: f64,
}

impl PowerQuadratics {
    pub fn d_f(&self, w: &CVec) -> CMat {
        let m = self.los_factor.nrows();
        let n = self.los_factor.ncols();
        let mut lam_l = self.los_factor.clone();
        for i in 0..m {
            for j in 0..n {
                lam_l[(i, j)] *= Complex64::new(w[i].norm_sqr(), 0.0);
            }
        }
        self.los_factor.ad_mul(&lam_l) + &self.sigma_b_scaled * Complex64::new(w.norm_squared(), 0.0)
    }

    pub fn d_w_diag(&self, f: &CMat) -> RVec {
        let lf = &self.los_factor * f;
        let tr = metrics_trace_quad(f, &self.sigma_b_scaled);
        RVec::from_fn(self.los_factor.nrows(), |i, _| {
            lf.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>() + tr + self.sigma_z_sq
        })
    }

    /// `P(F, w)` through the w-side quadratic.
    pub fn ris_power(&self, f: &CMat, w: &CVec) -> f64 {
        let d = self.d_w_diag(f);
        d.iter()
            .zip(w.iter())
            .map(|(dm, wm)| dm * wm.norm_sqr())
            .sum()
    }
}

fn metrics_trace_quad(f: &CMat, s: &CMat) -> f64 {
    // Tr{F^H S F}, real for Hermitian S.
    (f.ad_mul(&(s * f))).trace().re
}

/// Everything the optimizers need about one channel draw under a given CSI
/// assumption.
#[derive(Debug, Clone)]
pub struct DesignModel {
    /// Stacked `H_k = [G_k; h_k^H]`, (M+1) x N.
    pub h_stack: Vec<CMat>,
    /// Cascaded channels `G_k`, M x N.
    pub g: Vec<CMat>,
    pub h_direct: Vec<CVec>,
    /// Diagonals of `Psi_k` (length M).
    pub psi: Vec<RVec>,
    pub power: PowerQuadratics,
    pub noise: NoiseModel,
}

impl DesignModel {
    /// Robust partial-CSI model: known `(G_k, h_k)` plus statistics.
    pub fn partial_csi(
        real: &ChannelRealization,
        stats: &ChannelStatistics,
        noise: &NoiseModel,
    ) -> Self {
        let c_los = (stats.beta_bs_ris * stats.delta_bs_ris / (stats.delta_bs_ris + 1.0)).sqrt();
        let c_nlos = stats.beta_bs_ris / (stats.delta_bs_ris + 1.0);
        DesignModel {
            h_stack: real.stacked_all(),
            g: real.g.clone(),
            h_direct: real.h_direct.clone(),
            psi: (0..real.num_users())
                .map(|k| metrics::psi_diag(stats, k, noise.sigma_z_sq))
                .collect(),
            power: PowerQuadratics {
                los_factor: &stats.hbar_dr * Complex64::new(c_los, 0.0),
                sigma_b_scaled: &stats.sigma_bs * Complex64::new(c_nlos, 0.0),
                sigma_z_sq: noise.sigma_z_sq,
            },
            noise: noise.clone(),
        }
    }

    /// Perfect-CSI benchmark: exact noise-amplification diagonal and exact
    /// RIS power built from the hidden truth.
    pub fn perfect_csi(real: &ChannelRealization, noise: &NoiseModel) -> Self {
        let m = real.num_ris_elements();
        DesignModel {
            h_stack: real.stacked_all(),
            g: real.g.clone(),
            h_direct: real.h_direct.clone(),
            psi: (0..real.num_users())
                .map(|k| {
                    RVec::from_fn(m, |i, _| noise.sigma_z_sq * real.h_r[k][i].norm_sqr())
                })
                .collect(),
            power: PowerQuadratics {
                los_factor: real.h_dr.clone(),
                sigma_b_scaled: cmat_zeros(real.num_bs_antennas(), real.num_bs_antennas()),
                sigma_z_sq: noise.sigma_z_sq,
            },
            noise: noise.clone(),
        }
    }

    /// Non-robust benchmark: NLoS statistics ignored at design time
    /// (`Psi_k = 0`, LoS-only power forms).
    pub fn nonrobust(
        real: &ChannelRealization,
        stats: &ChannelStatistics,
        noise: &NoiseModel,
    ) -> Self {
        let mut model = Self::partial_csi(real, stats, noise);
        let m = real.num_ris_elements();
        model.psi = vec![RVec::zeros(m); real.num_users()];
        model.power.sigma_b_scaled =
            cmat_zeros(real.num_bs_antennas(), real.num_bs_antennas());
        model
    }

    /// Passive-RIS benchmark: no amplification noise, no RIS power budget.
    pub fn passive(real: &ChannelRealization, noise: &NoiseModel) -> Self {
        let m = real.num_ris_elements();
        let n = real.num_bs_antennas();
        let quiet = NoiseModel {
            sigma_z_sq: 0.0,
            sigma_k_sq: noise.sigma_k_sq.clone(),
        };
        DesignModel {
            h_stack: real.stacked_all(),
            g: real.g.clone(),
            h_direct: real.h_direct.clone(),
            psi: vec![RVec::zeros(m); real.num_users()],
            power: PowerQuadratics {
                los_factor: cmat_zeros(m, n),
                sigma_b_scaled: cmat_zeros(n, n),
                sigma_z_sq: 0.0,
            },
            noise: quiet,
        }
    }

    /// No-RIS benchmark: the M = 0 degeneration, `H_k = h_k^H`.
    pub fn no_ris(real: &ChannelRealization, noise: &NoiseModel) -> Self {
        let n = real.num_bs_antennas();
        let k = real.num_users();
        let h_stack = (0..k)
            .map(|kk| {
                let mut h = cmat_zeros(1, n);
                for j in 0..n {
                    h[(0, j)] = real.h_direct[kk][j].conj();
                }
                h
            })
            .collect();
        DesignModel {
            h_stack,
            g: vec![cmat_zeros(0, n); k],
            h_direct: real.h_direct.clone(),
            psi: vec![RVec::zeros(0); k],
            power: PowerQuadratics {
                los_factor: cmat_zeros(0, n),
                sigma_b_scaled: cmat_zeros(n, n),
                sigma_z_sq: 0.0,
            },
            noise: NoiseModel {
                sigma_z_sq: 0.0,
                sigma_k_sq: noise.sigma_k_sq.clone(),
            },
        }
    }

    pub fn num_users(&self) -> usize {
        self.h_stack.len()
    }

    pub fn num_ris_elements(&self) -> usize {
        self.g.first().map(|g| g.nrows()).unwrap_or(0)
    }

    pub fn num_bs_antennas(&self) -> usize {
        self.h_stack[0].ncols()
    }

    pub fn sum_rate_lb_bits(&self, bf: &Beamformers) -> f64 {
        metrics::sum_rate_lb_bits(bf, &self.h_stack, &self.psi, &self.noise)
    }

    /// The MM objective: the same sum in natural-log units.
    pub fn sum_rate_lb_nats(&self, bf: &Beamformers) -> f64 {
        metrics::average_rate_lb_sinr(bf, &self.h_stack, &self.psi, &self.noise)
            .iter()
            .map(|s| (1.0 + s).ln())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::tests_support::small_stats;
    use rand::{Rng, SeedableRng};

    fn random_bf(n: usize, m: usize, k: usize, seed: u64) -> Beamformers {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = CMat::from_fn(n, k, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }) * Complex64::new(1e-2, 0.0);
        let w = CVec::from_fn(m, |_, _| {
            Complex64::from_polar(rng.gen_range(1.0..2.0), rng.gen_range(0.0..6.28))
        });
        Beamformers::new(f, w)
    }

    /// Both quadratic factorizations must reproduce the trace form of the
    /// average RIS power.
    #[test]
    fn power_quadratics_match_trace_form() {
        let stats = small_stats(3, 4, 2);
        let real = stats.sample(3);
        let noise = NoiseModel::new(1e-11, vec![1e-11; 2]).unwrap();
        let model = DesignModel::partial_csi(&real, &stats, &noise);
        for seed in 0..10 {
            let bf = random_bf(3, 4, 2, seed);
            let reference = metrics::average_ris_power(&bf, &stats, &noise);
            // w-side: w^H D_w w
            let via_w = model.power.ris_power(&bf.f, &bf.w);
            // F-side: Tr{F^H D_F F} + sigma_z^2 ||w||^2
            let df = model.power.d_f(&bf.w);
            let via_f = (bf.f.ad_mul(&(&df * &bf.f))).trace().re
                + noise.sigma_z_sq * bf.w.norm_squared();
            let scale = reference.abs().max(1e-30);
            assert!((via_w - reference).abs() <= 1e-10 * scale, "{via_w} vs {reference}");
            assert!((via_f - reference).abs() <= 1e-10 * scale, "{via_f} vs {reference}");
        }
    }

    #[test]
    fn no_ris_model_has_empty_ris_dimensions() {
        let stats = small_stats(3, 4, 2);
        let real = stats.sample(5);
        let noise = NoiseModel::new(1e-11, vec![1e-11; 2]).unwrap();
        let model = DesignModel::no_ris(&real, &noise);
        assert_eq!(model.num_ris_elements(), 0);
        let bf = Beamformers::new(
            CMat::from_element(3, 2, Complex64::new(1e-3, 0.0)),
            CVec::zeros(0),
        );
        let lb = model.sum_rate_lb_bits(&bf);
        assert!(lb.is_finite() && lb >= 0.0);
    }
}
