//! Quadratic minorizer of the average-sum-rate lower bound.
//!
//! For the expansion point `(F^n, w^n)` and per-user scalars
//! `t_k = wt^H H_k f_k`, `r_k = sum_i |wt^H H_k f_i|^2 + w^H Psi_k w +
//! sigma_k^2`, the bound `ln(1 + |t_k|^2 / (r_k - |t_k|^2))` is minorized by
//!
//! ```text
//!   const_k + 2 Re{a_k wt^H H_k f_k} - b_k (||wt^H H_k F||^2 + w^H Psi_k w)
//! ```
//!
//! with `a_k = t_k^* / (r_k - |t_k|^2)`, `b_k = |t_k|^2 / (r_k (r_k -
//! |t_k|^2))`. The coefficients are exact for the natural-log rate; the
//! outer loop therefore maximizes the sum in nats (a fixed positive scaling
//! of the bits objective, so maximizers and monotonicity carry over).

use num_complex::Complex64;

use crate::design::DesignModel;
use crate::linalg::{cmat_zeros, cvec_zeros, CMat, CVec, RVec};
use crate::metrics::{effective_row, Beamformers};

use super::MmError;

/// Lemma coefficients and the assembled quadratic forms of both subproblems.
#[derive(Debug, Clone)]
pub struct SurrogateState {
    pub a: Vec<Complex64>,
    pub b: Vec<f64>,
    pub constants: Vec<f64>,
    pub t: Vec<Complex64>,
    pub r: Vec<f64>,
    /// F-subproblem: `2 Re Tr{C_F^H F} - Tr{F^H A_F F}` (+ const_f).
    pub a_f: CMat,
    pub c_f: CMat,
    pub const_f: f64,
    /// RIS-power quadratic in F at the expansion w.
    pub d_f: CMat,
    /// w-subproblem: `2 Re{w^H c_w} - w^H A_w w` (+ const_w).
    pub a_w: CMat,
    pub c_w: CVec,
    pub const_w: f64,
    /// RIS-power quadratic in w at the expansion F (diagonal).
    pub d_w: RVec,
    /// `sigma_z^2 ||w||^2` at the expansion point.
    pub ris_noise_floor: f64,
}

pub fn surrogate_coeffs(bf: &Beamformers, model: &DesignModel) -> Result<SurrogateState, MmError> {
    let k_users = model.num_users();
    let n = model.num_bs_antennas();
    let m = model.num_ris_elements();

    let mut a = Vec::with_capacity(k_users);
    let mut b = Vec::with_capacity(k_users);
    let mut t = Vec::with_capacity(k_users);
    let mut r = Vec::with_capacity(k_users);
    let mut constants = Vec::with_capacity(k_users);

    let mut a_f = cmat_zeros(n, n);
    let mut c_f = cmat_zeros(n, k_users);
    let mut a_w = cmat_zeros(m, m);
    let mut c_w = cvec_zeros(m);
    let mut const_extra_w = 0.0;
    let mut psi_quad_sum = 0.0;

    let w_gains: Vec<f64> = bf.w.iter().map(|z| z.norm_sqr()).collect();

    for k in 0..k_users {
        // hw = H_k^H wt, so wt^H H_k f = hw^H f.
        let hw = effective_row(&model.h_stack[k], &bf.w);
        let mut q = Vec::with_capacity(k_users);
        for i in 0..k_users {
            q.push(hw.dotc(&bf.f.column(i)));
        }
        let psi_term: f64 = model.psi[k]
            .iter()
            .zip(w_gains.iter())
            .map(|(p, g)| p * g)
            .sum();
        let tk = q[k];
        let rk = q.iter().map(|z| z.norm_sqr()).sum::<f64>()
            + psi_term
            + model.noise.sigma_k_sq[k];
        let den = rk - tk.norm_sqr();
        if !(den > 0.0) {
            return Err(MmError::DegenerateExpansion { user: k });
        }
        let ak = tk.conj() / den;
        let bk = tk.norm_sqr() / (rk * den);
        let rate_nats = (1.0 + tk.norm_sqr() / den).ln();
        let ck = rate_nats - bk * (model.noise.sigma_k_sq[k] + rk);

        a_f += (&hw * hw.adjoint()) * Complex64::new(bk, 0.0);
        let col = &hw * ak.conj();
        c_f.column_mut(k).copy_from(&col);

        if m > 0 {
            let gf = &model.g[k] * &bf.f; // M x K
            let gfk: CVec = gf.column(k).into();
            // F F^H h_k through the already-formed products.
            let fh = bf.f.ad_mul(&CMat::from_column_slice(n, 1, model.h_direct[k].as_slice())); // K x 1 = F^H h_k
            let ffh_h: CVec = (&bf.f * &fh).column(0).into();
            let g_ffh_h: CVec = (&model.g[k]
                * CMat::from_column_slice(n, 1, ffh_h.as_slice()))
            .column(0)
            .into();
            c_w += &gfk * ak - &g_ffh_h * Complex64::new(bk, 0.0);
            a_w += (&gf * gf.adjoint()) * Complex64::new(bk, 0.0);
            for i in 0..m {
                a_w[(i, i)] += Complex64::new(bk * model.psi[k][i], 0.0);
            }
        }

        // const_w bookkeeping: 2 Re{a_k h_k^H f_k} - b_k h_k^H F F^H h_k.
        let hf = bf
            .f
            .ad_mul(&CMat::from_column_slice(n, 1, model.h_direct[k].as_slice())); // F^H h_k
        let hfk = hf[(k, 0)].conj(); // h_k^H f_k
        const_extra_w += 2.0 * (ak * hfk).re;
        let hffh: f64 = hf.iter().map(|z| z.norm_sqr()).sum();
        const_extra_w -= bk * hffh;

        psi_quad_sum += bk * psi_term;

        a.push(ak);
        b.push(bk);
        t.push(tk);
        r.push(rk);
        constants.push(ck);
    }

    let const_sum: f64 = constants.iter().sum();
    let d_f = model.power.d_f(&bf.w);
    let d_w = model.power.d_w_diag(&bf.f);
    Ok(SurrogateState {
        a,
        b,
        constants,
        t,
        r,
        a_f,
        c_f,
        const_f: const_sum - psi_quad_sum,
        d_f,
        a_w,
        c_w,
        const_w: const_sum + const_extra_w,
        d_w,
        ris_noise_floor: model.power.sigma_z_sq * bf.w.norm_squared(),
    })
}

impl SurrogateState {
    /// Full surrogate value (nats) at arbitrary `(F, w)`.
    pub fn value(&self, bf: &Beamformers, model: &DesignModel) -> f64 {
        let w_gains: Vec<f64> = bf.w.iter().map(|z| z.norm_sqr()).collect();
        let mut total = 0.0;
        for k in 0..model.num_users() {
            let hw = effective_row(&model.h_stack[k], &bf.w);
            let mut quad = 0.0;
            let mut lin = Complex64::new(0.0, 0.0);
            for i in 0..model.num_users() {
                let qi = hw.dotc(&bf.f.column(i));
                quad += qi.norm_sqr();
                if i == k {
                    lin = qi;
                }
            }
            let psi_term: f64 = model.psi[k]
                .iter()
                .zip(w_gains.iter())
                .map(|(p, g)| p * g)
                .sum();
            total += self.constants[k] + 2.0 * (self.a[k] * lin).re
                - self.b[k] * (quad + psi_term);
        }
        total
    }

    /// Quadratic part of the F-subproblem objective.
    pub fn f_quad_value(&self, f: &CMat) -> f64 {
        let lin = 2.0 * crate::linalg::inner_re(&self.c_f, f);
        let quad = f.ad_mul(&(&self.a_f * f)).trace().re;
        lin - quad
    }

    /// Quadratic part of the w-subproblem objective.
    pub fn w_quad_value(&self, w: &CVec) -> f64 {
        let lin = 2.0 * w.dotc(&self.c_w).re;
        let aw = &self.a_w * CMat::from_column_slice(w.len(), 1, w.as_slice());
        let quad = w.dotc(&aw.column(0)).re;
        lin - quad
    }

    /// RIS transmit power as a function of F with w at the expansion point.
    pub fn ris_power_of_f(&self, f: &CMat) -> f64 {
        f.ad_mul(&(&self.d_f * f)).trace().re + self.ris_noise_floor
    }

    /// RIS transmit power as a function of w with F at the expansion point.
    pub fn ris_power_of_w(&self, w: &CVec) -> f64 {
        self.d_w
            .iter()
            .zip(w.iter())
            .map(|(d, z)| d * z.norm_sqr())
            .sum()
    }
}
