//! Reflection subproblem: maximize `2 Re{w^H c_w} - w^H A_w w` over the
//! modulus band `1 <= |w_m|^2 <= a_max` and the RIS power ball
//! `w^H D_w w <= P_M`, via ADMM with an auxiliary copy `u` carrying the band
//! constraint. The w-step is the KKT solution
//! `(A_w + gamma D_w + zeta I)^{-1} (c_w - zeta (eta - u))` with `gamma`
//! found by bisection on the monotone power profile `g_w`.

use num_complex::Complex64;

use crate::linalg::{solve_hpd_vec, CMat, CVec, RVec};

use super::{MmConfig, MmError};

#[derive(Debug, Clone)]
pub struct AdmmOutcome {
    pub w: CVec,
    pub iters: usize,
    pub final_residual: f64,
}

/// Spectral workspace for the w-step: with `B = D^{-1/2}(A_w + zeta I)
/// D^{-1/2} = V diag(lam) V^H`, the step is
/// `w(gamma) = D^{-1/2} V (lam + gamma)^{-1} V^H D^{-1/2} q` and
/// `g_w(gamma) = sum |p_i|^2 / (lam_i + gamma)^2`, `p = V^H D^{-1/2} q`.
struct WStep {
    d_inv_sqrt: RVec,
    v: CMat,
    lam: RVec,
}

impl WStep {
    fn new(a_w: &CMat, zeta: f64, d_w: &RVec) -> Self {
        let m = a_w.nrows();
        let d_inv_sqrt = RVec::from_fn(m, |i, _| 1.0 / d_w[i].sqrt());
        let mut b = a_w.clone();
        for i in 0..m {
            b[(i, i)] += Complex64::new(zeta, 0.0);
            for j in 0..m {
                b[(i, j)] *= Complex64::new(d_inv_sqrt[i] * d_inv_sqrt[j], 0.0);
            }
        }
        let eig = b.symmetric_eigen();
        WStep {
            d_inv_sqrt,
            v: eig.eigenvectors,
            lam: eig.eigenvalues,
        }
    }

    fn transform(&self, q: &CVec) -> CVec {
        let m = q.len();
        let dq = CVec::from_fn(m, |i, _| q[i] * self.d_inv_sqrt[i]);
        self.v.ad_mul(&CMat::from_column_slice(m, 1, dq.as_slice())).column(0).into()
    }

    fn power(&self, p: &CVec, gamma: f64) -> f64 {
        p.iter()
            .zip(self.lam.iter())
            .map(|(pi, li)| pi.norm_sqr() / ((li + gamma) * (li + gamma)))
            .sum()
    }

    fn solve(&self, p: &CVec, gamma: f64) -> CVec {
        let m = p.len();
        let scaled = CVec::from_fn(m, |i, _| p[i] / (self.lam[i] + gamma));
        let y: CVec = (&self.v * CMat::from_column_slice(m, 1, scaled.as_slice()))
            .column(0)
            .into();
        CVec::from_fn(m, |i, _| y[i] * self.d_inv_sqrt[i])
    }
}

fn clamp_modulus(v: &CVec, lo: f64, hi: f64) -> CVec {
    CVec::from_fn(v.len(), |i, _| {
        let r = v[i].norm().clamp(lo, hi);
        let phase = if v[i].norm() == 0.0 { 0.0 } else { v[i].arg() };
        Complex64::from_polar(r, phase)
    })
}

pub fn ris_power_of(w: &CVec, d_w: &RVec) -> f64 {
    w.iter()
        .zip(d_w.iter())
        .map(|(z, d)| z.norm_sqr() * d)
        .sum()
}

/// `g_w(gamma) = w(gamma)^H D_w w(gamma)` for the ADMM w-step at the given
/// multipliers; exposed for the monotonicity and bracket checks.
pub fn w_step_power_profile(
    a_w: &CMat,
    zeta: f64,
    d_w: &RVec,
    q: &CVec,
    gammas: &[f64],
) -> Vec<f64> {
    let sp = WStep::new(a_w, zeta, d_w);
    let p = sp.transform(q);
    gammas.iter().map(|g| sp.power(&p, *g)).collect()
}

/// The paper's bisection bracket `gamma_1 = sqrt(q^H D^{-1} q / P_M)`.
pub fn w_step_gamma_bracket(d_w: &RVec, q: &CVec, p_m: f64) -> f64 {
    let qd: f64 = q
        .iter()
        .zip(d_w.iter())
        .map(|(z, d)| z.norm_sqr() / d)
        .sum();
    (qd / p_m).sqrt()
}

/// Elementwise modulus clamp onto `[lo, hi]`, phases preserved.
pub fn clamp_modulus_band(v: &CVec, lo: f64, hi: f64) -> CVec {
    clamp_modulus(v, lo, hi)
}

#[allow(clippy::too_many_arguments)]
pub fn solve_reflection_admm(
    a_w: &CMat,
    c_w: &CVec,
    d_w: &RVec,
    p_m: Option<f64>,
    a_max: f64,
    w_init: &CVec,
    cfg: &MmConfig,
) -> Result<AdmmOutcome, MmError> {
    let m = a_w.nrows();
    let hi = a_max.sqrt();
    let feas_tol = 1e-9;
    for z in w_init.iter() {
        let g = z.norm_sqr();
        if g < 1.0 - feas_tol || g > a_max * (1.0 + feas_tol) {
            return Err(MmError::InfeasibleInit(format!(
                "initial reflection gain {g:.6} outside [1, {a_max}]"
            )));
        }
    }
    if let Some(pm) = p_m {
        let p0 = ris_power_of(w_init, d_w);
        if p0 > pm * (1.0 + 1e-6) {
            return Err(MmError::InfeasibleInit(format!(
                "initial RIS power {p0:.3e} exceeds budget {pm:.3e}"
            )));
        }
    }

    let zeta = cfg
        .admm_penalty
        .unwrap_or_else(|| 1.0 + a_w.diagonal().iter().map(|z| z.re).sum::<f64>() / m as f64);
    let spectral = p_m.map(|_| WStep::new(a_w, zeta, d_w));
    // Without a power budget the w-step matrix is constant.
    let plain = if p_m.is_none() {
        let mut mm = a_w.clone();
        for i in 0..m {
            mm[(i, i)] += Complex64::new(zeta, 0.0);
        }
        Some(mm)
    } else {
        None
    };

    let mut u = w_init.clone();
    let mut eta = crate::linalg::cvec_zeros(m);
    let stop = cfg.admm_tol * (m as f64).sqrt();
    let mut residual = f64::INFINITY;
    for iter in 0..cfg.admm_max_iters {
        let u_prev = u.clone();
        let q: CVec = c_w - (&eta - &u) * Complex64::new(zeta, 0.0);
        let w = match (&spectral, &plain) {
            (Some(sp), _) => {
                let p = sp.transform(&q);
                let pm = p_m.unwrap();
                let g0 = sp.power(&p, 0.0);
                if g0 <= pm {
                    sp.solve(&p, 0.0)
                } else {
                    // Bracket from the paper: g_w(gamma_1) < P_M with
                    // gamma_1 = sqrt(q^H D^{-1} q / P_M).
                    let qd: f64 = q
                        .iter()
                        .zip(d_w.iter())
                        .map(|(z, d)| z.norm_sqr() / d)
                        .sum();
                    let gamma1 = (qd / pm).sqrt();
                    let mut lo = 0.0;
                    let mut hi_g = gamma1;
                    // Feasible side (g <= P_M) unless bisection hits the
                    // tolerance band first.
                    let mut gamma = gamma1;
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi_g);
                        let g = sp.power(&p, mid);
                        if (g - pm).abs() <= cfg.bisection_tol * pm {
                            gamma = mid;
                            break;
                        }
                        if g > pm {
                            lo = mid;
                        } else {
                            hi_g = mid;
                            gamma = mid;
                        }
                        if hi_g - lo <= f64::EPSILON * (1.0 + gamma1) {
                            break;
                        }
                    }
                    sp.solve(&p, gamma)
                }
            }
            (_, Some(mm)) => solve_hpd_vec(mm, &q),
            _ => unreachable!(),
        };
        let u_new = clamp_modulus(&(&w + &eta), 1.0, hi);
        eta += &w - &u_new;
        residual = (&w - &u_new).norm();
        u = u_new;
        // Primal consensus alone is not enough: u tracks w instantly while
        // eta is still moving, so the dual residual must settle too.
        let dual_residual = (&u - &u_prev).norm();
        if residual <= stop && dual_residual <= stop {
            let mut out = u;
            if let Some(pm) = p_m {
                if ris_power_of(&out, d_w) > pm * (1.0 + 1e-8) {
                    out = project_reflection(&out, pm, a_max, d_w)?;
                }
            }
            return Ok(AdmmOutcome {
                w: out,
                iters: iter + 1,
                final_residual: residual,
            });
        }
    }
    Err(MmError::AdmmMaxIters {
        iters: cfg.admm_max_iters,
        residual,
    })
}

/// Exact projection onto the reflection constraint set. Both constraints are
/// phase-invariant and `D_w` is diagonal, so the projection keeps the phases
/// of `x` and reduces to a scalar multiplier search over the clamped moduli
/// `rho_m(lambda) = clamp(|x_m| / (1 + lambda d_m), 1, sqrt(a_max))`.
pub fn project_reflection(
    x: &CVec,
    p_m: f64,
    a_max: f64,
    d_w: &RVec,
) -> Result<CVec, MmError> {
    let m = x.len();
    let hi = a_max.sqrt();
    let floor_power: f64 = d_w.iter().sum();
    if floor_power > p_m * (1.0 + 1e-12) {
        return Err(MmError::EmptyFeasibleSet {
            needed: floor_power,
            budget: p_m,
        });
    }
    let mods: Vec<f64> = x.iter().map(|z| z.norm()).collect();
    let power_at = |lambda: f64| -> f64 {
        mods.iter()
            .zip(d_w.iter())
            .map(|(xm, d)| {
                let r = (xm / (1.0 + lambda * d)).clamp(1.0, hi);
                d * r * r
            })
            .sum()
    };
    let mut lambda = 0.0;
    if power_at(0.0) > p_m {
        let mut lo = 0.0;
        let mut hi_l = 1.0;
        let mut guard = 0;
        while power_at(hi_l) > p_m && guard < 200 {
            hi_l *= 2.0;
            guard += 1;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi_l);
            if power_at(mid) > p_m {
                lo = mid;
            } else {
                hi_l = mid;
            }
        }
        lambda = hi_l;
    }
    Ok(CVec::from_fn(m, |i, _| {
        let r = (mods[i] / (1.0 + lambda * d_w[i])).clamp(1.0, hi);
        let phase = if mods[i] == 0.0 { 0.0 } else { x[i].arg() };
        Complex64::from_polar(r, phase)
    }))
}
