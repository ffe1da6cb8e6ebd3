//! Precoder subproblem: maximize `2 Re Tr{C_F^H F} - Tr{F^H A_F F}` under the
//! BS power budget and the average RIS transmit power budget, solved through
//! the two-multiplier Lagrangian dual with the closed-form inner solution
//! `F(gamma, mu) = (A_F + gamma I + mu D_F)^{-1} C_F`.
//!
//! The concave dual is maximized by a projected Newton ascent with
//! backtracking; the dual Hessian is available in closed form from the same
//! factorization (`dg/dgamma = ||F||_F^2 - P_N` etc., second derivatives are
//! Gram matrices of `(F, D_F F)` under `M^{-1}`), which reaches the tight
//! complementary-slackness tolerances in a handful of iterations where a
//! plain gradient rule stalls.

use num_complex::Complex64;

use crate::linalg::{fro2, solve_hpd, CMat};

use super::{MmConfig, MmError};

#[derive(Debug, Clone)]
pub struct PrecoderSolution {
    pub f: CMat,
    pub gamma: f64,
    pub mu: f64,
    pub dual_iters: usize,
    /// `||(A_F + gamma I + mu D_F) F - C_F||_F`.
    pub kkt_residual: f64,
}

struct DualEval {
    f: CMat,
    value: f64,
    /// (d/dgamma, d/dmu) of the dual.
    grad: [f64; 2],
    /// Negated Hessian (positive semidefinite 2x2).
    neg_hess: [[f64; 2]; 2],
}

fn assemble_m(a_f: &CMat, d_f: &CMat, gamma: f64, mu: f64) -> CMat {
    let n = a_f.nrows();
    let mut m = a_f.clone();
    for i in 0..n {
        m[(i, i)] += Complex64::new(gamma, 0.0);
    }
    if mu != 0.0 {
        m += d_f * Complex64::new(mu, 0.0);
    }
    let ridge = 1e-13 * (1.0 + m.diagonal().iter().map(|z| z.re.abs()).sum::<f64>() / n as f64);
    for i in 0..n {
        m[(i, i)] += Complex64::new(ridge, 0.0);
    }
    m
}

fn eval_dual(
    a_f: &CMat,
    c_f: &CMat,
    d_f: &CMat,
    p_n: f64,
    p_m: Option<f64>,
    ris_floor: f64,
    gamma: f64,
    mu: f64,
) -> DualEval {
    let m = assemble_m(a_f, d_f, gamma, mu);
    let f = solve_hpd(&m, c_f);
    let df = d_f * &f;
    let minv_f = solve_hpd(&m, &f);
    let minv_df = solve_hpd(&m, &df);
    let pn_val = fro2(&f);
    let pm_val = crate::linalg::inner_re(&f, &df) + ris_floor;
    let mut value = -crate::linalg::inner_re(c_f, &f) - gamma * p_n;
    if let Some(pm) = p_m {
        value -= mu * (pm - ris_floor);
    }
    let h11 = 2.0 * crate::linalg::inner_re(&f, &minv_f);
    let h12 = 2.0 * crate::linalg::inner_re(&df, &minv_f);
    let h22 = 2.0 * crate::linalg::inner_re(&df, &minv_df);
    DualEval {
        f,
        value,
        grad: [
            pn_val - p_n,
            p_m.map(|pm| pm_val - pm).unwrap_or(0.0),
        ],
        neg_hess: [[h11, h12], [h12, h22]],
    }
}

pub fn solve_precoder_quadratic(
    a_f: &CMat,
    c_f: &CMat,
    d_f: &CMat,
    p_n: f64,
    p_m: Option<f64>,
    ris_floor: f64,
    cfg: &MmConfig,
) -> Result<PrecoderSolution, MmError> {
    let n = a_f.nrows();
    if c_f.iter().all(|z| z.norm() == 0.0) {
        return Ok(PrecoderSolution {
            f: crate::linalg::cmat_zeros(n, c_f.ncols()),
            gamma: 0.0,
            mu: 0.0,
            dual_iters: 0,
            kkt_residual: 0.0,
        });
    }
    if let Some(pm) = p_m {
        if ris_floor > pm * (1.0 + 1e-9) {
            return Err(MmError::InfeasibleInit(format!(
                "RIS noise floor {ris_floor:.3e} exceeds the power budget {pm:.3e}"
            )));
        }
    }

    let tol_gamma = cfg.dual_tol * (1.0 + p_n);
    let tol_mu = cfg.dual_tol * (1.0 + p_m.unwrap_or(p_n));

    // Warm start on the feasible side of each constraint: gamma of the
    // zero-curvature boundary solution when the BS budget is violated at the
    // origin, then mu doubled until the RIS budget holds.
    let mut gamma = 0.0f64;
    let mut mu = 0.0f64;
    let mut cur = eval_dual(a_f, c_f, d_f, p_n, p_m, ris_floor, gamma, mu);
    if cur.grad[0] > 0.0 {
        gamma = c_f.norm() / p_n.sqrt();
        cur = eval_dual(a_f, c_f, d_f, p_n, p_m, ris_floor, gamma, mu);
    }
    if p_m.is_some() && cur.grad[1] > 0.0 {
        mu = 1e-6 * (1.0 + gamma);
        loop {
            cur = eval_dual(a_f, c_f, d_f, p_n, p_m, ris_floor, gamma, mu);
            if cur.grad[1] <= 0.0 || mu > 1e30 {
                break;
            }
            mu *= 4.0;
        }
    }

    for iter in 0..cfg.dual_max_iters {
        let pg = [
            if gamma > 0.0 { cur.grad[0] } else { cur.grad[0].max(0.0) },
            if p_m.is_none() {
                0.0
            } else if mu > 0.0 {
                cur.grad[1]
            } else {
                cur.grad[1].max(0.0)
            },
        ];
        if pg[0].abs() <= tol_gamma && pg[1].abs() <= tol_mu {
            let mm = assemble_m(a_f, d_f, gamma, mu);
            let res = (&mm * &cur.f - c_f).norm();
            return Ok(PrecoderSolution {
                f: cur.f,
                gamma,
                mu,
                dual_iters: iter,
                kkt_residual: res,
            });
        }

        // Free set: multipliers strictly inside, or pushed inward.
        let free_g = gamma > 0.0 || cur.grad[0] > 0.0;
        let free_m = p_m.is_some() && (mu > 0.0 || cur.grad[1] > 0.0);
        let mut dir = [0.0f64; 2];
        match (free_g, free_m) {
            (true, true) => {
                let h = cur.neg_hess;
                let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
                if det.abs() > 1e-300 {
                    dir = [
                        (h[1][1] * cur.grad[0] - h[0][1] * cur.grad[1]) / det,
                        (h[0][0] * cur.grad[1] - h[1][0] * cur.grad[0]) / det,
                    ];
                }
            }
            (true, false) => {
                if cur.neg_hess[0][0] > 1e-300 {
                    dir[0] = cur.grad[0] / cur.neg_hess[0][0];
                }
            }
            (false, true) => {
                if cur.neg_hess[1][1] > 1e-300 {
                    dir[1] = cur.grad[1] / cur.neg_hess[1][1];
                }
            }
            (false, false) => unreachable!("stationarity handled above"),
        }
        // Fall back to the gradient if the Newton direction is not ascent.
        if dir[0] * cur.grad[0] + dir[1] * cur.grad[1] <= 0.0 {
            let h_scale = cur.neg_hess[0][0].max(cur.neg_hess[1][1]).max(1e-300);
            dir = [cur.grad[0] / h_scale, cur.grad[1] / h_scale];
        }

        let mut accepted = false;
        let mut t = 1.0;
        for _ in 0..80 {
            let g2 = (gamma + t * dir[0]).max(0.0);
            let m2 = if p_m.is_some() { (mu + t * dir[1]).max(0.0) } else { 0.0 };
            if g2 == gamma && m2 == mu {
                break;
            }
            let cand = eval_dual(a_f, c_f, d_f, p_n, p_m, ris_floor, g2, m2);
            if cand.value >= cur.value - 1e-14 * (1.0 + cur.value.abs()) {
                gamma = g2;
                mu = m2;
                cur = cand;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }

    // Stalled or out of iterations: accept only when feasible to spec.
    let pn_ok = cur.grad[0] <= 1e-8 * p_n.max(1.0);
    let pm_ok = p_m.is_none() || cur.grad[1] <= 1e-8 * p_m.unwrap().max(1e-30);
    if pn_ok && pm_ok {
        let mm = assemble_m(a_f, d_f, gamma, mu);
        let res = (&mm * &cur.f - c_f).norm();
        return Ok(PrecoderSolution {
            f: cur.f,
            gamma,
            mu,
            dual_iters: cfg.dual_max_iters,
            kkt_residual: res,
        });
    }
    Err(MmError::DualMaxIters {
        gamma,
        mu,
        grad_gamma: cur.grad[0],
        grad_mu: cur.grad[1],
    })
}

/// Projection onto the precoder constraint set: `argmin ||F - X||_F` subject
/// to the BS and RIS power budgets; the same dual machinery with `A_F = I`,
/// `C_F = X`.
pub fn project_precoder(
    x: &CMat,
    p_n: f64,
    p_m: Option<f64>,
    d_f: &CMat,
    ris_floor: f64,
    cfg: &MmConfig,
) -> Result<CMat, MmError> {
    let eye = CMat::identity(x.nrows(), x.nrows());
    Ok(solve_precoder_quadratic(&eye, x, d_f, p_n, p_m, ris_floor, cfg)?.f)
}
