//! SQUAREM-accelerated alternating MM loop over `(F, w)`.
//!
//! Each outer iteration refreshes the surrogate, takes two fixed-point steps
//! per block, extrapolates with the squared-extrapolation step length
//! `omega = -||r1|| / ||r2||`, projects back onto the constraint set, and
//! backtracks `omega <- (omega - 1)/2` while the subproblem objective got
//! worse; if extrapolation never helps, the plain MM step is kept, which
//! preserves the monotone non-decreasing objective sequence.

use std::time::Instant;

use num_complex::Complex64;

use crate::design::DesignModel;
use crate::linalg::{CMat, CVec};
use crate::metrics::Beamformers;

use super::precoder::{project_precoder, solve_precoder_quadratic};
use super::reflection::{project_reflection, solve_reflection_admm};
use super::surrogate::{surrogate_coeffs, SurrogateState};
use super::{MmConfig, MmError};

/// Budgets and gain bound of the rate-maximization problem. `p_ris = None`
/// drops the RIS power constraint (used by the passive baseline).
#[derive(Debug, Clone, Copy)]
pub struct RateMaxBudgets {
    pub p_bs: f64,
    pub p_ris: Option<f64>,
    pub a_max: f64,
}

#[derive(Debug, Clone)]
pub struct IterRecord {
    pub iter: usize,
    /// Sum of the per-user average-rate lower bounds, bits/s/Hz.
    pub objective_bits: f64,
    pub bs_power: f64,
    pub ris_power: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct MmOutcome {
    pub bf: Beamformers,
    pub trace: Vec<IterRecord>,
    pub outer_iters: usize,
}

/// Feasible starting point: matched-filter precoder at 90% BS power and a
/// LoS-cophased common-modulus reflection vector.
pub fn default_init(model: &DesignModel, budgets: &RateMaxBudgets) -> Result<Beamformers, MmError> {
    let n = model.num_bs_antennas();
    let k = model.num_users();
    let m = model.num_ris_elements();
    let mut f = crate::linalg::cmat_zeros(n, k);
    for kk in 0..k {
        let h = &model.h_direct[kk];
        let norm = h.norm();
        let scale = if norm > 0.0 {
            (0.9 * budgets.p_bs / k as f64).sqrt() / norm
        } else {
            0.0
        };
        for j in 0..n {
            f[(j, kk)] = h[j] * Complex64::new(scale, 0.0);
        }
    }
    if m == 0 {
        return Ok(Beamformers::new(f, CVec::zeros(0)));
    }

    // Phase-align the reflected LoS cascade with the direct links.
    let w_phases = cophased_phases(model, &f);
    for _ in 0..60 {
        let d_w = model.power.d_w_diag(&f);
        let tr: f64 = d_w.iter().sum();
        let rho_cap = match budgets.p_ris {
            Some(pm) => (pm / tr).sqrt(),
            None => f64::INFINITY,
        };
        if rho_cap >= 1.0 {
            let rho = budgets.a_max.sqrt().min(rho_cap);
            let w = CVec::from_fn(m, |i, _| Complex64::from_polar(rho, w_phases[i]));
            return Ok(Beamformers::new(f, w));
        }
        // Even unit gains overshoot the RIS budget: shrink the precoder.
        f *= Complex64::new(0.5, 0.0);
    }
    Err(MmError::InfeasibleInit(
        "no precoder scaling admits unit reflection gains within the RIS power budget".into(),
    ))
}

/// Phases maximizing `Re{w^H u}` for `u = sum_k conj(h_k^H f_k) G_k f_k`:
/// the reflected path adds coherently to the direct one at each element.
pub fn cophased_phases(model: &DesignModel, f: &CMat) -> Vec<f64> {
    let m = model.num_ris_elements();
    let mut u = crate::linalg::cvec_zeros(m);
    for k in 0..model.num_users() {
        let fk: CVec = f.column(k).into();
        let direct = model.h_direct[k].dotc(&fk);
        let via: CVec = (&model.g[k] * CMat::from_column_slice(f.nrows(), 1, fk.as_slice()))
            .column(0)
            .into();
        u += via * direct.conj();
    }
    u.iter()
        .map(|z| if z.norm() == 0.0 { 0.0 } else { z.arg() })
        .collect()
}

fn check_feasible(
    bf: &Beamformers,
    model: &DesignModel,
    budgets: &RateMaxBudgets,
) -> Result<(), MmError> {
    let tol = 1e-8;
    if bf.bs_power() > budgets.p_bs * (1.0 + tol) {
        return Err(MmError::InfeasibleInit(format!(
            "initial BS power {:.3e} exceeds {:.3e}",
            bf.bs_power(),
            budgets.p_bs
        )));
    }
    if !bf.modulus_band_ok(budgets.a_max, tol) {
        return Err(MmError::InfeasibleInit(
            "initial reflection gains leave [1, a_max]".into(),
        ));
    }
    if let Some(pm) = budgets.p_ris {
        let p = model.power.ris_power(&bf.f, &bf.w);
        if p > pm * (1.0 + 1e-6) {
            return Err(MmError::InfeasibleInit(format!(
                "initial RIS power {p:.3e} exceeds {pm:.3e}"
            )));
        }
    }
    Ok(())
}

/// SQUAREM combination for the precoder block.
fn squarem_f(
    f_prev: &CMat,
    f1: &CMat,
    f2: &CMat,
    state0: &SurrogateState,
    budgets: &RateMaxBudgets,
    floor: f64,
    cfg: &MmConfig,
) -> Result<CMat, MmError> {
    let r1 = f1 - f_prev;
    let r2 = f2 - f1 - &r1;
    let n2 = r2.norm();
    if n2 < 1e-14 * (1.0 + f1.norm()) {
        return Ok(f2.clone());
    }
    let mut omega = -r1.norm() / n2;
    let base = state0.f_quad_value(f_prev);
    let scale = 1.0 + base.abs();
    for _ in 0..30 {
        let extrapolated = f_prev - &r1 * Complex64::new(2.0 * omega, 0.0)
            + &r2 * Complex64::new(omega * omega, 0.0);
        let cand = project_precoder(
            &extrapolated,
            budgets.p_bs,
            budgets.p_ris,
            &state0.d_f,
            floor,
            cfg,
        )?;
        if state0.f_quad_value(&cand) >= base - 1e-12 * scale {
            return Ok(cand);
        }
        omega = (omega - 1.0) / 2.0;
    }
    Ok(f1.clone())
}

/// SQUAREM combination for the reflection block.
fn squarem_w(
    w_prev: &CVec,
    w1: &CVec,
    w2: &CVec,
    state0: &SurrogateState,
    budgets: &RateMaxBudgets,
) -> Result<CVec, MmError> {
    let r1 = w1 - w_prev;
    let r2 = w2 - w1 - &r1;
    let n2 = r2.norm();
    if n2 < 1e-14 * (1.0 + w1.norm()) {
        return Ok(w2.clone());
    }
    let mut omega = -r1.norm() / n2;
    let base = state0.w_quad_value(w_prev);
    let scale = 1.0 + base.abs();
    for _ in 0..30 {
        let extrapolated = w_prev - &r1 * Complex64::new(2.0 * omega, 0.0)
            + &r2 * Complex64::new(omega * omega, 0.0);
        let cand = match budgets.p_ris {
            Some(pm) => project_reflection(&extrapolated, pm, budgets.a_max, &state0.d_w)?,
            None => {
                // Only the modulus band constrains w.
                let hi = budgets.a_max.sqrt();
                CVec::from_fn(extrapolated.len(), |i, _| {
                    let z = extrapolated[i];
                    let r = z.norm().clamp(1.0, hi);
                    let ph = if z.norm() == 0.0 { 0.0 } else { z.arg() };
                    Complex64::from_polar(r, ph)
                })
            }
        };
        if state0.w_quad_value(&cand) >= base - 1e-12 * scale {
            return Ok(cand);
        }
        omega = (omega - 1.0) / 2.0;
    }
    Ok(w1.clone())
}

/// One ADMM solve guarded so the subproblem objective never regresses.
fn w_step_guarded(
    state: &SurrogateState,
    w_from: &CVec,
    budgets: &RateMaxBudgets,
    cfg: &MmConfig,
) -> Result<CVec, MmError> {
    let out = solve_reflection_admm(
        &state.a_w,
        &state.c_w,
        &state.d_w,
        budgets.p_ris,
        budgets.a_max,
        w_from,
        cfg,
    )?;
    if state.w_quad_value(&out.w) >= state.w_quad_value(w_from) {
        Ok(out.w)
    } else {
        Ok(w_from.clone())
    }
}

pub fn run_algorithm1(
    model: &DesignModel,
    budgets: &RateMaxBudgets,
    init: Option<Beamformers>,
    cfg: &MmConfig,
) -> Result<MmOutcome, MmError> {
    let start = Instant::now();
    let mut bf = match init {
        Some(b) => b,
        None => default_init(model, budgets)?,
    };
    check_feasible(&bf, model, budgets)?;
    let m = model.num_ris_elements();

    let mut trace = Vec::new();
    let mut obj = model.sum_rate_lb_bits(&bf);
    trace.push(IterRecord {
        iter: 0,
        objective_bits: obj,
        bs_power: bf.bs_power(),
        ris_power: model.power.ris_power(&bf.f, &bf.w),
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    });

    let mut iters = 0;
    for n_iter in 1..=cfg.max_outer_iters {
        iters = n_iter;
        // --- precoder block ---
        let s0 = surrogate_coeffs(&bf, model)?;
        let floor = s0.ris_noise_floor;
        let f1 = solve_precoder_quadratic(
            &s0.a_f,
            &s0.c_f,
            &s0.d_f,
            budgets.p_bs,
            budgets.p_ris,
            floor,
            cfg,
        )?
        .f;
        let f_new = if cfg.squarem {
            let bf1 = Beamformers::new(f1.clone(), bf.w.clone());
            let s1 = surrogate_coeffs(&bf1, model)?;
            let f2 = solve_precoder_quadratic(
                &s1.a_f,
                &s1.c_f,
                &s1.d_f,
                budgets.p_bs,
                budgets.p_ris,
                floor,
                cfg,
            )?
            .f;
            squarem_f(&bf.f, &f1, &f2, &s0, budgets, floor, cfg)?
        } else {
            f1
        };
        bf.f = f_new;

        // --- reflection block ---
        if m > 0 {
            let sw = surrogate_coeffs(&bf, model)?;
            let w1 = w_step_guarded(&sw, &bf.w, budgets, cfg)?;
            let w_new = if cfg.squarem {
                let bfw1 = Beamformers::new(bf.f.clone(), w1.clone());
                let sw1 = surrogate_coeffs(&bfw1, model)?;
                let w2 = w_step_guarded(&sw1, &w1, budgets, cfg)?;
                let cand = squarem_w(&bf.w, &w1, &w2, &sw, budgets)?;
                if sw.w_quad_value(&cand) >= sw.w_quad_value(&bf.w) {
                    cand
                } else {
                    w1
                }
            } else {
                w1
            };
            bf.w = w_new;
        }

        let new_obj = model.sum_rate_lb_bits(&bf);
        trace.push(IterRecord {
            iter: n_iter,
            objective_bits: new_obj,
            bs_power: bf.bs_power(),
            ris_power: model.power.ris_power(&bf.f, &bf.w),
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        if (new_obj - obj).abs() <= cfg.outer_tol * obj.abs().max(1e-12) {
            obj = new_obj;
            break;
        }
        obj = new_obj;
    }
    let _ = obj;
    Ok(MmOutcome {
        bf,
        trace,
        outer_iters: iters,
    })
}
