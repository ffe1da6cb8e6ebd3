//! Average-sum-rate maximization under partial CSI: MM surrogate, KKT
//! dual-decomposition precoder update, ADMM reflection update, and the
//! SQUAREM-accelerated alternating loop.

mod algorithm;
mod precoder;
mod reflection;
mod surrogate;

pub use algorithm::{
    cophased_phases, default_init, run_algorithm1, IterRecord, MmOutcome, RateMaxBudgets,
};
pub use precoder::{project_precoder, solve_precoder_quadratic, PrecoderSolution};
pub use reflection::{
    clamp_modulus_band, project_reflection, ris_power_of, solve_reflection_admm,
    w_step_gamma_bracket, w_step_power_profile, AdmmOutcome,
};
pub use surrogate::{surrogate_coeffs, SurrogateState};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MmError {
    #[error("degenerate surrogate expansion point for user {user} (zero denominator)")]
    DegenerateExpansion { user: usize },
    #[error("infeasible starting point: {0}")]
    InfeasibleInit(String),
    #[error("precoder dual iteration cap reached (gamma={gamma:.3e}, mu={mu:.3e}, grad=({grad_gamma:.3e}, {grad_mu:.3e}))")]
    DualMaxIters {
        gamma: f64,
        mu: f64,
        grad_gamma: f64,
        grad_mu: f64,
    },
    #[error("ADMM did not converge in {iters} iterations (last primal residual {residual:.3e})")]
    AdmmMaxIters { iters: usize, residual: f64 },
    #[error("reflection constraint set is empty: minimum power {needed:.3e} exceeds budget {budget:.3e}")]
    EmptyFeasibleSet { needed: f64, budget: f64 },
}

/// Stopping rules and solver constants; the defaults realize the "-> 0"
/// stopping conditions at practical tolerances.
#[derive(Debug, Clone)]
pub struct MmConfig {
    /// Relative objective change terminating the outer loop.
    pub outer_tol: f64,
    pub max_outer_iters: usize,
    /// Relative projected-gradient tolerance of the precoder dual.
    pub dual_tol: f64,
    pub dual_max_iters: usize,
    /// ADMM penalty; `None` picks `1 + mean(diag(A_w))`.
    pub admm_penalty: Option<f64>,
    pub admm_tol: f64,
    pub admm_max_iters: usize,
    /// Relative tolerance of the power bisection in the ADMM w-step.
    pub bisection_tol: f64,
    pub squarem: bool,
}

impl Default for MmConfig {
    fn default() -> Self {
        MmConfig {
            outer_tol: 1e-5,
            max_outer_iters: 300,
            dual_tol: 1e-10,
            dual_max_iters: 3000,
            admm_penalty: None,
            admm_tol: 1e-6,
            admm_max_iters: 20000,
            bisection_tol: 1e-8,
            squarem: true,
        }
    }
}
