//! Beamforming toolkit for active-RIS-aided multiuser MISO downlinks under
//! partial CSI.
//!
//! The surface amplifies as well as phase-shifts (`1 <= |w_m|^2 <= a_max`),
//! which brings its transmit power and amplified thermal noise into the
//! design problem -- but only the cascaded channels `G_k` and the fading
//! statistics of their factors are observable. The crate provides:
//!
//! - [`channel`]: the correlated Rician ensemble and its partial-CSI view;
//! - [`metrics`]: closed-form rates, bounds and power functionals;
//! - [`mm`]: average-sum-rate maximization (MM surrogate, KKT precoder step,
//!   ADMM reflection step, SQUAREM-accelerated outer loop);
//! - [`outage`]: outage-constrained total-power minimization
//!   (Bernstein-type-inequality safe approximation, SDR subproblems,
//!   Gaussian randomization, alternating loop).

pub mod channel;
pub mod design;
pub mod linalg;
pub mod matfile;
pub mod metrics;
pub mod mm;
pub mod outage;
pub mod rng;
