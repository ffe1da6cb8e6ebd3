//! Outage-constrained total-power minimization (placeholder).
