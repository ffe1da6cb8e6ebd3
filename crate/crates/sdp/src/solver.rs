//! Homogeneous self-dual primal-dual interior-point method with
//! Nesterov-Todd scaling and Mehrotra predictor-corrector steps.
//!
//! The embedding introduces `tau, kappa >= 0` and searches for a nontrivial
//! solution of
//!
//! ```text
//!   G' z + c tau            = 0
//!   G x + s - h tau         = 0
//!   kappa + c' x + h' z     = 0
//!   s in K, z in K*, s' z + tau kappa = 0.
//! ```
//!
//! `tau > 0` recovers an optimal pair `(x, z, s) / tau`; `kappa > 0` yields an
//! infeasibility certificate (`h' z < 0`: primal infeasible, `c' x < 0`: dual
//! infeasible).

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::cones::{cone_identity, step_to_boundary, Scaling};
use crate::problem::{ConeSpec, ConicProblem};

/// Hard desk-scale caps; the dense factorizations are not meant for more.
pub const MAX_TOTAL_PSD_SIDE: usize = 200;
pub const MAX_ROWS: usize = 6000;
pub const MAX_VARS: usize = 1500;

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub max_iters: usize,
    pub eps_feas: f64,
    pub eps_gap: f64,
    pub eps_infeas: f64,
    /// Fraction of the step to the cone boundary, 0.98 by default.
    pub step_fraction: f64,
    /// Residual levels still accepted as optimal when progress stalls.
    pub reduced_eps_feas: f64,
    pub reduced_eps_gap: f64,
    pub verbose: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iters: 120,
            eps_feas: 1e-9,
            eps_gap: 1e-9,
            eps_infeas: 1e-10,
            step_fraction: 0.98,
            reduced_eps_feas: 5e-8,
            reduced_eps_gap: 5e-7,
            verbose: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
    MaxIters,
}

#[derive(Debug, Clone)]
pub struct ConeSolution {
    pub status: SolveStatus,
    pub x: DVector<f64>,
    /// Dual cone variables, one slice per cone block in problem order.
    pub z: DVector<f64>,
    pub s: DVector<f64>,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub iters: usize,
    pub primal_res: f64,
    pub dual_res: f64,
    pub rel_gap: f64,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("malformed problem: {0}")]
    Malformed(String),
    #[error("problem exceeds the desk-scale cap: {0}")]
    CapExceeded(String),
    #[error("numerical breakdown at iteration {iter}: {reason} (mu={mu:.3e}, pres={pres:.3e}, dres={dres:.3e})")]
    Numerical {
        iter: usize,
        reason: String,
        mu: f64,
        pres: f64,
        dres: f64,
    },
}

struct Blocks {
    specs: Vec<ConeSpec>,
    offsets: Vec<usize>,
}

impl Blocks {
    fn new(specs: &[ConeSpec]) -> Self {
        let mut offsets = Vec::with_capacity(specs.len());
        let mut o = 0;
        for s in specs {
            offsets.push(o);
            o += s.dim();
        }
        Blocks {
            specs: specs.to_vec(),
            offsets,
        }
    }

    fn total_dim(&self) -> usize {
        self.specs
            .last()
            .map(|s| self.offsets[self.specs.len() - 1] + s.dim())
            .unwrap_or(0)
    }

    fn slices<'a>(&'a self, v: &'a DVector<f64>) -> impl Iterator<Item = (usize, &'a ConeSpec, &'a [f64])> {
        self.specs
            .iter()
            .enumerate()
            .map(move |(i, s)| (i, s, &v.as_slice()[self.offsets[i]..self.offsets[i] + s.dim()]))
    }
}

fn check_caps(p: &ConicProblem) -> Result<(), SolveError> {
    let psd_total: usize = p
        .cones
        .iter()
        .map(|c| match c {
            ConeSpec::Psd(s) => *s,
            _ => 0,
        })
        .sum();
    if psd_total > MAX_TOTAL_PSD_SIDE {
        return Err(SolveError::CapExceeded(format!(
            "total PSD side {psd_total} > {MAX_TOTAL_PSD_SIDE}"
        )));
    }
    if p.num_rows() > MAX_ROWS {
        return Err(SolveError::CapExceeded(format!(
            "{} rows > {MAX_ROWS}",
            p.num_rows()
        )));
    }
    if p.num_vars > MAX_VARS {
        return Err(SolveError::CapExceeded(format!(
            "{} variables > {MAX_VARS}",
            p.num_vars
        )));
    }
    Ok(())
}

/// KKT solver for `[0 G'; G -W'W] [dx; dz] = [rx; rz]`, with the zero-cone
/// rows kept as exact equalities (their scaling block vanishes).
struct KktSolver<'a> {
    g: &'a DMatrix<f64>,
    blocks: &'a Blocks,
    scalings: &'a [Scaling],
    /// Row indices belonging to zero cones.
    zero_rows: Vec<usize>,
    /// Dense factor of the reduced saddle system.
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    n: usize,
}

impl<'a> KktSolver<'a> {
    fn new(g: &'a DMatrix<f64>, blocks: &'a Blocks, scalings: &'a [Scaling]) -> Option<Self> {
        let n = g.ncols();
        let mut zero_rows = Vec::new();
        for (i, spec, _) in blocks.slices(&DVector::zeros(blocks.total_dim())) {
            if let ConeSpec::Zero(d) = spec {
                for r in 0..*d {
                    zero_rows.push(blocks.offsets[i] + r);
                }
            }
        }
        let nz = zero_rows.len();

        // H = G_nz' (W'W)^{-1} G_nz, assembled column by column.
        let mut winv_g = DMatrix::zeros(g.nrows(), n);
        for j in 0..n {
            let col = g.column(j).clone_owned();
            let y = apply_blockwise(blocks, scalings, &col, |sc, sl| sc.apply_wtw_inv(sl));
            winv_g.set_column(j, &y);
        }
        let h_mat = g.transpose() * &winv_g;

        // Saddle [[H, Gz'], [Gz, 0]] with tiny regularization for solvability.
        let dim = n + nz;
        let mut kkt = DMatrix::zeros(dim, dim);
        kkt.view_mut((0, 0), (n, n)).copy_from(&h_mat);
        for (r, &row) in zero_rows.iter().enumerate() {
            for j in 0..n {
                kkt[(n + r, j)] = g[(row, j)];
                kkt[(j, n + r)] = g[(row, j)];
            }
        }
        let scale = h_mat.diagonal().amax().max(1.0);
        for i in 0..n {
            kkt[(i, i)] += 1e-12 * scale;
        }
        for i in n..dim {
            kkt[(i, i)] -= 1e-10 * scale;
        }
        let lu = kkt.lu();
        Some(KktSolver {
            g,
            blocks,
            scalings,
            zero_rows,
            lu,
            n,
        })
    }

    /// Returns (dx, dz).
    fn solve(&self, rx: &DVector<f64>, rz: &DVector<f64>) -> Option<(DVector<f64>, DVector<f64>)> {
        // rhs for the reduced system: rx + G_nz'(W'W)^{-1} rz_nz ; rz_zero
        let mut rz_nz = rz.clone();
        for &r in &self.zero_rows {
            rz_nz[r] = 0.0;
        }
        let w_rz = apply_blockwise(self.blocks, self.scalings, &rz_nz, |sc, sl| {
            sc.apply_wtw_inv(sl)
        });
        let mut rhs = DVector::zeros(self.n + self.zero_rows.len());
        let top = rx + self.g.transpose() * &w_rz;
        rhs.rows_mut(0, self.n).copy_from(&top);
        for (k, &r) in self.zero_rows.iter().enumerate() {
            rhs[self.n + k] = rz[r];
        }
        let sol = self.lu.solve(&rhs)?;
        let dx = sol.rows(0, self.n).clone_owned();

        // dz on non-zero blocks: (W'W)^{-1} (G dx - rz); on zero blocks the
        // multiplier comes straight from the saddle solution.
        let gdx = self.g * &dx;
        let mut resid = &gdx - rz;
        for &r in &self.zero_rows {
            resid[r] = 0.0;
        }
        let mut dz = apply_blockwise(self.blocks, self.scalings, &resid, |sc, sl| {
            sc.apply_wtw_inv(sl)
        });
        for (k, &r) in self.zero_rows.iter().enumerate() {
            dz[r] = sol[self.n + k];
        }
        Some((dx, dz))
    }
}

fn apply_blockwise(
    blocks: &Blocks,
    scalings: &[Scaling],
    v: &DVector<f64>,
    f: impl Fn(&Scaling, &[f64]) -> DVector<f64>,
) -> DVector<f64> {
    let mut out = DVector::zeros(v.len());
    for (i, spec, _) in blocks.slices(v) {
        let o = blocks.offsets[i];
        let d = spec.dim();
        let res = f(&scalings[i], &v.as_slice()[o..o + d]);
        out.rows_mut(o, d).copy_from(&res);
    }
    out
}

struct Iterate {
    x: DVector<f64>,
    z: DVector<f64>,
    s: DVector<f64>,
    tau: f64,
    kappa: f64,
}

struct Metrics {
    pres: f64,
    dres: f64,
    rel_gap: f64,
    pobj: f64,
    dobj: f64,
}

fn metrics(p: &ConicProblem, it: &Iterate, norm_h: f64, norm_c: f64) -> Metrics {
    let xt = &it.x / it.tau;
    let st = &it.s / it.tau;
    let zt = &it.z / it.tau;
    let pres = (&p.g * &xt + &st - &p.h).norm() / (1.0 + norm_h);
    let dres = (p.g.transpose() * &zt + &p.cost).norm() / (1.0 + norm_c);
    let pobj = p.cost.dot(&xt);
    let dobj = -p.h.dot(&zt);
    let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs().max(dobj.abs()));
    Metrics {
        pres,
        dres,
        rel_gap,
        pobj,
        dobj,
    }
}

/// Solve a conic problem. Infeasibility is reported through the status, data
/// and dimension problems through the error type.
pub fn solve(p: &ConicProblem, opts: &SolverOptions) -> Result<ConeSolution, SolveError> {
    p.validate().map_err(SolveError::Malformed)?;
    check_caps(p)?;

    let n = p.num_vars;
    let m = p.num_rows();
    let blocks = Blocks::new(&p.cones);
    let deg: f64 = p.cones.iter().map(|c| c.degree()).sum();
    let norm_h = p.h.norm();
    let norm_c = p.cost.norm();

    // Standard self-dual-style initialization: cone identities and unit
    // tau/kappa.
    let mut e_all = DVector::zeros(m);
    for (i, spec) in p.cones.iter().enumerate() {
        let e = cone_identity(spec);
        e_all.rows_mut(blocks.offsets[i], spec.dim()).copy_from(&e);
    }
    let mut it = Iterate {
        x: DVector::zeros(n),
        z: e_all.clone(),
        s: e_all,
        tau: 1.0,
        kappa: 1.0,
    };

    let mut best: Option<(f64, ConeSolution)> = None;
    let mut stalls = 0usize;

    for iter in 0..opts.max_iters {
        // Residuals of the homogeneous system.
        let r_d = p.g.transpose() * &it.z + &p.cost * it.tau;
        let r_p = &p.g * &it.x + &it.s - &p.h * it.tau;
        let r_g = it.kappa + p.cost.dot(&it.x) + p.h.dot(&it.z);
        let mu = (it.s.dot(&it.z) + it.tau * it.kappa) / (deg + 1.0);

        let mt = metrics(p, &it, norm_h, norm_c);
        if opts.verbose {
            eprintln!(
                "iter {iter:3}  mu {mu:9.2e}  pres {:9.2e}  dres {:9.2e}  gap {:9.2e}  tau {:8.2e} kappa {:8.2e}",
                mt.pres, mt.dres, mt.rel_gap, it.tau, it.kappa
            );
        }

        let score = mt.pres.max(mt.dres).max(mt.rel_gap);
        let make_solution = |status: SolveStatus, mt: &Metrics, iters: usize| ConeSolution {
            status,
            x: &it.x / it.tau,
            z: &it.z / it.tau,
            s: &it.s / it.tau,
            primal_obj: mt.pobj,
            dual_obj: mt.dobj,
            iters,
            primal_res: mt.pres,
            dual_res: mt.dres,
            rel_gap: mt.rel_gap,
        };

        if mt.pres < opts.eps_feas && mt.dres < opts.eps_feas && mt.rel_gap < opts.eps_gap {
            return Ok(make_solution(SolveStatus::Optimal, &mt, iter));
        }
        if best.as_ref().map_or(true, |(s, _)| score < *s) {
            best = Some((score, make_solution(SolveStatus::MaxIters, &mt, iter)));
        }

        // Infeasibility certificates.
        let hz = p.h.dot(&it.z);
        if hz < -1e-12 {
            let zc = &it.z / (-hz);
            if (p.g.transpose() * &zc).amax() < opts.eps_infeas * (1.0 + norm_c) {
                return Ok(ConeSolution {
                    status: SolveStatus::PrimalInfeasible,
                    x: DVector::zeros(n),
                    z: zc,
                    s: DVector::zeros(m),
                    primal_obj: f64::INFINITY,
                    dual_obj: f64::INFINITY,
                    iters: iter,
                    primal_res: mt.pres,
                    dual_res: mt.dres,
                    rel_gap: mt.rel_gap,
                });
            }
        }
        let cx = p.cost.dot(&it.x);
        if cx < -1e-12 {
            let xc = &it.x / (-cx);
            let sc = &it.s / (-cx);
            if (&p.g * &xc + &sc).amax() < opts.eps_infeas * (1.0 + norm_h) {
                return Ok(ConeSolution {
                    status: SolveStatus::DualInfeasible,
                    x: xc,
                    z: DVector::zeros(m),
                    s: sc,
                    primal_obj: f64::NEG_INFINITY,
                    dual_obj: f64::NEG_INFINITY,
                    iters: iter,
                    primal_res: mt.pres,
                    dual_res: mt.dres,
                    rel_gap: mt.rel_gap,
                });
            }
        }

        // NT scalings.
        let mut scalings = Vec::with_capacity(p.cones.len());
        let mut failed = false;
        for (i, spec) in p.cones.iter().enumerate() {
            let o = blocks.offsets[i];
            let d = spec.dim();
            match Scaling::compute(
                spec,
                &it.s.as_slice()[o..o + d],
                &it.z.as_slice()[o..o + d],
            ) {
                Some(sc) => scalings.push(sc),
                None => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            return finish_stalled(best, opts, iter, mu, &mt);
        }

        let kkt = match KktSolver::new(&p.g, &blocks, &scalings) {
            Some(k) => k,
            None => return finish_stalled(best, opts, iter, mu, &mt),
        };
        let Some((x1, z1)) = kkt.solve(&(-&p.cost), &p.h) else {
            return finish_stalled(best, opts, iter, mu, &mt);
        };

        let lambda = {
            let mut l = DVector::zeros(m);
            for (i, spec) in p.cones.iter().enumerate() {
                l.rows_mut(blocks.offsets[i], spec.dim())
                    .copy_from(&scalings[i].lambda());
            }
            l
        };
        let lam_sq = apply_blockwise(&blocks, &scalings, &lambda, |sc, sl| {
            sc.jordan_prod(sl, sl)
        });

        // One direction computation shared by predictor and corrector.
        let compute_direction = |d_x: &DVector<f64>,
                                 d_z: &DVector<f64>,
                                 d_g: f64,
                                 d_s: &DVector<f64>,
                                 d_kappa: f64|
         -> Option<(DVector<f64>, DVector<f64>, DVector<f64>, f64, f64)> {
            let ds_tilde = apply_blockwise(&blocks, &scalings, d_s, |sc, sl| {
                sc.jordan_div_lambda(sl)
            });
            let wt_ds = apply_blockwise(&blocks, &scalings, &ds_tilde, |sc, sl| sc.apply_wt(sl));
            let rhs_z = d_z - &wt_ds;
            let (x2, z2) = kkt.solve(d_x, &rhs_z)?;
            let denom = it.kappa - it.tau * (p.cost.dot(&x1) + p.h.dot(&z1));
            if denom.abs() < 1e-300 {
                return None;
            }
            let dtau = (d_kappa - it.tau * d_g
                + it.tau * (p.cost.dot(&x2) + p.h.dot(&z2)))
                / denom;
            let dx = &x2 + &x1 * dtau;
            let dz = &z2 + &z1 * dtau;
            let wtw_dz = apply_blockwise(&blocks, &scalings, &dz, |sc, sl| {
                let a = sc.apply_w(sl);
                sc.apply_wt(a.as_slice())
            });
            let ds = &wt_ds - &wtw_dz;
            let dkappa = d_g - p.cost.dot(&dx) - p.h.dot(&dz);
            Some((dx, dz, ds, dtau, dkappa))
        };

        let boundary_step = |dz: &DVector<f64>, ds: &DVector<f64>, dtau: f64, dkappa: f64| {
            let mut a = f64::INFINITY;
            for (i, spec) in p.cones.iter().enumerate() {
                let o = blocks.offsets[i];
                let d = spec.dim();
                a = a.min(step_to_boundary(
                    spec,
                    &it.s.as_slice()[o..o + d],
                    &ds.as_slice()[o..o + d],
                ));
                a = a.min(step_to_boundary(
                    spec,
                    &it.z.as_slice()[o..o + d],
                    &dz.as_slice()[o..o + d],
                ));
            }
            if dtau < 0.0 {
                a = a.min(-it.tau / dtau);
            }
            if dkappa < 0.0 {
                a = a.min(-it.kappa / dkappa);
            }
            a
        };

        // Predictor (affine scaling direction).
        let neg_rd = -&r_d;
        let neg_rp = -&r_p;
        let Some((_, dz_a, ds_a, dtau_a, dkappa_a)) = compute_direction(
            &neg_rd,
            &neg_rp,
            -r_g,
            &(-&lam_sq),
            -it.tau * it.kappa,
        ) else {
            return finish_stalled(best, opts, iter, mu, &mt);
        };
        let alpha_aff = boundary_step(&dz_a, &ds_a, dtau_a, dkappa_a).min(1.0);
        let mu_aff = ((&it.s + &ds_a * alpha_aff).dot(&(&it.z + &dz_a * alpha_aff))
            + (it.tau + alpha_aff * dtau_a) * (it.kappa + alpha_aff * dkappa_a))
            / (deg + 1.0);
        let sigma = ((mu_aff / mu).max(0.0).powi(3)).min(0.999);

        // Corrector / combined direction.
        let w_dz = apply_blockwise(&blocks, &scalings, &dz_a, |sc, sl| sc.apply_w(sl));
        let wt_ds_a = apply_blockwise(&blocks, &scalings, &ds_a, |sc, sl| sc.apply_wt_inv(sl));
        let mut eta = DVector::zeros(m);
        for (i, spec) in p.cones.iter().enumerate() {
            let o = blocks.offsets[i];
            let d = spec.dim();
            let pr = scalings[i].jordan_prod(
                &wt_ds_a.as_slice()[o..o + d],
                &w_dz.as_slice()[o..o + d],
            );
            eta.rows_mut(o, d).copy_from(&pr);
        }
        let mut d_s = -&lam_sq - &eta;
        for (i, spec) in p.cones.iter().enumerate() {
            if matches!(spec, ConeSpec::Zero(_)) {
                continue;
            }
            let e = cone_identity(spec);
            let o = blocks.offsets[i];
            for (k, ev) in e.iter().enumerate() {
                d_s[o + k] += sigma * mu * ev;
            }
        }
        let one_minus_sigma = 1.0 - sigma;
        let d_x = &neg_rd * one_minus_sigma;
        let d_z = &neg_rp * one_minus_sigma;
        let d_g = -r_g * one_minus_sigma;
        let d_kappa = -it.tau * it.kappa + sigma * mu - dtau_a * dkappa_a;
        let Some((dx, dz, ds, dtau, dkappa)) =
            compute_direction(&d_x, &d_z, d_g, &d_s, d_kappa)
        else {
            return finish_stalled(best, opts, iter, mu, &mt);
        };

        let alpha = (opts.step_fraction * boundary_step(&dz, &ds, dtau, dkappa)).min(1.0);
        if alpha < 1e-8 {
            stalls += 1;
            if stalls >= 3 {
                return finish_stalled(best, opts, iter, mu, &mt);
            }
        } else {
            stalls = 0;
        }

        it.x += &dx * alpha;
        it.z += &dz * alpha;
        it.s += &ds * alpha;
        it.tau += alpha * dtau;
        it.kappa += alpha * dkappa;

        if !it.tau.is_finite() || it.tau <= 0.0 {
            return Err(SolveError::Numerical {
                iter,
                reason: "tau left the positive ray".into(),
                mu,
                pres: mt.pres,
                dres: mt.dres,
            });
        }
    }

    let (_, mut sol) = best.ok_or(SolveError::Numerical {
        iter: opts.max_iters,
        reason: "no iterate recorded".into(),
        mu: f64::NAN,
        pres: f64::NAN,
        dres: f64::NAN,
    })?;
    if sol.primal_res < opts.reduced_eps_feas
        && sol.dual_res < opts.reduced_eps_feas
        && sol.rel_gap < opts.reduced_eps_gap
    {
        sol.status = SolveStatus::Optimal;
        return Ok(sol);
    }
    sol.status = SolveStatus::MaxIters;
    Ok(sol)
}

fn finish_stalled(
    best: Option<(f64, ConeSolution)>,
    opts: &SolverOptions,
    iter: usize,
    mu: f64,
    mt: &Metrics,
) -> Result<ConeSolution, SolveError> {
    if let Some((_, mut sol)) = best {
        if sol.primal_res < opts.reduced_eps_feas
            && sol.dual_res < opts.reduced_eps_feas
            && sol.rel_gap < opts.reduced_eps_gap
        {
            sol.status = SolveStatus::Optimal;
            return Ok(sol);
        }
        if sol.primal_res.is_finite() {
            sol.status = SolveStatus::MaxIters;
            return Ok(sol);
        }
    }
    Err(SolveError::Numerical {
        iter,
        reason: "scaling or KKT factorization failed".into(),
        mu,
        pres: mt.pres,
        dres: mt.dres,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Affine, ProblemBuilder};
    use nalgebra::DMatrix;

    #[test]
    fn scalar_lower_bound() {
        // min x s.t. x >= 1 as a 1x1 LMI
        let mut b = ProblemBuilder::new(1);
        b.set_cost(0, 1.0);
        b.add_psd(
            &DMatrix::from_element(1, 1, -1.0),
            &[(0, DMatrix::from_element(1, 1, 1.0))],
        );
        let sol = solve(&b.build(), &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.x[0] - 1.0).abs() < 1e-7, "x = {}", sol.x[0]);
    }

    #[test]
    fn simple_lp() {
        // min -x - y s.t. x + y <= 1, x >= 0, y >= 0 -> optimum -1
        let mut b = ProblemBuilder::new(2);
        b.set_cost(0, -1.0);
        b.set_cost(1, -1.0);
        let mut e = Affine::constant(1.0);
        e.add_term(0, -1.0);
        e.add_term(1, -1.0);
        b.add_nonneg(e);
        b.add_nonneg(Affine::var(0));
        b.add_nonneg(Affine::var(1));
        let sol = solve(&b.build(), &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.primal_obj + 1.0).abs() < 1e-7);
    }

    #[test]
    fn soc_projection() {
        // min t s.t. t >= ||x - a||, x = b fixed by equalities -> t = ||b - a||
        let a = [1.0, -2.0, 0.5];
        let bv = [0.0, 1.0, 1.0];
        let mut b = ProblemBuilder::new(4); // t, x1..x3
        b.set_cost(0, 1.0);
        let mut rows = vec![Affine::var(0)];
        for i in 0..3 {
            let mut e = Affine::constant(-a[i]);
            e.add_term(1 + i, 1.0);
            rows.push(e);
        }
        b.add_soc(rows);
        for i in 0..3 {
            let mut e = Affine::constant(-bv[i]);
            e.add_term(1 + i, 1.0);
            b.add_eq(e);
        }
        let sol = solve(&b.build(), &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        let expect = (0..3)
            .map(|i| (bv[i] - a[i]).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!((sol.x[0] - expect).abs() < 1e-6, "{} vs {expect}", sol.x[0]);
    }

    #[test]
    fn detects_primal_infeasible() {
        // x >= 1 and x <= 0
        let mut b = ProblemBuilder::new(1);
        b.set_cost(0, 1.0);
        let mut e = Affine::constant(-1.0);
        e.add_term(0, 1.0);
        b.add_nonneg(e); // x - 1 >= 0
        let mut e2 = Affine::constant(0.0);
        e2.add_term(0, -1.0);
        b.add_nonneg(e2); // -x >= 0
        let sol = solve(&b.build(), &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::PrimalInfeasible);
    }

    #[test]
    fn detects_dual_infeasible() {
        // min -x s.t. x >= 0 (unbounded below)
        let mut b = ProblemBuilder::new(1);
        b.set_cost(0, -1.0);
        b.add_nonneg(Affine::var(0));
        let sol = solve(&b.build(), &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::DualInfeasible);
    }
}
