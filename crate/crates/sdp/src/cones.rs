//! Per-block cone kernels: Nesterov-Todd scalings, Jordan-algebra operations
//! and boundary step computations.
//!
//! For a symmetric cone block with strictly interior primal/dual points
//! `(s, z)`, the NT scaling `W` is the unique self-scaled map satisfying
//! `W z = W^{-T} s = lambda` (the scaled point). Blocks:
//!
//! - nonnegative: `W = Diag(sqrt(s_i / z_i))`
//! - second order: `W = eta (2 wbar wbar' - J)`, `J = Diag(1, -I)`, with
//!   `wbar' J wbar = 1`, so `W^{-1} = (1/eta) J (2 wbar wbar' - J) J`
//! - PSD (svec): `W v = svec(R' V R)` with `R` from the Cholesky/SVD
//!   construction `R = L_s V Sigma^{-1/2}`, `L_z' L_s = U Sigma V'`.

use nalgebra::{DMatrix, DVector};

use crate::embed::{smat, svec};
use crate::problem::ConeSpec;

#[derive(Debug)]
pub(crate) enum Scaling {
    Zero {
        dim: usize,
    },
    Nonneg {
        w: DVector<f64>,
        lambda: DVector<f64>,
    },
    Soc {
        eta: f64,
        wbar: DVector<f64>,
        lambda: DVector<f64>,
    },
    Psd {
        p: usize,
        r: DMatrix<f64>,
        rinv: DMatrix<f64>,
        /// Diagonal of the scaled point (eigenvalues), lambda_mat = Diag(lam).
        lam: DVector<f64>,
    },
}

fn soc_resid(v: &[f64]) -> f64 {
    let mut t = v[0] * v[0];
    for x in &v[1..] {
        t -= x * x;
    }
    t
}

/// Cholesky factor with a tiny diagonal jitter fallback for matrices that are
/// numerically on the PSD boundary.
fn chol_with_jitter(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if let Some(ch) = m.clone().cholesky() {
        return Some(ch.l());
    }
    let scale = m.diagonal().amax().max(1e-300);
    for k in [1e-14, 1e-12, 1e-10] {
        let mut mj = m.clone();
        for i in 0..m.nrows() {
            mj[(i, i)] += k * scale;
        }
        if let Some(ch) = mj.cholesky() {
            return Some(ch.l());
        }
    }
    None
}

impl Scaling {
    pub fn compute(spec: &ConeSpec, s: &[f64], z: &[f64]) -> Option<Scaling> {
        match *spec {
            ConeSpec::Zero(d) => Some(Scaling::Zero { dim: d }),
            ConeSpec::Nonneg(d) => {
                let mut w = DVector::zeros(d);
                let mut lam = DVector::zeros(d);
                for i in 0..d {
                    if s[i] <= 0.0 || z[i] <= 0.0 {
                        return None;
                    }
                    w[i] = (s[i] / z[i]).sqrt();
                    lam[i] = (s[i] * z[i]).sqrt();
                }
                Some(Scaling::Nonneg { w, lambda: lam })
            }
            ConeSpec::Soc(d) => {
                let rs = soc_resid(s);
                let rz = soc_resid(z);
                if rs <= 0.0 || rz <= 0.0 || s[0] <= 0.0 || z[0] <= 0.0 {
                    return None;
                }
                let ns = rs.sqrt();
                let nz = rz.sqrt();
                let sb: DVector<f64> = DVector::from_row_slice(s) / ns;
                let zb: DVector<f64> = DVector::from_row_slice(z) / nz;
                let dot = sb.dot(&zb);
                let gamma = ((1.0 + dot) / 2.0).sqrt();
                // Scaling point wbar = (sb + J zb) / (2 gamma), then the
                // Householder vector is its Jordan square root
                // v = (wbar + e) / sqrt(2 (1 + wbar_0)), so that
                // W = eta (2 v v' - J) satisfies W z = W^{-1} s.
                let mut wbar = DVector::zeros(d);
                wbar[0] = (sb[0] + zb[0]) / (2.0 * gamma);
                for i in 1..d {
                    wbar[i] = (sb[i] - zb[i]) / (2.0 * gamma);
                }
                let denom = (2.0 * (1.0 + wbar[0])).sqrt();
                wbar[0] += 1.0;
                let wbar = wbar / denom;
                let eta = (ns / nz).sqrt();
                let sc = Scaling::Soc {
                    eta,
                    wbar,
                    lambda: DVector::zeros(0),
                };
                let lam = sc.apply_w(z);
                match sc {
                    Scaling::Soc { eta, wbar, .. } => Some(Scaling::Soc {
                        eta,
                        wbar,
                        lambda: lam,
                    }),
                    _ => unreachable!(),
                }
            }
            ConeSpec::Psd(p) => {
                let sm = smat(s, p);
                let zm = smat(z, p);
                let ls = chol_with_jitter(&sm)?;
                let lz = chol_with_jitter(&zm)?;
                let prod = lz.transpose() * &ls;
                let svd = prod.svd(true, true);
                let u = svd.u.as_ref()?;
                let vt = svd.v_t.as_ref()?;
                let sig = &svd.singular_values;
                if sig.iter().any(|&x| x <= 0.0) {
                    return None;
                }
                let mut v_sig = vt.transpose();
                let mut u_sig = u.clone();
                for j in 0..p {
                    let isq = 1.0 / sig[j].sqrt();
                    for i in 0..p {
                        v_sig[(i, j)] *= isq;
                        u_sig[(i, j)] *= isq;
                    }
                }
                // r = L_s V Sigma^{-1/2}; r^{-1} = Sigma^{-1/2} U' L_z'
                let r = &ls * &v_sig;
                let rinv = (lz * u_sig).transpose();
                Some(Scaling::Psd {
                    p,
                    r,
                    rinv,
                    lam: sig.clone_owned(),
                })
            }
        }
    }

    fn soc_h(wbar: &DVector<f64>, v: &[f64]) -> DVector<f64> {
        // (2 wbar wbar' - J) v
        let mut jv = DVector::from_row_slice(v);
        for i in 1..jv.len() {
            jv[i] = -jv[i];
        }
        let dot = wbar.dot(&DVector::from_row_slice(v));
        wbar * (2.0 * dot) - jv
    }

    fn soc_jhj(wbar: &DVector<f64>, v: &[f64]) -> DVector<f64> {
        let mut jv: Vec<f64> = v.to_vec();
        for x in jv.iter_mut().skip(1) {
            *x = -*x;
        }
        let mut out = Self::soc_h(wbar, &jv);
        for i in 1..out.len() {
            out[i] = -out[i];
        }
        out
    }

    pub fn apply_w(&self, v: &[f64]) -> DVector<f64> {
        match self {
            Scaling::Zero { dim } => DVector::zeros(*dim),
            Scaling::Nonneg { w, .. } => {
                DVector::from_iterator(w.len(), v.iter().zip(w.iter()).map(|(a, b)| a * b))
            }
            Scaling::Soc { eta, wbar, .. } => Self::soc_h(wbar, v) * *eta,
            Scaling::Psd { p, r, .. } => {
                let m = smat(v, *p);
                svec(&(r.transpose() * m * r))
            }
        }
    }

    pub fn apply_wt(&self, v: &[f64]) -> DVector<f64> {
        match self {
            Scaling::Zero { dim } => DVector::zeros(*dim),
            Scaling::Nonneg { .. } | Scaling::Soc { .. } => self.apply_w(v),
            Scaling::Psd { p, r, .. } => {
                let m = smat(v, *p);
                svec(&(r * m * r.transpose()))
            }
        }
    }

    pub fn apply_w_inv(&self, v: &[f64]) -> DVector<f64> {
        match self {
            Scaling::Zero { dim } => DVector::zeros(*dim),
            Scaling::Nonneg { w, .. } => {
                DVector::from_iterator(w.len(), v.iter().zip(w.iter()).map(|(a, b)| a / b))
            }
            Scaling::Soc { eta, wbar, .. } => Self::soc_jhj(wbar, v) / *eta,
            Scaling::Psd { p, rinv, .. } => {
                let m = smat(v, *p);
                svec(&(rinv.transpose() * m * rinv))
            }
        }
    }

    pub fn apply_wt_inv(&self, v: &[f64]) -> DVector<f64> {
        match self {
            Scaling::Zero { dim } => DVector::zeros(*dim),
            Scaling::Nonneg { .. } | Scaling::Soc { .. } => self.apply_w_inv(v),
            Scaling::Psd { p, rinv, .. } => {
                let m = smat(v, *p);
                svec(&(rinv * m * rinv.transpose()))
            }
        }
    }

    /// (W' W)^{-1} v.
    pub fn apply_wtw_inv(&self, v: &[f64]) -> DVector<f64> {
        let a = self.apply_wt_inv(v);
        self.apply_w_inv(a.as_slice())
    }

    /// Scaled point in block coordinates.
    pub fn lambda(&self) -> DVector<f64> {
        match self {
            Scaling::Zero { dim } => DVector::zeros(*dim),
            Scaling::Nonneg { lambda, .. } => lambda.clone(),
            Scaling::Soc { lambda, .. } => lambda.clone(),
            Scaling::Psd { lam, .. } => svec(&DMatrix::from_diagonal(lam)),
        }
    }

    /// Jordan product of two block vectors.
    pub fn jordan_prod(&self, a: &[f64], b: &[f64]) -> DVector<f64> {
        match self {
            Scaling::Zero { dim } => DVector::zeros(*dim),
            Scaling::Nonneg { .. } => DVector::from_iterator(
                a.len(),
                a.iter().zip(b.iter()).map(|(x, y)| x * y),
            ),
            Scaling::Soc { .. } => {
                let d = a.len();
                let mut out = DVector::zeros(d);
                out[0] = a.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
                for i in 1..d {
                    out[i] = a[0] * b[i] + b[0] * a[i];
                }
                out
            }
            Scaling::Psd { p, .. } => {
                let am = smat(a, *p);
                let bm = smat(b, *p);
                svec(&((&am * &bm + &bm * &am) * 0.5))
            }
        }
    }

    /// Solve `lambda o u = d` for `u`, where `lambda` is this block's scaled
    /// point.
    pub fn jordan_div_lambda(&self, d: &[f64]) -> DVector<f64> {
        match self {
            Scaling::Zero { dim } => DVector::zeros(*dim),
            Scaling::Nonneg { lambda, .. } => DVector::from_iterator(
                d.len(),
                d.iter().zip(lambda.iter()).map(|(x, l)| x / l),
            ),
            Scaling::Soc { lambda, .. } => {
                let n = d.len();
                let l0 = lambda[0];
                let l1 = lambda.rows(1, n - 1);
                let d0 = d[0];
                let d1 = DVector::from_row_slice(&d[1..]);
                let det = l0 * l0 - l1.norm_squared();
                let u0 = (l0 * d0 - l1.dot(&d1)) / det;
                let u1 = (d1 - &l1 * u0) / l0;
                let mut out = DVector::zeros(n);
                out[0] = u0;
                out.rows_mut(1, n - 1).copy_from(&u1);
                out
            }
            Scaling::Psd { p, lam, .. } => {
                let dm = smat(d, *p);
                let mut um = DMatrix::zeros(*p, *p);
                for i in 0..*p {
                    for j in 0..*p {
                        um[(i, j)] = 2.0 * dm[(i, j)] / (lam[i] + lam[j]);
                    }
                }
                svec(&um)
            }
        }
    }

    /// Cone identity element.
    #[cfg(test)]
    pub fn identity(&self) -> DVector<f64> {
        cone_identity(&self.spec())
    }

    #[cfg(test)]
    fn spec(&self) -> ConeSpec {
        match self {
            Scaling::Zero { dim } => ConeSpec::Zero(*dim),
            Scaling::Nonneg { w, .. } => ConeSpec::Nonneg(w.len()),
            Scaling::Soc { wbar, .. } => ConeSpec::Soc(wbar.len()),
            Scaling::Psd { p, .. } => ConeSpec::Psd(*p),
        }
    }
}

pub(crate) fn cone_identity(spec: &ConeSpec) -> DVector<f64> {
    match *spec {
        ConeSpec::Zero(d) => DVector::zeros(d),
        ConeSpec::Nonneg(d) => DVector::from_element(d, 1.0),
        ConeSpec::Soc(d) => {
            let mut e = DVector::zeros(d);
            e[0] = 1.0;
            e
        }
        ConeSpec::Psd(p) => svec(&DMatrix::identity(p, p)),
    }
}

/// Largest step `alpha` such that `u + alpha du` stays in the cone, for `u`
/// strictly interior. Returns `f64::INFINITY` when unbounded.
pub(crate) fn step_to_boundary(spec: &ConeSpec, u: &[f64], du: &[f64]) -> f64 {
    match *spec {
        ConeSpec::Zero(_) => f64::INFINITY,
        ConeSpec::Nonneg(_) => {
            let mut a = f64::INFINITY;
            for (x, d) in u.iter().zip(du.iter()) {
                if *d < 0.0 {
                    a = a.min(-x / d);
                }
            }
            a
        }
        ConeSpec::Soc(_) => {
            // p(alpha) = a0 + 2 a1 alpha + a2 alpha^2 with p(0) = a0 > 0;
            // the boundary is the smallest positive root.
            let a0 = soc_resid(u);
            let a1 = u[0] * du[0]
                - u[1..]
                    .iter()
                    .zip(du[1..].iter())
                    .map(|(x, y)| x * y)
                    .sum::<f64>();
            let a2 = soc_resid(du);
            let mut best = f64::INFINITY;
            if a2.abs() < 1e-300 {
                if a1 < 0.0 {
                    best = -a0 / (2.0 * a1);
                }
            } else {
                let disc = a1 * a1 - a2 * a0;
                if disc >= 0.0 {
                    let sq = disc.sqrt();
                    for root in [(-a1 - sq) / a2, (-a1 + sq) / a2] {
                        if root > 0.0 {
                            best = best.min(root);
                        }
                    }
                } else if a2 < 0.0 {
                    // should not happen with disc < 0; be safe
                    best = 0.0;
                }
            }
            // The apex constraint u0 + alpha du0 >= 0 is implied until the
            // quadratic hits zero, so `best` is the boundary step.
            best
        }
        ConeSpec::Psd(p) => {
            let um = smat(u, p);
            let dm = smat(du, p);
            let l = match chol_with_jitter(&um) {
                Some(l) => l,
                None => return 0.0,
            };
            // max alpha with I + alpha L^{-1} D L^{-T} >= 0
            let linv = l
                .clone()
                .try_inverse()
                .unwrap_or_else(|| DMatrix::identity(p, p));
            let mut m = &linv * dm * linv.transpose();
            m = (&m + m.transpose()) * 0.5;
            let eig = m.symmetric_eigen();
            let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
            if min_eig >= 0.0 {
                f64::INFINITY
            } else {
                -1.0 / min_eig
            }
        }
    }
}
