//! Correlated Rician channel ensemble with cascaded-channel partial CSI.
//!
//! The BS-RIS channel and the RIS-user channels are correlated Rician,
//!
//! ```text
//!   H_dr   = sqrt(b0/(d0+1)) (sqrt(d0) Hbar_dr + Sig_R^{1/2} E Sig_B^{1/2})
//!   h_r,k  = sqrt(bk/(dk+1)) (sqrt(dk) hbar_r,k + Sig_r,k^{1/2} e_k)
//! ```
//!
//! with iid standard complex Gaussian `E`, `e_k`; the direct BS-user links
//! are Rayleigh with iid entries of per-entry variance `beta_direct,k`. What
//! a receiver can actually estimate is the cascaded channel
//! `G_k = Diag(conj(h_r,k)) H_dr` together with `h_k`; the individual factors
//! stay hidden and only their statistics are known ("partial CSI").
//!
//! Array convention (the paper delegates this to a textbook): both arrays
//! have their elements along the world y-axis with broadside along x, phase
//! referenced to the first element, so the phase step toward a target is
//! `2*pi*spacing_wl*u_y` with `u_y` the y-component of the unit direction.
//! The RIS is a planar grid whose second axis is out of the simulation plane
//! and therefore contributes no phase progression for in-plane targets.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::linalg::{cmat_zeros, hermitian_error, hermitian_sqrt, CMat, CVec};
use crate::rng::{complex_gaussian_mat, complex_gaussian_vec, rng_from};

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("correlation coefficient must lie in [0,1), got {0}")]
    BadCorrelation(f64),
    #[error("{name} is not Hermitian (max asymmetry {err:.3e})")]
    NotHermitian { name: String, err: f64 },
    #[error("{name} is not PSD (min eigenvalue {min_eig:.3e})")]
    NotPsd { name: String, min_eig: f64 },
    #[error("{name} does not have a unit diagonal (entry {entry:.6} at {index})")]
    NotUnitDiagonal {
        name: String,
        entry: f64,
        index: usize,
    },
    #[error("{name}: LoS entry at {index} has modulus {modulus:.6}, expected 1")]
    NotUnitModulus {
        name: String,
        modulus: f64,
        index: usize,
    },
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{name}: negative parameter {value}")]
    NegativeParameter { name: String, value: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct UlaSpec {
    pub count: usize,
    pub spacing_wl: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct UpaSpec {
    pub rows: usize,
    pub cols: usize,
    pub spacing_wl: f64,
}

impl UpaSpec {
    pub fn count(&self) -> usize {
        self.rows * self.cols
    }

    /// Most-square grid for a given element count (rows <= cols).
    pub fn auto(count: usize, spacing_wl: f64) -> Self {
        let mut rows = (count as f64).sqrt().floor() as usize;
        while rows > 1 && count % rows != 0 {
            rows -= 1;
        }
        let rows = rows.max(1);
        UpaSpec {
            rows,
            cols: count / rows,
            spacing_wl,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Geometry {
    pub bs_position: [f64; 2],
    pub ris_position: [f64; 2],
    pub user_positions: Vec<[f64; 2]>,
    pub bs_array: UlaSpec,
    pub ris_array: UpaSpec,
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

impl Geometry {
    pub fn validate(&self) -> Result<(), ChannelError> {
        if self.bs_array.count == 0 || self.ris_array.count() == 0 || self.user_positions.is_empty()
        {
            return Err(ChannelError::Geometry(
                "N, M and K must all be at least 1".into(),
            ));
        }
        let mut pts = vec![self.bs_position, self.ris_position];
        pts.extend(self.user_positions.iter().cloned());
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                if dist(pts[i], pts[j]) <= 0.0 {
                    return Err(ChannelError::Geometry(format!(
                        "coincident nodes {i} and {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn num_users(&self) -> usize {
        self.user_positions.len()
    }

    pub fn bs_ris_distance(&self) -> f64 {
        dist(self.bs_position, self.ris_position)
    }

    pub fn ris_user_distance(&self, k: usize) -> f64 {
        dist(self.ris_position, self.user_positions[k])
    }

    pub fn bs_user_distance(&self, k: usize) -> f64 {
        dist(self.bs_position, self.user_positions[k])
    }
}

/// Pathloss in dB: `-PL0 - 10 alpha log10(d)`.
pub fn pathloss_db(distance_m: f64, exponent: f64, pl0_db: f64) -> Result<f64, ChannelError> {
    if distance_m <= 0.0 {
        return Err(ChannelError::NonPositiveDistance(distance_m));
    }
    Ok(-pl0_db - 10.0 * exponent * distance_m.log10())
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// ULA steering vector for a phase step of `2 pi spacing u_y` per element.
fn ula_steering(count: usize, spacing_wl: f64, u_y: f64) -> CVec {
    let step = 2.0 * std::f64::consts::PI * spacing_wl * u_y;
    CVec::from_fn(count, |n, _| Complex64::from_polar(1.0, step * n as f64))
}

fn unit_dir_y(from: [f64; 2], to: [f64; 2]) -> f64 {
    (to[1] - from[1]) / dist(from, to)
}

/// UPA steering vector toward an in-plane target: rows stack copies of the
/// in-plane ULA response (no elevation progression), element order row-major.
fn upa_steering(spec: &UpaSpec, u_y: f64) -> CVec {
    let line = ula_steering(spec.cols, spec.spacing_wl, u_y);
    let mut v = CVec::from_element(spec.count(), Complex64::new(0.0, 0.0));
    for r in 0..spec.rows {
        for c in 0..spec.cols {
            v[r * spec.cols + c] = line[c];
        }
    }
    v
}

/// LoS components: `Hbar_dr = a_RIS(BS seen from RIS) a_BS(RIS seen from BS)^H`
/// and `hbar_r,k = a_RIS(user k seen from RIS)`.
pub fn build_los_components(geo: &Geometry) -> Result<(CMat, Vec<CVec>), ChannelError> {
    geo.validate()?;
    let a_ris_bs = upa_steering(&geo.ris_array, unit_dir_y(geo.ris_position, geo.bs_position));
    let a_bs_ris = ula_steering(
        geo.bs_array.count,
        geo.bs_array.spacing_wl,
        unit_dir_y(geo.bs_position, geo.ris_position),
    );
    let hbar_dr = &a_ris_bs * a_bs_ris.adjoint();
    let hbar_r = geo
        .user_positions
        .iter()
        .map(|u| upa_steering(&geo.ris_array, unit_dir_y(geo.ris_position, *u)))
        .collect();
    Ok((hbar_dr, hbar_r))
}

/// Exponential spatial correlation: entry `(i, j) = coeff^|i-j|`.
pub fn exponential_correlation(size: usize, coeff: f64) -> Result<CMat, ChannelError> {
    if !(0.0..1.0).contains(&coeff) {
        return Err(ChannelError::BadCorrelation(coeff));
    }
    Ok(CMat::from_fn(size, size, |i, j| {
        Complex64::new(coeff.powi((i as i32 - j as i32).abs()), 0.0)
    }))
}

/// Distribution parameters of the partial-CSI model.
#[derive(Debug, Clone)]
pub struct ChannelStatistics {
    /// beta_0: BS-RIS pathloss, linear scale.
    pub beta_bs_ris: f64,
    /// beta_k: RIS-user pathloss, linear scale.
    pub beta_ris_user: Vec<f64>,
    /// BS-user pathloss (per-entry Rayleigh variance), linear scale.
    pub beta_direct: Vec<f64>,
    /// delta_0.
    pub delta_bs_ris: f64,
    /// delta_k.
    pub delta_ris_user: Vec<f64>,
    pub hbar_dr: CMat,
    pub hbar_r: Vec<CVec>,
    pub sigma_bs: CMat,
    pub sigma_ris: CMat,
    pub sigma_ris_user: Vec<CMat>,
    sigma_bs_sqrt: CMat,
    sigma_ris_sqrt: CMat,
    sigma_ris_user_sqrt: Vec<CMat>,
}

const HERM_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;
const DIAG_TOL: f64 = 1e-12;

fn check_correlation(name: &str, m: &CMat) -> Result<CMat, ChannelError> {
    let err = hermitian_error(m);
    if err > HERM_TOL {
        return Err(ChannelError::NotHermitian {
            name: name.into(),
            err,
        });
    }
    for (i, d) in m.diagonal().iter().enumerate() {
        if (d.re - 1.0).abs() > DIAG_TOL || d.im.abs() > DIAG_TOL {
            return Err(ChannelError::NotUnitDiagonal {
                name: name.into(),
                entry: d.re,
                index: i,
            });
        }
    }
    hermitian_sqrt(m, PSD_TOL).map_err(|min_eig| ChannelError::NotPsd {
        name: name.into(),
        min_eig,
    })
}

impl ChannelStatistics {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        beta_bs_ris: f64,
        beta_ris_user: Vec<f64>,
        beta_direct: Vec<f64>,
        delta_bs_ris: f64,
        delta_ris_user: Vec<f64>,
        hbar_dr: CMat,
        hbar_r: Vec<CVec>,
        sigma_bs: CMat,
        sigma_ris: CMat,
        sigma_ris_user: Vec<CMat>,
    ) -> Result<Self, ChannelError> {
        let k = beta_ris_user.len();
        let (m, n) = (hbar_dr.nrows(), hbar_dr.ncols());
        if beta_direct.len() != k
            || delta_ris_user.len() != k
            || hbar_r.len() != k
            || sigma_ris_user.len() != k
        {
            return Err(ChannelError::Dimension(
                "per-user parameter lists must share a length".into(),
            ));
        }
        if sigma_bs.nrows() != n || sigma_ris.nrows() != m {
            return Err(ChannelError::Dimension(
                "correlation matrices must match the array sizes".into(),
            ));
        }
        for (name, v) in [("beta_0", vec![beta_bs_ris]), ("beta_k", beta_ris_user.clone()),
            ("beta_direct", beta_direct.clone()), ("delta_0", vec![delta_bs_ris]),
            ("delta_k", delta_ris_user.clone())]
        {
            for x in v {
                if x < 0.0 || !x.is_finite() {
                    return Err(ChannelError::NegativeParameter {
                        name: name.into(),
                        value: x,
                    });
                }
            }
        }
        for (idx, z) in hbar_dr.iter().enumerate() {
            if (z.norm() - 1.0).abs() > 1e-9 {
                return Err(ChannelError::NotUnitModulus {
                    name: "Hbar_dr".into(),
                    modulus: z.norm(),
                    index: idx,
                });
            }
        }
        for (kk, h) in hbar_r.iter().enumerate() {
            if h.len() != m {
                return Err(ChannelError::Dimension(format!(
                    "hbar_r[{kk}] has length {}, expected {m}",
                    h.len()
                )));
            }
            for (idx, z) in h.iter().enumerate() {
                if (z.norm() - 1.0).abs() > 1e-9 {
                    return Err(ChannelError::NotUnitModulus {
                        name: format!("hbar_r[{kk}]"),
                        modulus: z.norm(),
                        index: idx,
                    });
                }
            }
        }
        let sigma_bs_sqrt = check_correlation("Sigma_B", &sigma_bs)?;
        let sigma_ris_sqrt = check_correlation("Sigma_R", &sigma_ris)?;
        let mut sigma_ris_user_sqrt = Vec::with_capacity(k);
        for (kk, s) in sigma_ris_user.iter().enumerate() {
            if s.nrows() != m {
                return Err(ChannelError::Dimension(format!(
                    "Sigma_r[{kk}] must be {m}x{m}"
                )));
            }
            sigma_ris_user_sqrt.push(check_correlation(&format!("Sigma_r[{kk}]"), s)?);
        }
        Ok(ChannelStatistics {
            beta_bs_ris,
            beta_ris_user,
            beta_direct,
            delta_bs_ris,
            delta_ris_user,
            hbar_dr,
            hbar_r,
            sigma_bs,
            sigma_ris,
            sigma_ris_user,
            sigma_bs_sqrt,
            sigma_ris_sqrt,
            sigma_ris_user_sqrt,
        })
    }

    /// Statistics from geometry and pathloss parameters, identity
    /// correlation unless exponential coefficients are given.
    pub fn from_geometry(
        geo: &Geometry,
        pl0_db: f64,
        alpha_direct: f64,
        alpha_ris: f64,
        delta: f64,
        corr_bs: f64,
        corr_ris: f64,
        corr_user: f64,
    ) -> Result<Self, ChannelError> {
        let (hbar_dr, hbar_r) = build_los_components(geo)?;
        let k = geo.num_users();
        let n = geo.bs_array.count;
        let m = geo.ris_array.count();
        let beta0 = db_to_linear(pathloss_db(geo.bs_ris_distance(), alpha_ris, pl0_db)?);
        let mut beta_ru = Vec::with_capacity(k);
        let mut beta_d = Vec::with_capacity(k);
        for kk in 0..k {
            beta_ru.push(db_to_linear(pathloss_db(
                geo.ris_user_distance(kk),
                alpha_ris,
                pl0_db,
            )?));
            beta_d.push(db_to_linear(pathloss_db(
                geo.bs_user_distance(kk),
                alpha_direct,
                pl0_db,
            )?));
        }
        ChannelStatistics::new(
            beta0,
            beta_ru,
            beta_d,
            delta,
            vec![delta; k],
            hbar_dr,
            hbar_r,
            exponential_correlation(n, corr_bs)?,
            exponential_correlation(m, corr_ris)?,
            vec![exponential_correlation(m, corr_user)?; k],
        )
    }

    pub fn num_users(&self) -> usize {
        self.beta_ris_user.len()
    }

    pub fn num_ris_elements(&self) -> usize {
        self.hbar_dr.nrows()
    }

    pub fn num_bs_antennas(&self) -> usize {
        self.hbar_dr.ncols()
    }

    /// One draw of the hidden channels plus the observable cascaded channels.
    /// Identical `(stats, seed)` produce bit-identical realizations.
    pub fn sample(&self, seed: u64) -> ChannelRealization {
        let mut rng = rng_from(seed, &[0x43484e4c]); // "CHNL"
        self.sample_with_rng(&mut rng)
    }

    pub fn sample_with_rng<R: Rng>(&self, rng: &mut R) -> ChannelRealization {
        let m = self.num_ris_elements();
        let n = self.num_bs_antennas();
        let k = self.num_users();
        let c0 = (self.beta_bs_ris / (self.delta_bs_ris + 1.0)).sqrt();
        let e = complex_gaussian_mat(rng, m, n);
        let nlos = &self.sigma_ris_sqrt * e * &self.sigma_bs_sqrt;
        let h_dr = (&self.hbar_dr * Complex64::new(self.delta_bs_ris.sqrt(), 0.0) + nlos)
            * Complex64::new(c0, 0.0);
        let mut h_r = Vec::with_capacity(k);
        let mut h_direct = Vec::with_capacity(k);
        for kk in 0..k {
            let ck = (self.beta_ris_user[kk] / (self.delta_ris_user[kk] + 1.0)).sqrt();
            let ek = complex_gaussian_vec(rng, m);
            let v = (&self.hbar_r[kk] * Complex64::new(self.delta_ris_user[kk].sqrt(), 0.0)
                + &self.sigma_ris_user_sqrt[kk] * ek)
                * Complex64::new(ck, 0.0);
            h_r.push(v);
            let hd = complex_gaussian_vec(rng, n) * Complex64::new(self.beta_direct[kk].sqrt(), 0.0);
            h_direct.push(hd);
        }
        let g = h_r
            .iter()
            .map(|hr| {
                let conj = CVec::from_fn(m, |i, _| hr[i].conj());
                crate::linalg::scale_rows(&conj, &h_dr)
            })
            .collect();
        ChannelRealization {
            h_direct,
            h_dr,
            h_r,
            g,
        }
    }

    /// Fresh conditional draws of the hidden pair `(H_dr, {h_r,k})` from the
    /// marginal model, leaving the direct links of `base` untouched.
    pub fn redraw_hidden<R: Rng>(&self, base: &ChannelRealization, rng: &mut R) -> ChannelRealization {
        let mut fresh = self.sample_with_rng(rng);
        fresh.h_direct = base.h_direct.clone();
        fresh
    }
}

/// One draw: direct channels, hidden truth, and the cascaded channels that a
/// receiver could actually estimate.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub h_direct: Vec<CVec>,
    /// Hidden truth, used only for evaluation.
    pub h_dr: CMat,
    /// Hidden truth, used only for evaluation.
    pub h_r: Vec<CVec>,
    /// `G_k = Diag(conj(h_r,k)) H_dr`.
    pub g: Vec<CMat>,
}

impl ChannelRealization {
    pub fn num_users(&self) -> usize {
        self.g.len()
    }

    pub fn num_ris_elements(&self) -> usize {
        self.h_dr.nrows()
    }

    pub fn num_bs_antennas(&self) -> usize {
        self.h_dr.ncols()
    }

    /// Stacked per-user channel `H_k = [G_k; h_k^H]` of size (M+1) x N.
    pub fn stacked(&self, k: usize) -> CMat {
        let m = self.num_ris_elements();
        let n = self.num_bs_antennas();
        let mut h = cmat_zeros(m + 1, n);
        h.view_mut((0, 0), (m, n)).copy_from(&self.g[k]);
        for j in 0..n {
            h[(m, j)] = self.h_direct[k][j].conj();
        }
        h
    }

    pub fn stacked_all(&self) -> Vec<CMat> {
        (0..self.num_users()).map(|k| self.stacked(k)).collect()
    }
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;

    pub fn small_geometry(n: usize, m: usize, k: usize) -> Geometry {
        let users = (0..k)
            .map(|i| [100.0 + 2.0 * i as f64, -1.5 * i as f64])
            .collect();
        Geometry {
            bs_position: [0.0, 0.0],
            ris_position: [80.0, 10.0],
            user_positions: users,
            bs_array: UlaSpec {
                count: n,
                spacing_wl: 0.5,
            },
            ris_array: UpaSpec::auto(m, 0.5),
        }
    }

    pub fn small_stats(n: usize, m: usize, k: usize) -> ChannelStatistics {
        ChannelStatistics::from_geometry(&small_geometry(n, m, k), 40.0, 3.5, 2.0, 10.0, 0.0, 0.0, 0.0)
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::tests_support::{small_geometry, small_stats};
    use super::*;
    use crate::linalg::min_eigenvalue;
    use approx::assert_relative_eq;

    #[test]
    fn pathloss_reference_values() {
        assert_relative_eq!(pathloss_db(1.0, 3.5, 40.0).unwrap(), -40.0, epsilon = 1e-12);
        assert_relative_eq!(pathloss_db(100.0, 2.0, 40.0).unwrap(), -80.0, epsilon = 1e-12);
        assert_relative_eq!(pathloss_db(10.0, 3.5, 40.0).unwrap(), -75.0, epsilon = 1e-12);
        assert!(pathloss_db(0.0, 2.0, 40.0).is_err());
        assert!(pathloss_db(-3.0, 2.0, 40.0).is_err());
    }

    #[test]
    fn pathloss_monotone_in_distance_and_exponent() {
        let mut prev = f64::INFINITY;
        for d in [1.0, 2.0, 5.0, 20.0, 120.0] {
            let v = pathloss_db(d, 2.5, 40.0).unwrap();
            assert!(v < prev);
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for a in [1.5, 2.0, 3.0, 4.0] {
            let v = pathloss_db(50.0, a, 40.0).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn los_single_element_is_one() {
        let geo = small_geometry(1, 1, 2);
        let (hbar, hr) = build_los_components(&geo).unwrap();
        assert_relative_eq!(hbar[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(hbar[(0, 0)].im, 0.0, epsilon = 1e-12);
        for h in hr {
            assert_relative_eq!(h[0].re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn los_broadside_user_gives_all_ones() {
        // User due +x of the RIS: u_y = 0, so zero phase progression.
        let geo = Geometry {
            bs_position: [0.0, 0.0],
            ris_position: [10.0, 5.0],
            user_positions: vec![[60.0, 5.0]],
            bs_array: UlaSpec {
                count: 2,
                spacing_wl: 0.5,
            },
            ris_array: UpaSpec {
                rows: 1,
                cols: 4,
                spacing_wl: 0.5,
            },
        };
        let (_, hr) = build_los_components(&geo).unwrap();
        for z in hr[0].iter() {
            assert_relative_eq!(z.re, 1.0, epsilon = 1e-12);
            assert_relative_eq!(z.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn los_two_element_line_at_30_degrees() {
        // User at 30 degrees from broadside: phases [0, pi sin(30deg)] = [0, pi/2].
        let angle = 30f64.to_radians();
        let d = 50.0;
        let geo = Geometry {
            bs_position: [-20.0, 0.0],
            ris_position: [0.0, 0.0],
            user_positions: vec![[d * angle.cos(), d * angle.sin()]],
            bs_array: UlaSpec {
                count: 1,
                spacing_wl: 0.5,
            },
            ris_array: UpaSpec {
                rows: 1,
                cols: 2,
                spacing_wl: 0.5,
            },
        };
        let (_, hr) = build_los_components(&geo).unwrap();
        assert_relative_eq!(hr[0][0].arg(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(hr[0][1].arg(), std::f64::consts::FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn exponential_correlation_cases() {
        let id = exponential_correlation(3, 0.0).unwrap();
        assert!((id - CMat::identity(3, 3)).iter().all(|z| z.norm() < 1e-15));
        let two = exponential_correlation(2, 0.5).unwrap();
        assert_relative_eq!(two[(0, 1)].re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(two[(1, 0)].re, 0.5, epsilon = 1e-15);
        let big = exponential_correlation(4, 0.9).unwrap();
        assert!(min_eigenvalue(&big) > 0.0);
        assert!(exponential_correlation(3, 1.0).is_err());
        assert!(exponential_correlation(3, -0.1).is_err());
    }

    #[test]
    fn cascaded_channel_identity() {
        let stats = small_stats(3, 4, 2);
        let r = stats.sample(7);
        for k in 0..2 {
            let mut expected = r.h_dr.clone();
            for i in 0..4 {
                for j in 0..3 {
                    expected[(i, j)] *= r.h_r[k][i].conj();
                }
            }
            let num = (&expected - &r.g[k]).norm();
            assert!(num <= 1e-12 * expected.norm());
        }
    }

    #[test]
    fn rician_limit_is_pure_los() {
        let geo = small_geometry(2, 2, 1);
        let (hbar, hr) = build_los_components(&geo).unwrap();
        let stats = ChannelStatistics::new(
            2e-8,
            vec![3e-7],
            vec![1e-11],
            1e12,
            vec![1e12],
            hbar.clone(),
            hr,
            CMat::identity(2, 2),
            CMat::identity(2, 2),
            vec![CMat::identity(2, 2)],
        )
        .unwrap();
        let r = stats.sample(3);
        let expected = hbar * Complex64::new((2e-8f64).sqrt(), 0.0);
        let rel = (&r.h_dr - &expected).norm() / expected.norm();
        assert!(rel < 1e-5, "relative deviation {rel}");
    }

    #[test]
    fn zero_pathloss_gives_zero_ris_user_channel() {
        let geo = small_geometry(2, 3, 1);
        let (hbar, hr) = build_los_components(&geo).unwrap();
        let stats = ChannelStatistics::new(
            2e-8,
            vec![0.0],
            vec![1e-11],
            10.0,
            vec![10.0],
            hbar,
            hr,
            CMat::identity(2, 2),
            CMat::identity(3, 3),
            vec![CMat::identity(3, 3)],
        )
        .unwrap();
        let r = stats.sample(11);
        assert!(r.h_r[0].iter().all(|z| z.norm() == 0.0));
        assert!(r.g[0].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn identical_seed_identical_realization() {
        let stats = small_stats(2, 4, 2);
        let a = stats.sample(99);
        let b = stats.sample(99);
        assert_eq!(a.h_dr, b.h_dr);
        assert_eq!(a.h_direct[1], b.h_direct[1]);
        let c = stats.sample(100);
        assert_ne!(a.h_dr, c.h_dr);
    }

    #[test]
    fn stats_validation_rejects_bad_matrices() {
        let geo = small_geometry(2, 2, 1);
        let (hbar, hr) = build_los_components(&geo).unwrap();
        let mut bad_diag = CMat::identity(2, 2);
        bad_diag[(0, 0)] = Complex64::new(1.5, 0.0);
        let r = ChannelStatistics::new(
            1e-8,
            vec![1e-7],
            vec![1e-11],
            1.0,
            vec![1.0],
            hbar.clone(),
            hr.clone(),
            bad_diag,
            CMat::identity(2, 2),
            vec![CMat::identity(2, 2)],
        );
        assert!(matches!(r, Err(ChannelError::NotUnitDiagonal { .. })));

        let mut not_psd = CMat::identity(2, 2);
        not_psd[(0, 1)] = Complex64::new(1.2, 0.0);
        not_psd[(1, 0)] = Complex64::new(1.2, 0.0);
        let r = ChannelStatistics::new(
            1e-8,
            vec![1e-7],
            vec![1e-11],
            1.0,
            vec![1.0],
            hbar,
            hr,
            not_psd,
            CMat::identity(2, 2),
            vec![CMat::identity(2, 2)],
        );
        assert!(matches!(r, Err(ChannelError::NotPsd { .. })));
    }
}
