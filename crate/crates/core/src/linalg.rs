//! Complex linear-algebra helpers shared across the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn cmat_zeros(r: usize, c: usize) -> CMat {
    CMat::from_element(r, c, C_ZERO)
}

pub fn cvec_zeros(n: usize) -> CVec {
    CVec::from_element(n, C_ZERO)
}

/// Largest absolute deviation from Hermitian symmetry.
pub fn hermitian_error(m: &CMat) -> f64 {
    let d = m - m.adjoint();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> RVec {
    let mut ev: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    RVec::from_vec(ev)
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m)[0]
}

pub fn max_eigenvalue(m: &CMat) -> f64 {
    let ev = hermitian_eigenvalues(m);
    ev[ev.len() - 1]
}

/// Spectral norm of a Hermitian matrix.
pub fn hermitian_spectral_norm(m: &CMat) -> f64 {
    let ev = hermitian_eigenvalues(m);
    ev[0].abs().max(ev[ev.len() - 1].abs())
}

/// Hermitian square root from the eigen-decomposition, clamping eigenvalues
/// in `[-clamp_tol, 0)` to zero. Eigenvalues below `-clamp_tol` are a
/// construction error reported as `Err(min_eig)`.
pub fn hermitian_sqrt(m: &CMat, clamp_tol: f64) -> Result<CMat, f64> {
    let eig = m.clone().symmetric_eigen();
    let mut min_eig = f64::INFINITY;
    for l in eig.eigenvalues.iter() {
        min_eig = min_eig.min(*l);
    }
    if min_eig < -clamp_tol {
        return Err(min_eig);
    }
    let n = m.nrows();
    let mut out = cmat_zeros(n, n);
    for (j, l) in eig.eigenvalues.iter().enumerate() {
        let s = l.max(0.0).sqrt();
        let v = eig.eigenvectors.column(j);
        out += (&v * v.adjoint()) * Complex64::new(s, 0.0);
    }
    Ok(out)
}

/// Solve `A X = B` for Hermitian positive-definite `A`, with an eigenvalue
/// floor fallback when the Cholesky factorization fails.
pub fn solve_hpd(a: &CMat, b: &CMat) -> CMat {
    if let Some(ch) = a.clone().cholesky() {
        return ch.solve(b);
    }
    let eig = a.clone().symmetric_eigen();
    let n = a.nrows();
    let floor = 1e-12 * (1.0 + a.diagonal().iter().map(|z| z.re.abs()).sum::<f64>() / n as f64);
    let mut inv = cmat_zeros(n, n);
    for (j, l) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(j);
        inv += (&v * v.adjoint()) * Complex64::new(1.0 / l.max(floor), 0.0);
    }
    inv * b
}

pub fn solve_hpd_vec(a: &CMat, b: &CVec) -> CVec {
    let bm = CMat::from_column_slice(b.len(), 1, b.as_slice());
    let x = solve_hpd(a, &bm);
    CVec::from_column_slice(x.as_slice())
}

/// Frobenius norm squared.
pub fn fro2(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Real part of `Tr{A^H B}`.
pub fn inner_re(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// `Diag(v) * M` without forming the diagonal matrix.
pub fn scale_rows(v: &CVec, m: &CMat) -> CMat {
    let mut out = m.clone();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[(i, j)] *= v[i];
        }
    }
    out
}
