//! Symmetric vectorization and the complex-Hermitian to real-symmetric embedding.
//!
//! PSD cone blocks are stored in `svec` form: the lower triangle stacked
//! column-major with off-diagonal entries scaled by sqrt(2), so that
//! `<svec(A), svec(B)> = Tr{A B}` for symmetric `A`, `B`.
//!
//! Complex Hermitian matrix inequalities are handled through the standard
//! doubling map `T(H) = [Re H, -Im H; Im H, Re H]`, which is real symmetric
//! for Hermitian `H` and satisfies `H ⪰ 0  ⟺  T(H) ⪰ 0` (each eigenvalue of
//! `H` appears twice in `T(H)`, hence `Tr T(H) = 2 Tr H`).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Dimension of svec(S) for a p-by-p symmetric matrix.
pub fn svec_dim(p: usize) -> usize {
    p * (p + 1) / 2
}

/// Matrix side length from an svec dimension; panics if `d` is not triangular.
pub fn svec_side(d: usize) -> usize {
    let p = ((((8 * d + 1) as f64).sqrt() - 1.0) / 2.0).round() as usize;
    assert_eq!(p * (p + 1) / 2, d, "not a triangular dimension: {d}");
    p
}

/// Lower-triangle column-major stacking with sqrt(2) off-diagonal scaling.
pub fn svec(s: &DMatrix<f64>) -> DVector<f64> {
    let p = s.nrows();
    assert_eq!(p, s.ncols());
    let mut v = DVector::zeros(svec_dim(p));
    let mut k = 0;
    for j in 0..p {
        for i in j..p {
            v[k] = if i == j { s[(i, j)] } else { SQRT2 * s[(i, j)] };
            k += 1;
        }
    }
    v
}

/// Inverse of [`svec`].
pub fn smat(v: &[f64], p: usize) -> DMatrix<f64> {
    assert_eq!(v.len(), svec_dim(p));
    let mut s = DMatrix::zeros(p, p);
    let mut k = 0;
    for j in 0..p {
        for i in j..p {
            let val = if i == j { v[k] } else { v[k] / SQRT2 };
            s[(i, j)] = val;
            s[(j, i)] = val;
            k += 1;
        }
    }
    s
}

/// Real-symmetric embedding of a complex Hermitian matrix.
pub fn embed_hermitian(h: &DMatrix<Complex64>) -> DMatrix<f64> {
    let p = h.nrows();
    assert_eq!(p, h.ncols());
    let mut t = DMatrix::zeros(2 * p, 2 * p);
    for i in 0..p {
        for j in 0..p {
            let re = h[(i, j)].re;
            let im = h[(i, j)].im;
            t[(i, j)] = re;
            t[(i + p, j + p)] = re;
            t[(i, j + p)] = -im;
            t[(i + p, j)] = im;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Complex;

    fn random_sym(p: usize, seed: u64) -> DMatrix<f64> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(p, p, |_, _| rng.gen_range(-1.0..1.0));
        (&a + a.transpose()) * 0.5
    }

    #[test]
    fn svec_inner_product_is_trace() {
        let a = random_sym(5, 1);
        let b = random_sym(5, 2);
        let tr = (&a * &b).trace();
        let dot = svec(&a).dot(&svec(&b));
        assert!((tr - dot).abs() < 1e-12);
    }

    #[test]
    fn svec_smat_roundtrip() {
        let a = random_sym(6, 3);
        let back = smat(svec(&a).as_slice(), 6);
        assert!((&a - &back).norm() < 1e-14);
    }

    #[test]
    fn hermitian_embedding_preserves_eigenvalues_doubled() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = 4;
        let a = DMatrix::from_fn(p, p, |_, _| {
            Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let h = (&a + a.adjoint()) * Complex::new(0.5, 0.0);
        let t = embed_hermitian(&h);
        let mut eh: Vec<f64> = h
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .collect();
        let mut et: Vec<f64> = t.clone().symmetric_eigen().eigenvalues.iter().cloned().collect();
        eh.sort_by(|x, y| x.partial_cmp(y).unwrap());
        et.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (i, lam) in eh.iter().enumerate() {
            assert!((et[2 * i] - lam).abs() < 1e-10);
            assert!((et[2 * i + 1] - lam).abs() < 1e-10);
        }
        assert!((t.trace() - 2.0 * h.trace().re).abs() < 1e-12);
    }
}
