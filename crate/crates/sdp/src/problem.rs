//! Conic problem container and incremental builder.
//!
//! The solver works on the inequality form
//!
//! ```text
//!   minimize    c' x
//!   subject to  s = h - G x,   s in K,
//! ```
//!
//! where `K` is a Cartesian product of zero, nonnegative, second-order and
//! PSD cones, laid out block by block in row order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::embed::{embed_hermitian, svec, svec_dim};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeSpec {
    /// s = 0 (affine equalities), dual free.
    Zero(usize),
    /// s >= 0 elementwise.
    Nonneg(usize),
    /// s_0 >= ||s_{1:}||_2; the value is the full block dimension (>= 1).
    Soc(usize),
    /// svec of a p-by-p symmetric PSD matrix; the value is the side p.
    Psd(usize),
}

impl ConeSpec {
    pub fn dim(&self) -> usize {
        match *self {
            ConeSpec::Zero(d) | ConeSpec::Nonneg(d) | ConeSpec::Soc(d) => d,
            ConeSpec::Psd(p) => svec_dim(p),
        }
    }

    /// Barrier degree used to normalize the complementarity measure.
    pub fn degree(&self) -> f64 {
        match *self {
            ConeSpec::Zero(_) => 0.0,
            ConeSpec::Nonneg(d) => d as f64,
            ConeSpec::Soc(_) => 2.0,
            ConeSpec::Psd(p) => p as f64,
        }
    }
}

/// Dense conic program data.
#[derive(Debug, Clone)]
pub struct ConicProblem {
    pub num_vars: usize,
    pub cost: DVector<f64>,
    pub g: DMatrix<f64>,
    pub h: DVector<f64>,
    pub cones: Vec<ConeSpec>,
}

impl ConicProblem {
    pub fn num_rows(&self) -> usize {
        self.cones.iter().map(|c| c.dim()).sum()
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.cost.len() != self.num_vars {
            return Err(format!(
                "cost length {} != num_vars {}",
                self.cost.len(),
                self.num_vars
            ));
        }
        let m = self.num_rows();
        if self.g.nrows() != m || self.h.len() != m {
            return Err(format!(
                "constraint rows {}x{} and h {} inconsistent with cone dims {}",
                self.g.nrows(),
                self.g.ncols(),
                self.h.len(),
                m
            ));
        }
        if self.g.ncols() != self.num_vars {
            return Err(format!(
                "G has {} columns, expected {}",
                self.g.ncols(),
                self.num_vars
            ));
        }
        if self
            .g
            .iter()
            .chain(self.h.iter())
            .chain(self.cost.iter())
            .any(|v| !v.is_finite())
        {
            return Err("non-finite entry in problem data".into());
        }
        Ok(())
    }
}

/// Row-by-row builder around an affine-expression representation.
///
/// Every affine scalar is `(coeffs over variables, constant)`; a constraint
/// `expr >= 0` becomes the row `s = const - (-coeffs) x` of a nonnegative
/// block, and similarly for the other cones.
pub struct ProblemBuilder {
    num_vars: usize,
    cost: DVector<f64>,
    rows: Vec<(Vec<(usize, f64)>, f64)>,
    cones: Vec<ConeSpec>,
}

/// Sparse affine scalar expression `sum coeffs_i x_i + constant`.
#[derive(Debug, Clone, Default)]
pub struct Affine {
    pub coeffs: Vec<(usize, f64)>,
    pub constant: f64,
}

impl Affine {
    pub fn constant(c: f64) -> Self {
        Affine {
            coeffs: Vec::new(),
            constant: c,
        }
    }

    pub fn var(i: usize) -> Self {
        Affine {
            coeffs: vec![(i, 1.0)],
            constant: 0.0,
        }
    }

    pub fn term(i: usize, c: f64) -> Self {
        Affine {
            coeffs: vec![(i, c)],
            constant: 0.0,
        }
    }

    pub fn add_term(&mut self, i: usize, c: f64) {
        if c != 0.0 {
            self.coeffs.push((i, c));
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        Affine {
            coeffs: self.coeffs.iter().map(|&(i, c)| (i, a * c)).collect(),
            constant: a * self.constant,
        }
    }
}

impl ProblemBuilder {
    pub fn new(num_vars: usize) -> Self {
        ProblemBuilder {
            num_vars,
            cost: DVector::zeros(num_vars),
            rows: Vec::new(),
            cones: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_cost(&mut self, i: usize, c: f64) {
        self.cost[i] = c;
    }

    pub fn add_cost(&mut self, i: usize, c: f64) {
        self.cost[i] += c;
    }

    fn push_rows(&mut self, exprs: &[Affine], spec: ConeSpec) {
        assert_eq!(exprs.len(), spec.dim());
        for e in exprs {
            self.rows.push((e.coeffs.clone(), e.constant));
        }
        self.cones.push(spec);
    }

    /// `expr == 0`.
    pub fn add_eq(&mut self, expr: Affine) {
        self.push_rows(&[expr], ConeSpec::Zero(1));
    }

    /// `expr >= 0`.
    pub fn add_nonneg(&mut self, expr: Affine) {
        self.push_rows(&[expr], ConeSpec::Nonneg(1));
    }

    /// `exprs[0] >= || exprs[1:] ||_2`.
    pub fn add_soc(&mut self, exprs: Vec<Affine>) {
        assert!(!exprs.is_empty());
        let d = exprs.len();
        self.push_rows(&exprs, ConeSpec::Soc(d));
    }

    /// Symmetric-affine PSD constraint `F0 + sum_i x_{v_i} F_i ⪰ 0` with real
    /// symmetric data.
    pub fn add_psd(&mut self, f0: &DMatrix<f64>, terms: &[(usize, DMatrix<f64>)]) {
        let p = f0.nrows();
        assert_eq!(p, f0.ncols());
        let base = svec(f0);
        let mut exprs: Vec<Affine> = base
            .iter()
            .map(|&c| Affine::constant(c))
            .collect();
        for (var, fi) in terms {
            assert_eq!(fi.nrows(), p);
            let v = svec(fi);
            for (k, &c) in v.iter().enumerate() {
                if c != 0.0 {
                    exprs[k].add_term(*var, c);
                }
            }
        }
        self.push_rows(&exprs, ConeSpec::Psd(p));
    }

    /// Complex Hermitian PSD constraint, embedded as a real block of side 2p.
    pub fn add_psd_hermitian(
        &mut self,
        f0: &DMatrix<Complex64>,
        terms: &[(usize, DMatrix<Complex64>)],
    ) {
        let f0r = embed_hermitian(f0);
        let termsr: Vec<(usize, DMatrix<f64>)> = terms
            .iter()
            .map(|(v, m)| (*v, embed_hermitian(m)))
            .collect();
        self.add_psd(&f0r, &termsr);
    }

    pub fn build(self) -> ConicProblem {
        let m = self.rows.len();
        let mut g = DMatrix::zeros(m, self.num_vars);
        let mut h = DVector::zeros(m);
        for (r, (coeffs, c)) in self.rows.iter().enumerate() {
            h[r] = *c;
            for &(i, v) in coeffs {
                // s = h - Gx must equal the affine expression, so G carries
                // the negated coefficients.
                g[(r, i)] -= v;
            }
        }
        let p = ConicProblem {
            num_vars: self.num_vars,
            cost: self.cost,
            g,
            h,
            cones: self.cones,
        };
        debug_assert!(p.validate().is_ok());
        p
    }
}
