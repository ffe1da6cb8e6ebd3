//! Deterministic generator of small regression problems spanning all cone
//! types. Used by the test suites; optima are known by construction where a
//! closed form exists.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::problem::{Affine, ConicProblem, ProblemBuilder};

pub struct CorpusProblem {
    pub name: String,
    pub problem: ConicProblem,
    /// Optimal value when known in closed form.
    pub optimum: Option<f64>,
}

fn random_sym(p: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(p, p, |_, _| rng.gen_range(-1.0..1.0));
    (&a + a.transpose()) * 0.5
}

/// `min t  s.t.  t I - A >= 0`, optimum `lambda_max(A)`.
pub fn lambda_max_problem(p: usize, seed: u64) -> CorpusProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_sym(p, &mut rng);
    let lmax = a
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let mut b = ProblemBuilder::new(1);
    b.set_cost(0, 1.0);
    b.add_psd(&(-&a), &[(0, DMatrix::identity(p, p))]);
    CorpusProblem {
        name: format!("lambda_max_{p}_{seed}"),
        problem: b.build(),
        optimum: Some(lmax),
    }
}

/// `min Tr(C X)  s.t.  Tr(X) = 1, X >= 0`, optimum `lambda_min(C)`.
pub fn lambda_min_problem(p: usize, seed: u64) -> CorpusProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_sym(p, &mut rng);
    let lmin = c
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    // Variables: svec entries of X.
    let d = p * (p + 1) / 2;
    let mut b = ProblemBuilder::new(d);
    let cs = crate::embed::svec(&c);
    for i in 0..d {
        b.set_cost(i, cs[i]);
    }
    // X >= 0 through the identity map on svec coordinates.
    let mut terms = Vec::new();
    let mut k = 0;
    for j in 0..p {
        for i in j..p {
            let mut e = DMatrix::zeros(p, p);
            if i == j {
                e[(i, j)] = 1.0;
            } else {
                let v = 1.0 / crate::embed::SQRT2;
                e[(i, j)] = v;
                e[(j, i)] = v;
            }
            terms.push((k, e));
            k += 1;
        }
    }
    b.add_psd(&DMatrix::zeros(p, p), &terms);
    // Tr X = 1.
    let id = crate::embed::svec(&DMatrix::identity(p, p));
    let mut eq = Affine::constant(-1.0);
    for (i, v) in id.iter().enumerate() {
        eq.add_term(i, *v);
    }
    b.add_eq(eq);
    CorpusProblem {
        name: format!("lambda_min_{p}_{seed}"),
        problem: b.build(),
        optimum: Some(lmin),
    }
}

/// `min c'x s.t. l <= x <= u` with random sign pattern, optimum by inspection.
pub fn box_lp(n: usize, seed: u64) -> CorpusProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = ProblemBuilder::new(n);
    let mut opt = 0.0;
    for i in 0..n {
        let c: f64 = rng.gen_range(-2.0..2.0);
        let lo = rng.gen_range(-2.0..0.0);
        let hi = rng.gen_range(0.1..2.0);
        b.set_cost(i, c);
        let mut e = Affine::var(i);
        e.constant = -lo;
        b.add_nonneg(e); // x - lo >= 0
        let mut e2 = Affine::term(i, -1.0);
        e2.constant = hi;
        b.add_nonneg(e2); // hi - x >= 0
        opt += if c >= 0.0 { c * lo } else { c * hi };
    }
    CorpusProblem {
        name: format!("box_lp_{n}_{seed}"),
        problem: b.build(),
        optimum: Some(opt),
    }
}

/// Distance from a point to an affine subspace through an SOC epigraph,
/// optimum `||P(b) - b||` computed directly.
pub fn soc_distance(n: usize, seed: u64) -> CorpusProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let target: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let offset: f64 = rng.gen_range(-1.0..1.0);
    // min t s.t. t >= ||x - target||, a'x = offset
    let mut b = ProblemBuilder::new(n + 1);
    b.set_cost(0, 1.0);
    let mut rows = vec![Affine::var(0)];
    for i in 0..n {
        let mut e = Affine::constant(-target[i]);
        e.add_term(1 + i, 1.0);
        rows.push(e);
    }
    b.add_soc(rows);
    let mut eq = Affine::constant(-offset);
    for (i, c) in a.iter().enumerate() {
        eq.add_term(1 + i, *c);
    }
    b.add_eq(eq);
    // Projection distance |a't - offset| / ||a||.
    let at = a.iter().zip(target.iter()).map(|(x, y)| x * y).sum::<f64>();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    CorpusProblem {
        name: format!("soc_distance_{n}_{seed}"),
        problem: b.build(),
        optimum: Some((at - offset).abs() / na),
    }
}

/// Random strictly feasible SDP in inequality form with optimum certified by
/// complementary construction: pick interior `Z*`, a rank-deficient `S*`,
/// and build data so KKT holds exactly.
pub fn certified_sdp(p: usize, n: usize, seed: u64) -> CorpusProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // S* = V diag(0,..,0, s+) V' with one zero eigenvalue; Z* aligned so that
    // S* Z* = 0 and Z* >= 0.
    let q = random_sym(p, &mut rng).symmetric_eigen().eigenvectors;
    let mut s_eigs = vec![0.0; p];
    let mut z_eigs = vec![0.0; p];
    for i in 0..p {
        if i == 0 {
            z_eigs[i] = rng.gen_range(0.5..1.5);
        } else {
            s_eigs[i] = rng.gen_range(0.5..1.5);
        }
    }
    let sd = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(s_eigs));
    let zd = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(z_eigs));
    let s_star = &q * sd * q.transpose();
    let z_star = &q * zd * q.transpose();
    let x_star: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();

    // Constraint S(x) = F0 + sum x_i F_i with S(x*) = S*.
    let f_terms: Vec<DMatrix<f64>> = (0..n).map(|_| random_sym(p, &mut rng)).collect();
    let mut f0 = s_star.clone();
    for (i, f) in f_terms.iter().enumerate() {
        f0 -= f * x_star[i];
    }
    // Dual feasibility c_i = Tr(F_i Z*) makes (x*, Z*) a KKT pair.
    let mut b = ProblemBuilder::new(n);
    let mut opt = 0.0;
    for (i, f) in f_terms.iter().enumerate() {
        let ci = (f * &z_star).trace();
        b.set_cost(i, ci);
        opt += ci * x_star[i];
    }
    let terms: Vec<(usize, DMatrix<f64>)> =
        f_terms.into_iter().enumerate().collect();
    b.add_psd(&f0, &terms);
    CorpusProblem {
        name: format!("certified_sdp_{p}x{n}_{seed}"),
        problem: b.build(),
        optimum: Some(opt),
    }
}

/// Mixed LP + SOC + PSD problem, feasibility-only checks.
pub fn mixed_cone(seed: u64) -> CorpusProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 4;
    let mut b = ProblemBuilder::new(n);
    for i in 0..n {
        b.set_cost(i, rng.gen_range(0.1..1.0));
        b.add_nonneg(Affine::var(i));
    }
    // sum x = 2
    let mut eq = Affine::constant(-2.0);
    for i in 0..n {
        eq.add_term(i, 1.0);
    }
    b.add_eq(eq);
    // x0 >= ||(x1, x2)||
    b.add_soc(vec![Affine::var(0), Affine::var(1), Affine::var(2)]);
    // [x3, 0.3; 0.3, x0] >= 0
    let mut m0 = DMatrix::zeros(2, 2);
    m0[(0, 1)] = 0.3;
    m0[(1, 0)] = 0.3;
    let mut t3 = DMatrix::zeros(2, 2);
    t3[(0, 0)] = 1.0;
    let mut t0 = DMatrix::zeros(2, 2);
    t0[(1, 1)] = 1.0;
    b.add_psd(&m0, &[(3, t3), (0, t0)]);
    CorpusProblem {
        name: format!("mixed_cone_{seed}"),
        problem: b.build(),
        optimum: None,
    }
}

/// The standard generic corpus (28 problems); callers append
/// application-shaped instances to reach their regression totals.
pub fn standard_corpus() -> Vec<CorpusProblem> {
    let mut v = Vec::new();
    for (i, p) in [2, 3, 4, 5].iter().enumerate() {
        v.push(lambda_max_problem(*p, 100 + i as u64));
    }
    for (i, p) in [2, 3, 4, 5].iter().enumerate() {
        v.push(lambda_min_problem(*p, 200 + i as u64));
    }
    for (i, n) in [2, 4, 6, 8].iter().enumerate() {
        v.push(box_lp(*n, 300 + i as u64));
    }
    for (i, n) in [2, 3, 5, 8].iter().enumerate() {
        v.push(soc_distance(*n, 400 + i as u64));
    }
    for (i, (p, n)) in [(2, 2), (3, 2), (4, 3), (5, 3), (6, 4), (3, 4), (4, 5), (5, 2)]
        .iter()
        .enumerate()
    {
        v.push(certified_sdp(*p, *n, 500 + i as u64));
    }
    for s in 0..4 {
        v.push(mixed_cone(600 + s));
    }
    v
}
