//! Small dense conic solver: linear cost over products of zero, nonnegative,
//! second-order and positive-semidefinite cones.
//!
//! The solver targets desk-scale problems (total PSD side up to ~200) with a
//! homogeneous self-dual interior-point method, which makes primal/dual
//! infeasibility come out as certificates rather than failures. Complex
//! Hermitian matrix inequalities enter through the real symmetric doubling
//! embedding in [`embed`].

pub mod cones;
pub mod corpus;
pub mod embed;
pub mod io;
pub mod problem;
pub mod solver;

pub use problem::{Affine, ConeSpec, ConicProblem, ProblemBuilder};
pub use solver::{solve, ConeSolution, SolveError, SolveStatus, SolverOptions};
