//! Solver regression over the generic corpus: status, duality gap, known
//! optima, weak duality along the way, and scaling invariance.

use risbeam_sdp::corpus::standard_corpus;
use risbeam_sdp::{solve, ConicProblem, SolveStatus, SolverOptions};

fn solve_ok(p: &ConicProblem) -> risbeam_sdp::ConeSolution {
    let sol = solve(p, &SolverOptions::default()).expect("solver error");
    assert_eq!(sol.status, SolveStatus::Optimal, "not optimal");
    sol
}

#[test]
fn corpus_solves_to_tolerance() {
    for case in standard_corpus() {
        let sol = solve(&case.problem, &SolverOptions::default())
            .unwrap_or_else(|e| panic!("{}: {e}", case.name));
        assert_eq!(
            sol.status,
            SolveStatus::Optimal,
            "{}: status {:?}",
            case.name,
            sol.status
        );
        assert!(
            sol.primal_res < 1e-7 && sol.dual_res < 1e-7,
            "{}: residuals {:.2e} {:.2e}",
            case.name,
            sol.primal_res,
            sol.dual_res
        );
        assert!(sol.rel_gap < 1e-6, "{}: gap {:.2e}", case.name, sol.rel_gap);
        // Weak duality at the solution (minimization): primal >= dual.
        assert!(
            sol.primal_obj >= sol.dual_obj - 1e-9 * (1.0 + sol.primal_obj.abs()),
            "{}: weak duality violated",
            case.name
        );
        if let Some(opt) = case.optimum {
            assert!(
                (sol.primal_obj - opt).abs() < 1e-7 * (1.0 + opt.abs()),
                "{}: {} vs expected {}",
                case.name,
                sol.primal_obj,
                opt
            );
        }
    }
}

#[test]
fn eigenvalue_oracles() {
    for seed in 0..6 {
        let case = risbeam_sdp::corpus::lambda_max_problem(4, 900 + seed);
        let sol = solve_ok(&case.problem);
        assert!((sol.primal_obj - case.optimum.unwrap()).abs() < 1e-7);
        let case = risbeam_sdp::corpus::lambda_min_problem(4, 950 + seed);
        let sol = solve_ok(&case.problem);
        assert!((sol.primal_obj - case.optimum.unwrap()).abs() < 1e-7);
    }
}

#[test]
fn scaling_invariance() {
    for case in standard_corpus().into_iter().step_by(5) {
        let base = solve_ok(&case.problem);
        for xi in [1e-2, 5.0, 1e3] {
            let mut scaled = case.problem.clone();
            scaled.cost *= xi;
            scaled.g *= xi;
            scaled.h *= xi;
            let sol = solve_ok(&scaled);
            assert!(
                (sol.primal_obj - xi * base.primal_obj).abs()
                    < 1e-8 * (1.0 + (xi * base.primal_obj).abs()),
                "{} at xi={xi}: {} vs {}",
                case.name,
                sol.primal_obj,
                xi * base.primal_obj
            );
        }
    }
}

#[test]
fn dump_load_solve_same_optimum() {
    let case = risbeam_sdp::corpus::certified_sdp(4, 3, 77);
    let text = risbeam_sdp::io::dump(&case.problem);
    let reloaded = risbeam_sdp::io::load(&text).unwrap();
    let a = solve_ok(&case.problem);
    let b = solve_ok(&reloaded);
    assert!((a.primal_obj - b.primal_obj).abs() < 1e-10);
}
