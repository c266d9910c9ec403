use sdg_core::assembly::{large_penalty, reduced_penalty, SchemeParams};
use sdg_core::mesh::Scheme;
use sdg_core::problems::{bessel_problem, radial_problem, DEFAULT_RADIUS};
use sdg_core::solve_post::{project_problem, solve_problem, RunSettings};
use sdg_core::Execution;

#[test]
fn parallel_and_sequential_solves_agree_bitwise() {
    let problem = bessel_problem(DEFAULT_RADIUS, (1.0, 1000.0)).unwrap();
    let params = SchemeParams::new(1.0, reduced_penalty(problem.beta), 1.0, Scheme::Sdg).unwrap();
    let mut settings = RunSettings::new(2, params);
    let par = solve_problem(&problem, 12, &settings).unwrap();
    settings.exec = Execution::Sequential;
    let seq = solve_problem(&problem, 12, &settings).unwrap();
    assert_eq!(par.solution.coefficients, seq.solution.coefficients);
    assert_eq!(par.errors.l2.to_bits(), seq.errors.l2.to_bits());
}

#[test]
fn selective_space_is_smaller_and_no_less_accurate_than_full_dg() {
    let problem = radial_problem(DEFAULT_RADIUS, 5.0, (1.0, 10.0)).unwrap();
    let run = |edges| {
        let params = SchemeParams::new(-1.0, large_penalty(problem.beta), 1.0, edges).unwrap();
        solve_problem(&problem, 16, &RunSettings::new(1, params)).unwrap()
    };
    let (sdg, dg) = (run(Scheme::Sdg), run(Scheme::Dg));
    assert!(sdg.space.dof_count < dg.space.dof_count);
    assert!(sdg.errors.l2 < 1.5 * dg.errors.l2, "{} vs {}", sdg.errors.l2, dg.errors.l2);
}

#[test]
fn refinement_reduces_projection_error() {
    let problem = radial_problem(DEFAULT_RADIUS, 5.0, (1.0, 1000.0)).unwrap();
    let params = SchemeParams::new(-1.0, large_penalty(problem.beta), 1.0, Scheme::Sdg).unwrap();
    let settings = RunSettings::new(2, params);
    let coarse = project_problem(&problem, 10, &settings).unwrap();
    let fine = project_problem(&problem, 20, &settings).unwrap();
    let ratio = coarse.errors.l2 / fine.errors.l2;
    assert!(ratio > 6.0, "L2 ratio {ratio}");
    assert!(fine.h() < coarse.h());
}
