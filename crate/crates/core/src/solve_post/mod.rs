//! Linear solve, the hybrid projection, error norms and convergence rates,
//! plus drivers that run one manufactured problem on one mesh.

mod norms;
mod projection;
mod rates;
mod solver;

pub use norms::{error_norms, ErrorReport};
pub use projection::{evaluate, project, projection_residual, MAX_MASS_CONDITION};
pub use rates::{convergence_rates, loglog_slope, Rates, FIT_LEVELS};
pub use solver::{bicgstab, relative_residual, solve, SolveMethod, SolveOptions, SolveReport, RESIDUAL_LIMIT};

use std::time::Instant;

use crate::assembly::{assemble, build_global_space, Discretization, GlobalSpace, SchemeParams};
use crate::error::Result;
use crate::exec::Execution;
use crate::mesh::CartesianMesh;
use crate::problems::ManufacturedProblem;
use crate::quadrature::QuadratureConfig;

/// A coefficient vector together with how it was obtained.
#[derive(Clone, Debug)]
pub struct DiscreteSolution {
    pub coefficients: Vec<f64>,
    pub params: SchemeParams,
    pub n: usize,
    pub degree: usize,
    pub beta: (f64, f64),
    /// Relative residual of the linear solve; `None` for projections.
    pub residual: Option<f64>,
    pub assemble_seconds: f64,
    pub solve_seconds: f64,
}

/// Settings shared by all grid points of a study.
#[derive(Clone, Copy, Debug)]
pub struct RunSettings {
    pub degree: usize,
    pub params: SchemeParams,
    /// Defaults to [`QuadratureConfig::for_degree`].
    pub quadrature: Option<QuadratureConfig>,
    /// Points per direction for the error integrals; defaults to the volume
    /// order plus two.
    pub error_order: Option<usize>,
    pub solver: SolveOptions,
    pub exec: Execution,
}

impl RunSettings {
    pub fn new(degree: usize, params: SchemeParams) -> Self {
        RunSettings { degree, params, quadrature: None, error_order: None, solver: SolveOptions::default(), exec: Execution::Parallel }
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        self.quadrature.unwrap_or_else(|| QuadratureConfig::for_degree(self.degree))
    }

    pub fn error_order(&self) -> usize {
        self.error_order.unwrap_or(self.quadrature().volume + 2)
    }
}

/// Result of one grid point.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub discretization: Discretization,
    pub space: GlobalSpace,
    pub solution: DiscreteSolution,
    pub errors: ErrorReport,
}

impl RunOutcome {
    pub fn h(&self) -> f64 {
        self.discretization.mesh.edge_size()
    }
}

fn setup(problem: &ManufacturedProblem, n: usize, settings: &RunSettings) -> Result<(Discretization, GlobalSpace)> {
    let mesh = CartesianMesh::new(problem.domain, n)?;
    let disc = Discretization::new(mesh, problem.curve.clone(), problem.beta, settings.degree, settings.quadrature(), settings.exec)?;
    let space = build_global_space(&disc.mesh, &disc.classification, settings.degree, settings.params.edge_set)?;
    Ok((disc, space))
}

/// Assembles and solves `problem` on the `n x n` mesh and measures the error.
pub fn solve_problem(problem: &ManufacturedProblem, n: usize, settings: &RunSettings) -> Result<RunOutcome> {
    let (disc, space) = setup(problem, n, settings)?;
    let t0 = Instant::now();
    let f = |p, s| problem.f(p, s);
    let g = |p| problem.g(p);
    let system = assemble(&disc, &space, &settings.params, &f, &g)?;
    let assemble_seconds = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let report = solve(&system, &settings.solver)?;
    let solve_seconds = t1.elapsed().as_secs_f64();
    let errors = error_norms(problem, &disc, &space, &settings.params, &report.x, settings.error_order())?;
    log::info!(
        "{} N={n} m={} dofs={} L2={:.3e} H1={:.3e} residual={:.1e}",
        problem.name,
        settings.degree,
        space.dof_count,
        errors.l2,
        errors.semi_h1,
        report.relative_residual
    );
    let solution = DiscreteSolution {
        coefficients: report.x,
        params: settings.params,
        n,
        degree: settings.degree,
        beta: problem.beta,
        residual: Some(report.relative_residual),
        assemble_seconds,
        solve_seconds,
    };
    Ok(RunOutcome { discretization: disc, space, solution, errors })
}

/// Projects the exact solution of `problem` onto the space on the `n x n`
/// mesh and measures the projection error.
pub fn project_problem(problem: &ManufacturedProblem, n: usize, settings: &RunSettings) -> Result<RunOutcome> {
    let (disc, space) = setup(problem, n, settings)?;
    let t0 = Instant::now();
    let coeffs = project(problem, &disc, &space)?;
    let seconds = t0.elapsed().as_secs_f64();
    let errors = error_norms(problem, &disc, &space, &settings.params, &coeffs, settings.error_order())?;
    let solution = DiscreteSolution {
        coefficients: coeffs,
        params: settings.params,
        n,
        degree: settings.degree,
        beta: problem.beta,
        residual: None,
        assemble_seconds: 0.0,
        solve_seconds: seconds,
    };
    Ok(RunOutcome { discretization: disc, space, solution, errors })
}
