use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::assembly::{Discretization, GlobalSpace};
use crate::error::{Error, Result};
use crate::geometry::{Point, Side};
use crate::ife::BasisEval;
use crate::problems::ManufacturedProblem;

/// Largest accepted condition estimate of a local mass matrix.
pub const MAX_MASS_CONDITION: f64 = 1e14;

/// Value and gradient of the discrete function `coeffs` on element `e` at
/// `p`, using the IFE piece of `side` on interface elements.
pub fn evaluate(disc: &Discretization, space: &GlobalSpace, coeffs: &[f64], e: usize, p: Point, side: Side) -> Result<(f64, Point)> {
    let mut shapes = BasisEval::zeros(disc.local_len());
    disc.eval_shapes(e, p, side, &mut shapes)?;
    let local: Vec<f64> = space.local_to_global(e).iter().map(|&g| coeffs[g]).collect();
    Ok(shapes.combine(&local))
}

fn check_problem(problem: &ManufacturedProblem, disc: &Discretization) -> Result<()> {
    if problem.beta != disc.beta {
        return Err(Error::invalid("problem and discretization use different coefficients"));
    }
    Ok(())
}

/// Local `L^2` projection of `u` onto the IFE shapes of interface element `e`.
fn local_projection(problem: &ManufacturedProblem, disc: &Discretization, e: usize) -> Result<Vec<f64>> {
    let nb = disc.local_len();
    let rule = disc.volume_rule(e, disc.quadrature.volume)?;
    let mut mass = Mat::<f64>::zeros(nb, nb);
    let mut rhs = Mat::<f64>::zeros(nb, 1);
    let mut shapes = BasisEval::zeros(nb);
    for ((&p, &w), &side) in rule.points.iter().zip(&rule.weights).zip(&rule.sides) {
        disc.eval_shapes(e, p, side, &mut shapes)?;
        let u = problem.u(p, side);
        for i in 0..nb {
            rhs[(i, 0)] += w * u * shapes.values[i];
            for j in 0..nb {
                mass[(i, j)] += w * shapes.values[i] * shapes.values[j];
            }
        }
    }
    let sv = mass.singular_values().map_err(|_| Error::SingularLocal { element: e, what: "mass matrix", condition: f64::INFINITY })?;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = smax / smin;
    if !(condition <= MAX_MASS_CONDITION) {
        return Err(Error::SingularLocal { element: e, what: "mass matrix", condition });
    }
    let c = mass.partial_piv_lu().solve(rhs.as_ref());
    Ok((0..nb).map(|i| c[(i, 0)]).collect())
}

/// The hybrid projection: Lagrange interpolation on non-interface elements
/// and local `L^2` projection onto the IFE space on interface elements.
pub fn project(problem: &ManufacturedProblem, disc: &Discretization, space: &GlobalSpace) -> Result<Vec<f64>> {
    check_problem(problem, disc)?;
    let m = disc.degree;
    let mut coeffs = vec![0.0; space.dof_count];
    for &e in &disc.classification.non_interface_elements {
        let side = disc.classification.classes[e].side().expect("non-interface element has a side");
        for (&g, node) in space.local_to_global(e).iter().zip(disc.mesh.element_nodes(m, e)) {
            coeffs[g] = problem.u(disc.mesh.node_point(m, node), side);
        }
    }
    let cls = &disc.classification;
    let local = disc.execution().try_map(cls.interface_elements.len(), |k| local_projection(problem, disc, cls.interface_elements[k]))?;
    for (k, c) in local.into_iter().enumerate() {
        for (&g, v) in space.local_to_global(cls.interface_elements[k]).iter().zip(c) {
            coeffs[g] = v;
        }
    }
    Ok(coeffs)
}

/// Largest `|(u - coeffs, phi_i)_K| / (||u||_K ||phi_i||_K)` over interface
/// elements and their shapes.
pub fn projection_residual(problem: &ManufacturedProblem, disc: &Discretization, space: &GlobalSpace, coeffs: &[f64]) -> Result<f64> {
    let nb = disc.local_len();
    let mut worst = 0.0f64;
    let mut shapes = BasisEval::zeros(nb);
    for &e in &disc.classification.interface_elements {
        let rule = disc.volume_rule(e, disc.quadrature.volume)?;
        let local: Vec<f64> = space.local_to_global(e).iter().map(|&g| coeffs[g]).collect();
        let mut inner = vec![0.0; nb];
        let mut shape_norm = vec![0.0; nb];
        let mut u_norm = 0.0;
        for ((&p, &w), &side) in rule.points.iter().zip(&rule.weights).zip(&rule.sides) {
            disc.eval_shapes(e, p, side, &mut shapes)?;
            let u = problem.u(p, side);
            let r = u - shapes.combine(&local).0;
            u_norm += w * u * u;
            for i in 0..nb {
                inner[i] += w * r * shapes.values[i];
                shape_norm[i] += w * shapes.values[i] * shapes.values[i];
            }
        }
        for i in 0..nb {
            worst = worst.max(inner[i].abs() / (u_norm * shape_norm[i]).sqrt());
        }
    }
    Ok(worst)
}
