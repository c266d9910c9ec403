use crate::assembly::{jump_edges, Discretization, GlobalSpace, SchemeParams};
use crate::error::{Error, Result};
use crate::geometry::Side;
use crate::ife::BasisEval;
use crate::problems::ManufacturedProblem;
use crate::quadrature::edge_rule;

/// Errors of a discrete function against the exact solution.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorReport {
    pub l2: f64,
    pub semi_h1: f64,
    pub energy: f64,
    /// `L^2` error on the minus and plus subdomains.
    pub l2_sides: [f64; 2],
    /// Semi-`H^1` error on the minus and plus subdomains.
    pub semi_h1_sides: [f64; 2],
}

/// `L^2`, semi-`H^1` and energy errors of `coeffs`, integrated with `q`
/// points per direction on every (sub)cell.
///
/// The energy error uses the scheme's jump edges and penalty weights; the
/// exact solution is continuous, so only the jumps of the discrete function
/// contribute there.
pub fn error_norms(
    problem: &ManufacturedProblem,
    disc: &Discretization,
    space: &GlobalSpace,
    params: &SchemeParams,
    coeffs: &[f64],
    q: usize,
) -> Result<ErrorReport> {
    if coeffs.len() != space.dof_count {
        return Err(Error::invalid("coefficient vector does not match the space"));
    }
    let nb = disc.local_len();
    let exec = disc.execution();
    // per element: [l2-, l2+, h1-, h1+, beta-weighted h1]
    let cells = exec.try_map(disc.mesh.element_count(), |e| {
        let rule = disc.volume_rule(e, q)?;
        let local: Vec<f64> = space.local_to_global(e).iter().map(|&g| coeffs[g]).collect();
        let mut shapes = BasisEval::zeros(nb);
        let mut acc = [0.0; 5];
        for ((&p, &w), &side) in rule.points.iter().zip(&rule.weights).zip(&rule.sides) {
            disc.eval_shapes(e, p, side, &mut shapes)?;
            let (v, g) = shapes.combine(&local);
            let gu = problem.grad(p, side);
            let d = problem.u(p, side) - v;
            let dg = (gu[0] - g[0]).powi(2) + (gu[1] - g[1]).powi(2);
            let s = side.index();
            acc[s] += w * d * d;
            acc[2 + s] += w * dg;
            acc[4] += w * problem.beta_on(side) * dg;
        }
        Ok::<_, Error>(acc)
    })?;
    let edges = jump_edges(disc, params.edge_set);
    let jumps = exec.try_map(edges.len(), |i| {
        let b = edges[i];
        let edge = disc.mesh.edge(b);
        let [Some(k1), Some(k2)] = edge.elements else { return Err(Error::invalid("boundary edge in jump set")) };
        let rule = edge_rule(edge.a, edge.b, disc.classification.edge_crossings[b].as_ref(), &disc.curve, q);
        let mut sum = 0.0;
        for ((&p, &w), &side) in rule.points.iter().zip(&rule.weights).zip(&rule.sides) {
            let v1 = super::evaluate(disc, space, coeffs, k1, p, side)?.0;
            let v2 = super::evaluate(disc, space, coeffs, k2, p, side)?.0;
            sum += w * (v1 - v2).powi(2);
        }
        Ok::<_, Error>(params.penalty(edge.length()) * sum)
    })?;
    let mut t = [0.0; 5];
    for acc in &cells {
        for k in 0..5 {
            t[k] += acc[k];
        }
    }
    let jump_sum: f64 = jumps.iter().sum();
    Ok(ErrorReport {
        l2: (t[0] + t[1]).sqrt(),
        semi_h1: (t[2] + t[3]).sqrt(),
        energy: (t[4] + jump_sum).sqrt(),
        l2_sides: [t[0].sqrt(), t[1].sqrt()],
        semi_h1_sides: [t[2].sqrt(), t[3].sqrt()],
    })
}

impl ErrorReport {
    pub fn side(&self, side: Side) -> (f64, f64) {
        (self.l2_sides[side.index()], self.semi_h1_sides[side.index()])
    }
}
