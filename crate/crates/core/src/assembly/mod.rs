//! The hybrid SDG/DG space, the interior-penalty bilinear form and the
//! linear system with strongly imposed Dirichlet data.

mod discretization;
mod space;
mod sparse;

pub use discretization::Discretization;
pub use space::{build_global_space, GlobalSpace};
pub use sparse::{vector_text, SparseMatrix};

use crate::error::{Error, Result};
use crate::geometry::{Point, Side};
use crate::ife::BasisEval;
use crate::mesh::Scheme;
use crate::quadrature::edge_rule;

/// Penalty and consistency parameters of the form
///
/// `a(u, v) = sum_K (beta grad u, grad v)_K - sum_B ({beta d_n u}, [v])_B
///            + epsilon sum_B ({beta d_n v}, [u])_B + sum_B sigma0 / |B|^alpha ([u], [v])_B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeParams {
    /// `-1` symmetric, `0` incomplete, `+1` nonsymmetric.
    pub epsilon: f64,
    pub sigma0: f64,
    pub alpha: f64,
    /// Which edges carry jump terms: penalty edges (SDG) or all interior
    /// edges (DG). Must match the space.
    pub edge_set: Scheme,
}

/// `4 max(beta)`.
pub fn large_penalty(beta: (f64, f64)) -> f64 {
    4.0 * beta.0.max(beta.1)
}

/// `max(beta)`.
pub fn reduced_penalty(beta: (f64, f64)) -> f64 {
    beta.0.max(beta.1)
}

/// `alpha = 3` for the nonsymmetric scheme with even degree, else 1.
pub fn parity_alpha(epsilon: f64, m: usize) -> f64 {
    if epsilon > 0.0 && m.is_multiple_of(2) {
        3.0
    } else {
        1.0
    }
}

impl SchemeParams {
    pub fn new(epsilon: f64, sigma0: f64, alpha: f64, edge_set: Scheme) -> Result<Self> {
        if ![-1.0, 0.0, 1.0].contains(&epsilon) {
            return Err(Error::invalid(format!("epsilon must be -1, 0 or 1, got {epsilon}")));
        }
        if !(sigma0 > 0.0) {
            return Err(Error::invalid(format!("sigma0 must be positive, got {sigma0}")));
        }
        if !(alpha >= 1.0) {
            return Err(Error::invalid(format!("alpha must be at least 1, got {alpha}")));
        }
        if edge_set == Scheme::Cg {
            return Err(Error::invalid("edge set must be SDG or DG"));
        }
        Ok(SchemeParams { epsilon, sigma0, alpha, edge_set })
    }

    /// Symmetric SDG with the large penalty and `alpha = 1`.
    pub fn symmetric(beta: (f64, f64)) -> Self {
        SchemeParams { epsilon: -1.0, sigma0: large_penalty(beta), alpha: 1.0, edge_set: Scheme::Sdg }
    }

    /// Nonsymmetric SDG with the reduced penalty and the parity rule for `alpha`.
    pub fn nonsymmetric(beta: (f64, f64), m: usize) -> Self {
        SchemeParams { epsilon: 1.0, sigma0: reduced_penalty(beta), alpha: parity_alpha(1.0, m), edge_set: Scheme::Sdg }
    }

    pub fn with_edge_set(mut self, edge_set: Scheme) -> Self {
        self.edge_set = edge_set;
        self
    }

    pub fn penalty(&self, edge_length: f64) -> f64 {
        self.sigma0 / edge_length.powf(self.alpha)
    }
}

/// Interior edges carrying jump terms under `edge_set`.
pub fn jump_edges(disc: &Discretization, edge_set: Scheme) -> &[usize] {
    match edge_set {
        Scheme::Dg => &disc.classification.interior_edges,
        _ => &disc.classification.penalty_edges,
    }
}

/// Assembled system before the boundary unknowns are eliminated.
#[derive(Clone, Debug)]
pub struct RawSystem {
    pub matrix: SparseMatrix,
    pub rhs: Vec<f64>,
}

/// Square system `A x = b` with Dirichlet rows replaced by identity rows.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub matrix: SparseMatrix,
    pub rhs: Vec<f64>,
}

impl LinearSystem {
    pub fn dof_count(&self) -> usize {
        self.matrix.n
    }
}

impl RawSystem {
    /// Imposes `u = g` at the boundary unknowns by nodal values: columns are
    /// moved to the right side and rows become identity rows.
    pub fn apply_dirichlet(&self, space: &GlobalSpace, g: &dyn Fn(Point) -> f64) -> LinearSystem {
        let n = self.matrix.n;
        let mut values = vec![0.0; n];
        let mask = space.is_boundary_mask();
        for (&d, &p) in space.boundary_dofs.iter().zip(&space.boundary_points) {
            values[d] = g(p);
        }
        let mut rhs = self.rhs.clone();
        let mut kept = Vec::with_capacity(self.matrix.entries.len());
        for &(r, c, v) in &self.matrix.entries {
            if mask[r] {
                continue;
            }
            if mask[c] {
                rhs[r] -= v * values[c];
            } else {
                kept.push((r, c, v));
            }
        }
        for &d in &space.boundary_dofs {
            kept.push((d, d, 1.0));
            rhs[d] = values[d];
        }
        LinearSystem { matrix: SparseMatrix::from_triplets(n, kept), rhs }
    }
}

type Triplets = Vec<(usize, usize, f64)>;

fn check_space(disc: &Discretization, space: &GlobalSpace, params: Option<&SchemeParams>) -> Result<()> {
    if space.degree != disc.degree || space.element_count() != disc.mesh.element_count() {
        return Err(Error::invalid("space does not belong to this discretization"));
    }
    if let Some(p) = params {
        if p.edge_set != space.scheme {
            return Err(Error::invalid("edge set does not match the space"));
        }
    }
    Ok(())
}

fn scatter(l2g: &[usize], local: &[f64], nb: usize, out: &mut Triplets) {
    for i in 0..nb {
        for j in 0..nb {
            let v = local[i * nb + j];
            if v != 0.0 {
                out.push((l2g[i], l2g[j], v));
            }
        }
    }
}

/// Volume stiffness `(beta grad phi_j, grad phi_i)` and load `(f, phi_i)` of
/// element `e`.
fn element_terms(
    disc: &Discretization,
    e: usize,
    source: Option<&(dyn Fn(Point, Side) -> f64 + Sync)>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let nb = disc.local_len();
    let rule = disc.volume_rule(e, disc.quadrature.volume)?;
    let mut k = vec![0.0; nb * nb];
    let mut load = vec![0.0; nb];
    let mut shapes = BasisEval::zeros(nb);
    for ((&p, &w), &side) in rule.points.iter().zip(&rule.weights).zip(&rule.sides) {
        disc.eval_shapes(e, p, side, &mut shapes)?;
        let bw = disc.beta_on(side) * w;
        for i in 0..nb {
            let gi = shapes.grads[i];
            for j in 0..nb {
                let gj = shapes.grads[j];
                k[i * nb + j] += bw * (gi[0] * gj[0] + gi[1] * gj[1]);
            }
        }
        if let Some(f) = source {
            let fw = f(p, side) * w;
            for i in 0..nb {
                load[i] += fw * shapes.values[i];
            }
        }
    }
    Ok((k, load))
}

/// Which parts of the edge integrals to include.
#[derive(Clone, Copy)]
struct EdgeTerms {
    consistency: bool,
    epsilon: f64,
}

/// Local edge matrix of interior edge `b` over the stacked shapes of
/// `K1` (smaller id) and `K2`, jumps `v1 - v2` and normal from `K1` to `K2`.
fn edge_terms(disc: &Discretization, params: &SchemeParams, b: usize, terms: EdgeTerms) -> Result<([usize; 2], Vec<f64>)> {
    let edge = disc.mesh.edge(b);
    let (k1, k2) = match edge.elements {
        [Some(k1), Some(k2)] => (k1, k2),
        _ => return Err(Error::invalid(format!("edge {b} is not interior"))),
    };
    let nb = disc.local_len();
    let n2 = 2 * nb;
    let rule = edge_rule(edge.a, edge.b, disc.classification.edge_crossings[b].as_ref(), &disc.curve, disc.quadrature.volume);
    let pen = params.penalty(edge.length());
    let nrm = edge.normal;
    let mut local = vec![0.0; n2 * n2];
    let mut s1 = BasisEval::zeros(nb);
    let mut s2 = BasisEval::zeros(nb);
    let mut jump = vec![0.0; n2];
    let mut flux = vec![0.0; n2];
    for ((&p, &w), &side) in rule.points.iter().zip(&rule.weights).zip(&rule.sides) {
        disc.eval_shapes(k1, p, side, &mut s1)?;
        disc.eval_shapes(k2, p, side, &mut s2)?;
        let half_beta = 0.5 * disc.beta_on(side);
        for i in 0..nb {
            jump[i] = s1.values[i];
            jump[nb + i] = -s2.values[i];
            flux[i] = half_beta * (s1.grads[i][0] * nrm[0] + s1.grads[i][1] * nrm[1]);
            flux[nb + i] = half_beta * (s2.grads[i][0] * nrm[0] + s2.grads[i][1] * nrm[1]);
        }
        for i in 0..n2 {
            for j in 0..n2 {
                // row: test function i, column: trial function j
                let mut v = pen * jump[i] * jump[j];
                if terms.consistency {
                    v += -flux[j] * jump[i] + terms.epsilon * flux[i] * jump[j];
                }
                local[i * n2 + j] += w * v;
            }
        }
    }
    Ok(([k1, k2], local))
}

fn scatter_edge(space: &GlobalSpace, elems: [usize; 2], local: &[f64], out: &mut Triplets) {
    let mut l2g = Vec::with_capacity(2 * space.local_len());
    l2g.extend_from_slice(space.local_to_global(elems[0]));
    l2g.extend_from_slice(space.local_to_global(elems[1]));
    scatter(&l2g, local, l2g.len(), out);
}

fn assemble_forms(
    disc: &Discretization,
    space: &GlobalSpace,
    params: &SchemeParams,
    source: Option<&(dyn Fn(Point, Side) -> f64 + Sync)>,
    terms: EdgeTerms,
) -> Result<RawSystem> {
    check_space(disc, space, Some(params))?;
    let exec = disc.execution();
    let nb = disc.local_len();
    let ne = disc.mesh.element_count();
    let elements = exec.try_map(ne, |e| element_terms(disc, e, source))?;
    let edges = jump_edges(disc, params.edge_set);
    let edge_mats = exec.try_map(edges.len(), |i| edge_terms(disc, params, edges[i], terms))?;

    let mut triplets = Vec::with_capacity(ne * nb * nb + edges.len() * 4 * nb * nb);
    let mut rhs = vec![0.0; space.dof_count];
    for (e, (k, load)) in elements.iter().enumerate() {
        let l2g = space.local_to_global(e);
        scatter(l2g, k, nb, &mut triplets);
        for (i, &d) in l2g.iter().enumerate() {
            rhs[d] += load[i];
        }
    }
    for (elems, local) in &edge_mats {
        scatter_edge(space, *elems, local, &mut triplets);
    }
    Ok(RawSystem { matrix: SparseMatrix::from_triplets(space.dof_count, triplets), rhs })
}

/// Matrix of `a_h` and load vector `(f, v)` without boundary conditions.
pub fn assemble_raw(
    disc: &Discretization,
    space: &GlobalSpace,
    params: &SchemeParams,
    source: &(dyn Fn(Point, Side) -> f64 + Sync),
) -> Result<RawSystem> {
    assemble_forms(disc, space, params, Some(source), EdgeTerms { consistency: true, epsilon: params.epsilon })
}

/// The full system with Dirichlet data `g` imposed strongly.
pub fn assemble(
    disc: &Discretization,
    space: &GlobalSpace,
    params: &SchemeParams,
    source: &(dyn Fn(Point, Side) -> f64 + Sync),
    g: &dyn Fn(Point) -> f64,
) -> Result<LinearSystem> {
    Ok(assemble_raw(disc, space, params, source)?.apply_dirichlet(space, g))
}

/// Volume part of `a_h` only.
pub fn volume_matrix(disc: &Discretization, space: &GlobalSpace) -> Result<SparseMatrix> {
    check_space(disc, space, None)?;
    let nb = disc.local_len();
    let elements = disc.execution().try_map(disc.mesh.element_count(), |e| element_terms(disc, e, None))?;
    let mut triplets = Vec::new();
    for (e, (k, _)) in elements.iter().enumerate() {
        scatter(space.local_to_global(e), k, nb, &mut triplets);
    }
    Ok(SparseMatrix::from_triplets(space.dof_count, triplets))
}

/// Gram matrix of the energy inner product
/// `sum_K (beta grad u, grad v)_K + sum_B sigma0 / |B|^alpha ([u], [v])_B`
/// over the scheme's jump edges.
pub fn energy_matrix(disc: &Discretization, space: &GlobalSpace, params: &SchemeParams) -> Result<SparseMatrix> {
    Ok(assemble_forms(disc, space, params, None, EdgeTerms { consistency: false, epsilon: 0.0 })?.matrix)
}

/// `||v||_h = (v^T N v)^(1/2)` for the energy Gram matrix `N`.
pub fn energy_norm(energy: &SparseMatrix, v: &[f64]) -> f64 {
    energy.bilinear(v, v).max(0.0).sqrt()
}

/// Largest trace constant that does not trigger a warning.
pub const TRACE_CONSTANT_LIMIT: f64 = 50.0;

/// For each interface element, the largest ratio over its IFE shapes of
/// `||beta grad v||_{dK}` to `(beta+ / sqrt(beta-)) h^(-1/2) ||sqrt(beta) grad v||_K`.
/// Ratios above [`TRACE_CONSTANT_LIMIT`] are logged.
pub fn trace_constants(disc: &Discretization) -> Result<Vec<(usize, f64)>> {
    let nb = disc.local_len();
    let (bm, bp) = disc.beta;
    let scale = bp.max(bm) / bm.min(bp).sqrt() / disc.mesh.edge_size().sqrt();
    let out = disc.execution().try_map(disc.classification.interface_elements.len(), |k| {
        let e = disc.classification.interface_elements[k];
        let mut boundary = vec![0.0; nb];
        let mut volume = vec![0.0; nb];
        let mut shapes = BasisEval::zeros(nb);
        for b in disc.mesh.element_edges(e) {
            let edge = disc.mesh.edge(b);
            let rule = edge_rule(edge.a, edge.b, disc.classification.edge_crossings[b].as_ref(), &disc.curve, disc.quadrature.volume);
            for ((&p, &w), &side) in rule.points.iter().zip(&rule.weights).zip(&rule.sides) {
                disc.eval_shapes(e, p, side, &mut shapes)?;
                let beta = disc.beta_on(side);
                for i in 0..nb {
                    let g = shapes.grads[i];
                    boundary[i] += w * beta * beta * (g[0] * g[0] + g[1] * g[1]);
                }
            }
        }
        let rule = disc.volume_rule(e, disc.quadrature.volume)?;
        for ((&p, &w), &side) in rule.points.iter().zip(&rule.weights).zip(&rule.sides) {
            disc.eval_shapes(e, p, side, &mut shapes)?;
            let beta = disc.beta_on(side);
            for i in 0..nb {
                let g = shapes.grads[i];
                volume[i] += w * beta * (g[0] * g[0] + g[1] * g[1]);
            }
        }
        let c = (0..nb).map(|i| boundary[i].sqrt() / (scale * volume[i].sqrt())).fold(0.0, f64::max);
        if c > TRACE_CONSTANT_LIMIT {
            log::warn!("element {e}: trace constant {c:.2} exceeds {TRACE_CONSTANT_LIMIT}");
        }
        Ok::<_, Error>((e, c))
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests;
