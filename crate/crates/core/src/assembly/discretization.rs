use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{Curve, Point, Side};
use crate::ife::{build_ife_basis, lagrange_basis_into, BasisEval, LocalIfeBasis};
use crate::mesh::{classify, fictitious_element, CartesianMesh, FictitiousElement, MeshClassification};
use crate::quadrature::{cell_rule, cut_cell_rule, CutRule, QuadRule, QuadratureConfig, Region};

/// Everything the scheme needs to know about one (mesh, interface, degree,
/// coefficient) combination: classification, fictitious elements, IFE bases
/// and cut-cell rules, indexed like `classification.interface_elements`.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub mesh: CartesianMesh,
    pub curve: Curve,
    pub classification: MeshClassification,
    pub degree: usize,
    pub beta: (f64, f64),
    pub quadrature: QuadratureConfig,
    pub fictitious: Vec<FictitiousElement>,
    pub bases: Vec<LocalIfeBasis>,
    cut_rules: Vec<CutRule>,
    exec: Execution,
}

impl Discretization {
    pub fn new(
        mesh: CartesianMesh,
        curve: Curve,
        beta: (f64, f64),
        m: usize,
        quadrature: QuadratureConfig,
        exec: Execution,
    ) -> Result<Self> {
        let classification = classify(&mesh, &curve, exec)?;
        if let Some(&e) = classification.interface_elements.iter().find(|&&e| mesh.touches_boundary(e)) {
            return Err(Error::BoundaryInterface { element: e });
        }
        let per_element = exec.try_map(classification.interface_elements.len(), |k| {
            let cut = &classification.cuts[k];
            let e = cut.element;
            let fe = fictitious_element(&mesh, &classification, e, &curve)?;
            let basis = build_ife_basis(&fe, &curve, beta, m, quadrature.constraint)?;
            let pts = [cut.crossings[0].point, cut.crossings[1].point];
            let rule = cut_cell_rule(&mesh.element_rect(e), &curve, pts, quadrature.volume, e)?;
            Ok::<_, Error>((fe, basis, rule))
        })?;
        let mut fictitious = Vec::with_capacity(per_element.len());
        let mut bases = Vec::with_capacity(per_element.len());
        let mut cut_rules = Vec::with_capacity(per_element.len());
        for (fe, basis, rule) in per_element {
            fictitious.push(fe);
            bases.push(basis);
            cut_rules.push(rule);
        }
        Ok(Discretization { mesh, curve, classification, degree: m, beta, quadrature, fictitious, bases, cut_rules, exec })
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn beta_on(&self, side: Side) -> f64 {
        match side {
            Side::Minus => self.beta.0,
            Side::Plus => self.beta.1,
        }
    }

    pub fn local_len(&self) -> usize {
        (self.degree + 1) * (self.degree + 1)
    }

    pub fn basis(&self, e: usize) -> Option<&LocalIfeBasis> {
        self.classification.interface_index(e).map(|k| &self.bases[k])
    }

    pub fn cut_rule(&self, e: usize) -> Option<&CutRule> {
        self.classification.interface_index(e).map(|k| &self.cut_rules[k])
    }

    /// Volume rule of element `e` with `q` points per direction, each point
    /// tagged with its side. Cut cells reuse the cached rule when `q` is the
    /// configured volume order.
    pub fn volume_rule(&self, e: usize, q: usize) -> Result<QuadRule> {
        let rect = self.mesh.element_rect(e);
        match self.classification.interface_index(e) {
            None => {
                let side = self.classification.classes[e].side().expect("non-interface element has a side");
                Ok(cell_rule(&rect, q, side))
            }
            Some(k) => {
                let fresh;
                let rule = if q == self.quadrature.volume {
                    &self.cut_rules[k]
                } else {
                    let cut = &self.classification.cuts[k];
                    let pts = [cut.crossings[0].point, cut.crossings[1].point];
                    fresh = cut_cell_rule(&rect, &self.curve, pts, q, e)?;
                    &fresh
                };
                let mut out = QuadRule::empty(Region::Whole);
                for piece in [&rule.minus, &rule.plus] {
                    for ((p, w), s) in piece.points.iter().zip(&piece.weights).zip(&piece.sides) {
                        out.push(*p, *w, *s);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Values and gradients of the local shapes of `e` at `x`; on interface
    /// elements `side` selects the IFE piece.
    pub fn eval_shapes(&self, e: usize, x: Point, side: Side, out: &mut BasisEval) -> Result<()> {
        match self.basis(e) {
            None => {
                lagrange_basis_into(&self.mesh.element_rect(e), self.degree, x, out);
                Ok(())
            }
            Some(basis) => {
                let sample = basis.locate(&self.curve, x)?;
                basis.eval_sample(&sample, side, out);
                Ok(())
            }
        }
    }
}
