use std::fmt::Write as _;

use super::CartesianMesh;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{Curve, EdgeCrossing, Side};

/// Samples per direction for the interior sign check of uncut elements.
const INTERIOR_SAMPLES: usize = 6;
const ZERO_LEVEL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementClass {
    Minus,
    Plus,
    Interface,
}

impl ElementClass {
    pub fn side(self) -> Option<Side> {
        match self {
            ElementClass::Minus => Some(Side::Minus),
            ElementClass::Plus => Some(Side::Plus),
            ElementClass::Interface => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ElementClass::Minus => "minus",
            ElementClass::Plus => "plus",
            ElementClass::Interface => "interface",
        }
    }
}

/// Intersection data of one interface element.
#[derive(Clone, Debug)]
pub struct InterfaceCut {
    pub element: usize,
    /// The two intersected edges.
    pub edges: [usize; 2],
    pub crossings: [EdgeCrossing; 2],
    /// Curve parameters of the two crossings on a common branch, increasing.
    pub xi_range: (f64, f64),
}

/// The element, edge and node sets induced by the interface on a mesh.
#[derive(Clone, Debug)]
pub struct MeshClassification {
    pub classes: Vec<ElementClass>,
    /// `T_h^i`, increasing ids.
    pub interface_elements: Vec<usize>,
    /// `T_h^n`, increasing ids.
    pub non_interface_elements: Vec<usize>,
    /// Elements with at least one penalty edge.
    pub shell_elements: Vec<usize>,
    /// All interior edges.
    pub interior_edges: Vec<usize>,
    /// Interior edges crossed by the interface.
    pub interface_edges: Vec<usize>,
    /// Interior edges of interface elements.
    pub penalty_edges: Vec<usize>,
    /// Mesh vertices of interface elements.
    pub interface_nodes: Vec<usize>,
    pub vertex_count: usize,
    pub edge_crossings: Vec<Option<EdgeCrossing>>,
    pub cuts: Vec<InterfaceCut>,
    interface_index: Vec<Option<usize>>,
    penalty_flag: Vec<bool>,
}

impl MeshClassification {
    pub fn is_interface(&self, e: usize) -> bool {
        self.interface_index[e].is_some()
    }

    /// Position of `e` in `interface_elements`.
    pub fn interface_index(&self, e: usize) -> Option<usize> {
        self.interface_index[e]
    }

    pub fn cut(&self, e: usize) -> Option<&InterfaceCut> {
        self.interface_index[e].map(|k| &self.cuts[k])
    }

    pub fn is_penalty_edge(&self, b: usize) -> bool {
        self.penalty_flag[b]
    }

    /// One row per element: id, class, crossing points.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("element,class,x1,y1,x2,y2\n");
        for (e, class) in self.classes.iter().enumerate() {
            match self.cut(e) {
                Some(cut) => {
                    let [p, q] = [cut.crossings[0].point, cut.crossings[1].point];
                    let _ = writeln!(out, "{e},{},{},{},{},{}", class.label(), p[0], p[1], q[0], q[1]);
                }
                None => {
                    let _ = writeln!(out, "{e},{},,,,", class.label());
                }
            }
        }
        out
    }
}

/// Classifies elements, edges and nodes of `mesh` against `curve` and checks
/// that each edge is cut at most once and each cut element exactly twice.
pub fn classify(mesh: &CartesianMesh, curve: &Curve, exec: Execution) -> Result<MeshClassification> {
    let edges = mesh.edges();
    let edge_crossings = exec.try_map(edges.len(), |b| {
        curve.edge_intersection(edges[b].a, edges[b].b).map_err(|err| match err {
            Error::EdgeCrossings { .. } => Error::EdgeCrossings { edge: b },
            other => other,
        })
    })?;

    let per_element = exec.try_map(mesh.element_count(), |e| -> Result<(ElementClass, Option<InterfaceCut>)> {
        let cut_edges: Vec<usize> =
            mesh.element_edges(e).into_iter().filter(|&b| edge_crossings[b].is_some()).collect();
        match cut_edges.len() {
            0 => Ok((uncut_class(mesh, curve, e)?, None)),
            2 => {
                if mesh.touches_boundary(e) {
                    return Err(Error::BoundaryInterface { element: e });
                }
                let crossings = [edge_crossings[cut_edges[0]].unwrap(), edge_crossings[cut_edges[1]].unwrap()];
                let x0 = crossings[0].xi;
                let x1 = curve.unwrap_near(crossings[1].xi, x0);
                let xi_range = (x0.min(x1), x0.max(x1));
                let cut = InterfaceCut { element: e, edges: [cut_edges[0], cut_edges[1]], crossings, xi_range };
                Ok((ElementClass::Interface, Some(cut)))
            }
            k => Err(Error::ElementCrossings { element: e, crossings: k }),
        }
    })?;

    let mut classes = Vec::with_capacity(per_element.len());
    let mut cuts = Vec::new();
    let mut interface_elements = Vec::new();
    let mut non_interface_elements = Vec::new();
    let mut interface_index = vec![None; mesh.element_count()];
    for (e, (class, cut)) in per_element.into_iter().enumerate() {
        classes.push(class);
        match cut {
            Some(cut) => {
                interface_index[e] = Some(cuts.len());
                interface_elements.push(e);
                cuts.push(cut);
            }
            None => non_interface_elements.push(e),
        }
    }

    let interior_edges: Vec<usize> = mesh.interior_edge_ids().collect();
    let interface_edges: Vec<usize> =
        interior_edges.iter().copied().filter(|&b| edge_crossings[b].is_some()).collect();
    let mut penalty_flag = vec![false; edges.len()];
    for &e in &interface_elements {
        for b in mesh.element_edges(e) {
            if !edges[b].is_boundary() {
                penalty_flag[b] = true;
            }
        }
    }
    let penalty_edges: Vec<usize> = (0..edges.len()).filter(|&b| penalty_flag[b]).collect();
    let mut shell_flag = vec![false; mesh.element_count()];
    for &b in &penalty_edges {
        for k in edges[b].elements.into_iter().flatten() {
            shell_flag[k] = true;
        }
    }
    let shell_elements = (0..mesh.element_count()).filter(|&e| shell_flag[e]).collect();
    let mut node_flag = vec![false; mesh.vertex_count()];
    for &e in &interface_elements {
        for v in mesh.element_vertices(e) {
            node_flag[v] = true;
        }
    }
    let interface_nodes = (0..mesh.vertex_count()).filter(|&v| node_flag[v]).collect();

    Ok(MeshClassification {
        classes,
        interface_elements,
        non_interface_elements,
        shell_elements,
        interior_edges,
        interface_edges,
        penalty_edges,
        interface_nodes,
        vertex_count: mesh.vertex_count(),
        edge_crossings,
        cuts,
        interface_index,
        penalty_flag,
    })
}

/// Side of an element without edge crossings. A sign change among interior
/// samples means the interface enters and leaves through a single edge or
/// sits entirely inside the element.
fn uncut_class(mesh: &CartesianMesh, curve: &Curve, e: usize) -> Result<ElementClass> {
    let r = mesh.element_rect(e);
    let mut seen = [false; 2];
    for b in 0..INTERIOR_SAMPLES {
        for a in 0..INTERIOR_SAMPLES {
            let s = a as f64 / (INTERIOR_SAMPLES - 1) as f64;
            let t = b as f64 / (INTERIOR_SAMPLES - 1) as f64;
            let phi = curve.level_set([r.x0 + s * r.width(), r.y0 + t * r.height()]);
            if phi.abs() > ZERO_LEVEL {
                seen[Side::of_level(phi).index()] = true;
            }
        }
    }
    match seen {
        [true, true] => Err(Error::ElementCrossings { element: e, crossings: 0 }),
        [true, false] => Ok(ElementClass::Minus),
        _ => Ok(ElementClass::Plus),
    }
}
