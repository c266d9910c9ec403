use std::fmt::Write as _;

use super::{CartesianMesh, MeshClassification};

/// Which space a degree-of-freedom count refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Shared nodes on non-interface elements plus private interface blocks.
    Sdg,
    /// Private blocks on every element.
    Dg,
    /// Continuous `Q_m` on the full node grid.
    Cg,
}

/// Numbering of the `Q_m` grid nodes that belong to at least one
/// non-interface element, in grid order. Nodes touched only by interface
/// elements get `None`.
pub(crate) fn shared_node_numbering(
    mesh: &CartesianMesh,
    classification: &MeshClassification,
    m: usize,
) -> (Vec<Option<usize>>, usize) {
    let mut used = vec![false; mesh.node_count(m)];
    for &e in &classification.non_interface_elements {
        for id in mesh.element_nodes(m, e) {
            used[id] = true;
        }
    }
    let mut next = 0;
    let numbering = used
        .into_iter()
        .map(|u| {
            u.then(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    (numbering, next)
}

/// Number of degrees of freedom of the degree-`m` space under `scheme`.
///
/// The SDG count comes from the same node numbering used to build the
/// global space.
pub fn dof_counts(mesh: &CartesianMesh, classification: &MeshClassification, m: usize, scheme: Scheme) -> usize {
    let block = (m + 1) * (m + 1);
    match scheme {
        Scheme::Dg => block * mesh.element_count(),
        Scheme::Cg => mesh.node_count(m),
        Scheme::Sdg => {
            let (_, shared) = shared_node_numbering(mesh, classification, m);
            shared + block * classification.interface_elements.len()
        }
    }
}

/// `(mN+1)^2 + 4m|T_h^i| - (m-1)|E_h^i|`.
pub fn sdg_closed_formula(n: usize, m: usize, interface_elements: usize, interface_edges: usize) -> usize {
    let cg = (m * n + 1) * (m * n + 1);
    cg + 4 * m * interface_elements - (m - 1) * interface_edges
}

/// One line of a DoF comparison table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DofRow {
    pub m: usize,
    pub n: usize,
    pub interface_elements: usize,
    pub interface_edges: usize,
    pub dg: usize,
    pub sdg: usize,
    pub cg: usize,
}

impl DofRow {
    /// Row from the closed SDG formula and tabulated interface counts.
    pub fn from_counts(m: usize, n: usize, interface_elements: usize, interface_edges: usize) -> Self {
        DofRow {
            m,
            n,
            interface_elements,
            interface_edges,
            dg: (m + 1) * (m + 1) * n * n,
            sdg: sdg_closed_formula(n, m, interface_elements, interface_edges),
            cg: (m * n + 1) * (m * n + 1),
        }
    }

    /// Row from an actual classification; the SDG count is structural and a
    /// disagreement with the closed formula is logged.
    pub fn from_classification(mesh: &CartesianMesh, classification: &MeshClassification, m: usize) -> Self {
        let row = DofRow {
            m,
            n: mesh.n(),
            interface_elements: classification.interface_elements.len(),
            interface_edges: classification.interface_edges.len(),
            dg: dof_counts(mesh, classification, m, Scheme::Dg),
            sdg: dof_counts(mesh, classification, m, Scheme::Sdg),
            cg: dof_counts(mesh, classification, m, Scheme::Cg),
        };
        let formula = row.formula_sdg();
        if formula != row.sdg {
            log::warn!("N={} m={m}: structural SDG count {} differs from closed formula {formula}", row.n, row.sdg);
        }
        row
    }

    pub fn formula_sdg(&self) -> usize {
        sdg_closed_formula(self.n, self.m, self.interface_elements, self.interface_edges)
    }

    pub fn dg_over_sdg(&self) -> f64 {
        self.dg as f64 / self.sdg as f64
    }

    pub fn cg_over_sdg(&self) -> f64 {
        self.cg as f64 / self.sdg as f64
    }
}

pub fn dof_table_csv(rows: &[DofRow]) -> String {
    let mut out = String::from("m,N,T_i,E_i,dof_dg,dof_sdg,dof_cg,dg_over_sdg,cg_over_sdg\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{:.4},{:.4}",
            r.m,
            r.n,
            r.interface_elements,
            r.interface_edges,
            r.dg,
            r.sdg,
            r.cg,
            r.dg_over_sdg(),
            r.cg_over_sdg()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::geometry::{Curve, Shape};
    use crate::mesh::{classify, Rect};

    #[test]
    fn table_examples() {
        let r = DofRow::from_counts(1, 5, 8, 8);
        assert_eq!((r.sdg, r.dg, r.cg), (68, 100, 36));
        assert_eq!(format!("{:.4} {:.4}", r.dg_over_sdg(), r.cg_over_sdg()), "1.4706 0.5294");
        let r = DofRow::from_counts(2, 10, 20, 20);
        assert_eq!((r.sdg, r.dg), (581, 900));
        assert_eq!(format!("{:.4} {:.4}", r.dg_over_sdg(), r.cg_over_sdg()), "1.5491 0.7590");
    }

    /// The closed formula misses vertices surrounded by interface elements
    /// and uncut edges shared by two interface elements; both lose their
    /// nodes in the structural count.
    fn corrected_formula(mesh: &CartesianMesh, cls: &MeshClassification, m: usize) -> usize {
        let mut interface_neighbours = vec![0usize; mesh.vertex_count()];
        for &e in &cls.interface_elements {
            for v in mesh.element_vertices(e) {
                interface_neighbours[v] += 1;
            }
        }
        let n = mesh.n();
        let surrounded = (0..mesh.vertex_count())
            .filter(|&v| {
                let (i, j) = (v % (n + 1), v / (n + 1));
                let incident = (if i == 0 || i == n { 1 } else { 2 }) * (if j == 0 || j == n { 1 } else { 2 });
                interface_neighbours[v] == incident
            })
            .count();
        let uncut_shared = cls
            .interior_edges
            .iter()
            .filter(|&&b| {
                let [k1, k2] = mesh.edge(b).elements;
                cls.edge_crossings[b].is_none() && cls.is_interface(k1.unwrap()) && cls.is_interface(k2.unwrap())
            })
            .count();
        sdg_closed_formula(n, m, cls.interface_elements.len(), cls.interface_edges.len())
            - surrounded
            - (m - 1) * uncut_shared
    }

    #[test]
    fn structural_count_matches_corrected_formula() {
        let mut plain_agreements = 0;
        for (radius, n) in [(0.50025, 10), (0.5002, 20), (0.37, 16), (0.61, 40), (0.50025, 80)] {
            let curve = Curve::new(Shape::Circle { center: [0.0, 0.0], radius }).unwrap();
            let mesh = CartesianMesh::new(Rect::square(-1.0, 1.0), n).unwrap();
            let cls = classify(&mesh, &curve, Execution::Parallel).unwrap();
            for m in 1..=4 {
                let row = DofRow::from_classification(&mesh, &cls, m);
                assert_eq!(row.sdg, corrected_formula(&mesh, &cls, m), "r={radius} N={n} m={m}");
                plain_agreements += usize::from(row.sdg == row.formula_sdg());
            }
        }
        assert!(plain_agreements > 0);
    }

    #[test]
    fn no_interface_gives_cg() {
        let curve = Curve::new(Shape::Circle { center: [5.0, 5.0], radius: 0.5 }).unwrap();
        let mesh = CartesianMesh::new(Rect::square(-1.0, 1.0), 6).unwrap();
        let cls = classify(&mesh, &curve, Execution::Sequential).unwrap();
        for m in 1..=3 {
            assert_eq!(dof_counts(&mesh, &cls, m, Scheme::Sdg), mesh.node_count(m));
        }
    }

    #[test]
    fn csv_layout() {
        let csv = dof_table_csv(&[DofRow::from_counts(1, 5, 8, 8)]);
        assert_eq!(csv.lines().nth(1).unwrap(), "1,5,8,8,100,68,36,1.4706,0.5294");
    }
}
