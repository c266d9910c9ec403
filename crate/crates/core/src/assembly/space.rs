use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::mesh::dofs::shared_node_numbering;
use crate::mesh::{CartesianMesh, MeshClassification, Scheme};

/// Local-to-global degree-of-freedom map of an SDG or DG space.
///
/// Local index `k` of an element is the Lagrange node `(k % (m+1), k / (m+1))`
/// on non-interface elements and the `k`-th IFE shape on interface elements.
#[derive(Clone, Debug)]
pub struct GlobalSpace {
    pub scheme: Scheme,
    pub degree: usize,
    pub dof_count: usize,
    /// Number of shared (continuous) node unknowns, numbered first.
    pub shared_count: usize,
    local_to_global: Vec<usize>,
    block: usize,
    /// Unknowns attached to Lagrange nodes on the domain boundary, increasing.
    pub boundary_dofs: Vec<usize>,
    /// Physical position of each boundary unknown.
    pub boundary_points: Vec<Point>,
}

impl GlobalSpace {
    pub fn local_to_global(&self, e: usize) -> &[usize] {
        &self.local_to_global[e * self.block..(e + 1) * self.block]
    }

    pub fn element_count(&self) -> usize {
        self.local_to_global.len() / self.block
    }

    pub fn local_len(&self) -> usize {
        self.block
    }

    pub fn is_boundary_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.dof_count];
        for &d in &self.boundary_dofs {
            mask[d] = true;
        }
        mask
    }
}

/// Numbers the unknowns of the degree-`m` space.
///
/// SDG: Lagrange nodes of non-interface elements are shared, nodes touched
/// only by interface elements are dropped, and every interface element gets
/// `(m+1)^2` private unknowns. DG: every element gets a private block.
pub fn build_global_space(
    mesh: &CartesianMesh,
    classification: &MeshClassification,
    m: usize,
    scheme: Scheme,
) -> Result<GlobalSpace> {
    if m == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    if let Some(&e) = classification.interface_elements.iter().find(|&&e| mesh.touches_boundary(e)) {
        return Err(Error::BoundaryInterface { element: e });
    }
    let block = (m + 1) * (m + 1);
    let ne = mesh.element_count();
    let mut local_to_global = vec![0usize; ne * block];
    let mut boundary = Vec::new();
    let (dof_count, shared_count) = match scheme {
        Scheme::Sdg => {
            let (numbering, shared) = shared_node_numbering(mesh, classification, m);
            for e in 0..ne {
                let dst = &mut local_to_global[e * block..(e + 1) * block];
                match classification.interface_index(e) {
                    Some(k) => {
                        for (l, d) in dst.iter_mut().enumerate() {
                            *d = shared + k * block + l;
                        }
                    }
                    None => {
                        for (d, node) in dst.iter_mut().zip(mesh.element_nodes(m, e)) {
                            *d = numbering[node].expect("node of a non-interface element is numbered");
                        }
                    }
                }
            }
            for (node, id) in numbering.iter().enumerate() {
                if let Some(id) = id {
                    if mesh.node_on_boundary(m, node) {
                        boundary.push((*id, mesh.node_point(m, node)));
                    }
                }
            }
            (shared + block * classification.interface_elements.len(), shared)
        }
        Scheme::Dg => {
            for e in 0..ne {
                let nodes = mesh.element_nodes(m, e);
                for l in 0..block {
                    let d = e * block + l;
                    local_to_global[d] = d;
                    if !classification.is_interface(e) && mesh.node_on_boundary(m, nodes[l]) {
                        boundary.push((d, mesh.node_point(m, nodes[l])));
                    }
                }
            }
            (ne * block, 0)
        }
        Scheme::Cg => return Err(Error::invalid("the IFE schemes use SDG or DG spaces")),
    };
    boundary.sort_by_key(|b| b.0);
    Ok(GlobalSpace {
        scheme,
        degree: m,
        dof_count,
        shared_count,
        local_to_global,
        block,
        boundary_dofs: boundary.iter().map(|b| b.0).collect(),
        boundary_points: boundary.iter().map(|b| b.1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::geometry::{Curve, Shape};
    use crate::mesh::{classify, dof_counts, Rect};

    fn setup(radius: f64, n: usize) -> (CartesianMesh, MeshClassification) {
        let curve = Curve::new(Shape::Circle { center: [0.0, 0.0], radius }).unwrap();
        let mesh = CartesianMesh::new(Rect::square(-1.0, 1.0), n).unwrap();
        let cls = classify(&mesh, &curve, Execution::Sequential).unwrap();
        (mesh, cls)
    }

    #[test]
    fn sdg_count_matches_mesh_count() {
        for (r, n) in [(0.50025, 10), (0.50025, 20), (0.37, 16)] {
            let (mesh, cls) = setup(r, n);
            for m in 1..=3 {
                let space = build_global_space(&mesh, &cls, m, Scheme::Sdg).unwrap();
                assert_eq!(space.dof_count, dof_counts(&mesh, &cls, m, Scheme::Sdg));
                let mut seen = vec![false; space.dof_count];
                for e in 0..mesh.element_count() {
                    for &d in space.local_to_global(e) {
                        seen[d] = true;
                    }
                }
                assert!(seen.iter().all(|&s| s));
            }
        }
    }

    #[test]
    fn small_circle_example() {
        // r = 0.5 on N = 5 cuts 8 elements and 8 interior edges.
        let (mesh, cls) = setup(0.5, 5);
        assert_eq!((cls.interface_elements.len(), cls.interface_edges.len()), (8, 8));
        let space = build_global_space(&mesh, &cls, 1, Scheme::Sdg).unwrap();
        assert_eq!(space.dof_count, 68);
    }

    #[test]
    fn no_interface_and_dg_counts() {
        let (mesh, cls) = setup(0.5, 6);
        let far = Curve::new(Shape::Circle { center: [5.0, 5.0], radius: 0.5 }).unwrap();
        let cls_far = classify(&mesh, &far, Execution::Sequential).unwrap();
        for m in 1..=3 {
            let space = build_global_space(&mesh, &cls_far, m, Scheme::Sdg).unwrap();
            assert_eq!(space.dof_count, (m * 6 + 1) * (m * 6 + 1));
            assert_eq!(space.boundary_dofs.len(), 4 * m * 6);
            let dg = build_global_space(&mesh, &cls, m, Scheme::Dg).unwrap();
            assert_eq!(dg.dof_count, (m + 1) * (m + 1) * 36);
        }
    }

    #[test]
    fn neighbours_share_edge_nodes() {
        let (mesh, cls) = setup(0.50025, 10);
        let m = 2;
        let space = build_global_space(&mesh, &cls, m, Scheme::Sdg).unwrap();
        for &b in &cls.interior_edges {
            if cls.is_penalty_edge(b) {
                continue;
            }
            let [k1, k2] = mesh.edge(b).elements;
            let (k1, k2) = (k1.unwrap(), k2.unwrap());
            let pos = |e: usize, l: usize| mesh.node_point(m, mesh.element_nodes(m, e)[l]);
            for l1 in 0..9 {
                for l2 in 0..9 {
                    let (p, q) = (pos(k1, l1), pos(k2, l2));
                    if (p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12 {
                        assert_eq!(space.local_to_global(k1)[l1], space.local_to_global(k2)[l2]);
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_interface_is_rejected() {
        let (mesh, _) = setup(0.5, 10);
        let c = Curve::new(Shape::Circle { center: [0.0, 0.0], radius: 0.93 }).unwrap();
        if let Ok(cls) = classify(&mesh, &c, Execution::Sequential) {
            assert!(build_global_space(&mesh, &cls, 1, Scheme::Sdg).is_err());
        }
    }
}
