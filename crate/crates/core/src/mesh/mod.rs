//! Uniform Cartesian meshes, classification against the interface, fictitious
//! elements and degree-of-freedom accounting.

mod classify;
pub(crate) mod dofs;
pub(crate) mod fictitious;

pub use classify::{classify, ElementClass, InterfaceCut, MeshClassification};
pub use dofs::{dof_counts, dof_table_csv, sdg_closed_formula, DofRow, Scheme};
pub use fictitious::{fictitious_element, FictitiousElement, MAX_OVERLAP};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    pub fn square(lo: f64, hi: f64) -> Self {
        Rect::new(lo, hi, lo, hi)
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Point {
        [0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1)]
    }

    /// Counter-clockwise from the lower-left corner.
    pub fn vertices(&self) -> [Point; 4] {
        [[self.x0, self.y0], [self.x1, self.y0], [self.x1, self.y1], [self.x0, self.y1]]
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        p[0] >= self.x0 - tol && p[0] <= self.x1 + tol && p[1] >= self.y0 - tol && p[1] <= self.y1 + tol
    }
}

/// Orientation of a mesh edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeAxis {
    Horizontal,
    Vertical,
}

/// A mesh edge with its incident elements.
///
/// `elements[0]` is the element with the smaller id and `normal` points from
/// it towards `elements[1]`. Boundary edges have `elements[1] == None` and an
/// outward normal.
#[derive(Clone, Copy, Debug)]
pub struct Edge {
    pub a: Point,
    pub b: Point,
    pub axis: EdgeAxis,
    pub elements: [Option<usize>; 2],
    pub normal: Point,
}

impl Edge {
    pub fn length(&self) -> f64 {
        (self.b[0] - self.a[0]).abs() + (self.b[1] - self.a[1]).abs()
    }

    pub fn is_boundary(&self) -> bool {
        self.elements[1].is_none()
    }
}

/// Uniform `N x N` rectangular mesh of a rectangle.
///
/// Element `(i, j)` has id `i + N j`. Horizontal edge `(i, j)` (at height
/// `y_j`) has id `j N + i`; vertical edge `(i, j)` (at `x_i`) has id
/// `N (N + 1) + j (N + 1) + i`.
#[derive(Clone, Debug)]
pub struct CartesianMesh {
    domain: Rect,
    n: usize,
    hx: f64,
    hy: f64,
    edges: Vec<Edge>,
}

impl CartesianMesh {
    pub fn new(domain: Rect, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("mesh needs N >= 2, got {n}")));
        }
        if !(domain.width() > 0.0 && domain.height() > 0.0) {
            return Err(Error::invalid("mesh domain has non-positive extent"));
        }
        let hx = domain.width() / n as f64;
        let hy = domain.height() / n as f64;
        let mut mesh = CartesianMesh { domain, n, hx, hy, edges: Vec::new() };
        mesh.edges = mesh.build_edges();
        Ok(mesh)
    }

    fn build_edges(&self) -> Vec<Edge> {
        let n = self.n;
        let mut edges = Vec::with_capacity(2 * n * (n + 1));
        for j in 0..=n {
            for i in 0..n {
                let below = (j > 0).then(|| self.element_id(i, j - 1));
                let above = (j < n).then(|| self.element_id(i, j));
                let (elements, normal) = match (below, above) {
                    (Some(b), Some(a)) => ([Some(b), Some(a)], [0.0, 1.0]),
                    (Some(b), None) => ([Some(b), None], [0.0, 1.0]),
                    (None, Some(a)) => ([Some(a), None], [0.0, -1.0]),
                    (None, None) => unreachable!(),
                };
                edges.push(Edge {
                    a: self.vertex(i, j),
                    b: self.vertex(i + 1, j),
                    axis: EdgeAxis::Horizontal,
                    elements,
                    normal,
                });
            }
        }
        for j in 0..n {
            for i in 0..=n {
                let left = (i > 0).then(|| self.element_id(i - 1, j));
                let right = (i < n).then(|| self.element_id(i, j));
                let (elements, normal) = match (left, right) {
                    (Some(l), Some(r)) => ([Some(l), Some(r)], [1.0, 0.0]),
                    (Some(l), None) => ([Some(l), None], [1.0, 0.0]),
                    (None, Some(r)) => ([Some(r), None], [-1.0, 0.0]),
                    (None, None) => unreachable!(),
                };
                edges.push(Edge {
                    a: self.vertex(i, j),
                    b: self.vertex(i, j + 1),
                    axis: EdgeAxis::Vertical,
                    elements,
                    normal,
                });
            }
        }
        edges
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    /// Subdivisions per direction.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hx(&self) -> f64 {
        self.hx
    }

    pub fn hy(&self) -> f64 {
        self.hy
    }

    /// The common edge length used for fictitious elements.
    pub fn edge_size(&self) -> f64 {
        self.hx.max(self.hy)
    }

    /// Mesh size: the element diameter.
    pub fn h(&self) -> f64 {
        self.hx.hypot(self.hy)
    }

    pub fn element_count(&self) -> usize {
        self.n * self.n
    }

    pub fn element_id(&self, i: usize, j: usize) -> usize {
        i + self.n * j
    }

    pub fn element_ij(&self, e: usize) -> (usize, usize) {
        (e % self.n, e / self.n)
    }

    pub fn element_rect(&self, e: usize) -> Rect {
        let (i, j) = self.element_ij(e);
        let [x0, y0] = self.vertex(i, j);
        let [x1, y1] = self.vertex(i + 1, j + 1);
        Rect::new(x0, x1, y0, y1)
    }

    /// Mesh vertex `(i, j)`, `0 <= i, j <= N`. The last vertex row is pinned
    /// to the domain boundary so element areas add up exactly.
    pub fn vertex(&self, i: usize, j: usize) -> Point {
        let x = if i == self.n { self.domain.x1 } else { self.domain.x0 + i as f64 * self.hx };
        let y = if j == self.n { self.domain.y1 } else { self.domain.y0 + j as f64 * self.hy };
        [x, y]
    }

    pub fn vertex_count(&self) -> usize {
        (self.n + 1) * (self.n + 1)
    }

    pub fn vertex_id(&self, i: usize, j: usize) -> usize {
        i + (self.n + 1) * j
    }

    /// Vertex ids of element `e`, counter-clockwise from the lower left.
    pub fn element_vertices(&self, e: usize) -> [usize; 4] {
        let (i, j) = self.element_ij(e);
        [self.vertex_id(i, j), self.vertex_id(i + 1, j), self.vertex_id(i + 1, j + 1), self.vertex_id(i, j + 1)]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// Edge ids of element `e` in the order bottom, right, top, left.
    pub fn element_edges(&self, e: usize) -> [usize; 4] {
        let n = self.n;
        let (i, j) = self.element_ij(e);
        let horizontal = |i: usize, j: usize| j * n + i;
        let vertical = |i: usize, j: usize| n * (n + 1) + j * (n + 1) + i;
        [horizontal(i, j), vertical(i + 1, j), horizontal(i, j + 1), vertical(i, j)]
    }

    pub fn interior_edge_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&b| !self.edges[b].is_boundary())
    }

    /// Whether element `e` has an edge on the domain boundary.
    pub fn touches_boundary(&self, e: usize) -> bool {
        let (i, j) = self.element_ij(e);
        i == 0 || j == 0 || i + 1 == self.n || j + 1 == self.n
    }

    /// Number of `Q_m` nodes on the global tensor grid.
    pub fn node_count(&self, m: usize) -> usize {
        let k = m * self.n + 1;
        k * k
    }

    /// Location of global `Q_m` node `id`.
    pub fn node_point(&self, m: usize, id: usize) -> Point {
        let k = m * self.n + 1;
        let (a, b) = (id % k, id / k);
        let coord = |lo: f64, hi: f64, c: usize| {
            if c == k - 1 {
                hi
            } else {
                lo + (hi - lo) * c as f64 / (k - 1) as f64
            }
        };
        [coord(self.domain.x0, self.domain.x1, a), coord(self.domain.y0, self.domain.y1, b)]
    }

    pub fn node_on_boundary(&self, m: usize, id: usize) -> bool {
        let k = m * self.n + 1;
        let (a, b) = (id % k, id / k);
        a == 0 || b == 0 || a == k - 1 || b == k - 1
    }

    /// Global `Q_m` node ids of element `e`; local node `(a, b)` is stored at
    /// position `a + (m + 1) b`.
    pub fn element_nodes(&self, m: usize, e: usize) -> Vec<usize> {
        let k = m * self.n + 1;
        let (i, j) = self.element_ij(e);
        let mut ids = Vec::with_capacity((m + 1) * (m + 1));
        for b in 0..=m {
            for a in 0..=m {
                ids.push((m * i + a) + k * (m * j + b));
            }
        }
        ids
    }

    /// Element containing `p`, with points on shared edges assigned to the
    /// element with the larger index.
    pub fn locate(&self, p: Point) -> Option<usize> {
        if !self.domain.contains(p, 0.0) {
            return None;
        }
        let i = (((p[0] - self.domain.x0) / self.hx).floor() as usize).min(self.n - 1);
        let j = (((p[1] - self.domain.y0) / self.hy).floor() as usize).min(self.n - 1);
        Some(self.element_id(i, j))
    }
}
