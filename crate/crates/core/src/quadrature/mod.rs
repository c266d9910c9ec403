//! Gauss rules on cells and edges, Fubini rules on the two curved pieces of
//! a cut cell, and rules along the interface in its curve parameter.

mod cut;
mod gauss;
mod line;

pub use cut::{cut_cell_rule, CutRule};
pub use gauss::{gauss_rule_1d, GaussRule, MAX_POINTS};
pub use line::{edge_rule, interface_segment_rule, CurveRule};

use std::fmt::Write as _;

use crate::geometry::{Point, Side};
use crate::mesh::Rect;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Whole,
    Minus,
    Plus,
}

/// Points and positive weights in physical coordinates, each point tagged
/// with the side of the interface it lies on.
#[derive(Clone, Debug)]
pub struct QuadRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub sides: Vec<Side>,
    pub region: Region,
}

impl QuadRule {
    pub fn empty(region: Region) -> Self {
        QuadRule { points: Vec::new(), weights: Vec::new(), sides: Vec::new(), region }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(Point) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&p, w)| w * f(p)).sum()
    }

    pub(crate) fn push(&mut self, p: Point, w: f64, side: Side) {
        self.points.push(p);
        self.weights.push(w);
        self.sides.push(side);
    }

    /// `x,y,weight,side` rows, prefixed by `tag`.
    pub fn to_csv(&self, tag: &str) -> String {
        let mut out = String::new();
        for ((p, w), s) in self.points.iter().zip(&self.weights).zip(&self.sides) {
            let side = if *s == Side::Minus { "minus" } else { "plus" };
            let _ = writeln!(out, "{tag},{},{},{},{side}", p[0], p[1], w);
        }
        out
    }
}

/// Gauss nodes and weights mapped to `[a, b]`.
pub fn gauss_interval(a: f64, b: f64, q: usize) -> impl Iterator<Item = (f64, f64)> {
    let rule = gauss_rule_1d(q);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    rule.nodes.iter().zip(&rule.weights).map(move |(x, w)| (mid + half * x, half * w))
}

/// Tensor `q x q` Gauss rule on a whole cell lying on one side.
pub fn cell_rule(rect: &Rect, q: usize, side: Side) -> QuadRule {
    let mut rule = QuadRule::empty(Region::Whole);
    for (y, wy) in gauss_interval(rect.y0, rect.y1, q) {
        for (x, wx) in gauss_interval(rect.x0, rect.x1, q) {
            rule.push([x, y], wx * wy, side);
        }
    }
    rule
}

/// Quadrature orders used by the discretisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureConfig {
    /// Points per direction for cell and edge integrals.
    pub volume: usize,
    /// Points for the interface constraint integrals.
    pub constraint: usize,
}

impl QuadratureConfig {
    /// `m + 3` for cells and edges, `2m + 6` for the constraints.
    ///
    /// The constraint integrands carry curvature derivatives; on the star
    /// interface `m + 4` points leave weak-jump residuals near `1e-9`.
    pub fn for_degree(m: usize) -> Self {
        QuadratureConfig { volume: m + 3, constraint: 2 * m + 6 }
    }

    /// Both orders raised by `extra`.
    pub fn with_offset(m: usize, extra: usize) -> Self {
        let base = Self::for_degree(m);
        QuadratureConfig { volume: base.volume + extra, constraint: base.constraint + extra }
    }
}
