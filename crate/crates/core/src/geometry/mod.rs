//! Interface curves, the Frenet coordinate map `(eta, xi) <-> x` and the
//! coefficients of the Laplacian written in Frenet coordinates.

mod curve;
mod frenet;
mod intersect;
pub mod roots;

pub use curve::{Curve, CurveDerivs, FrenetFrame, Shape};
pub use frenet::{FrenetPoint, LaplacianCoeffs};
pub use intersect::EdgeCrossing;

pub type Point = [f64; 2];

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn axpy(a: Point, s: f64, b: Point) -> Point {
    [a[0] + s * b[0], a[1] + s * b[1]]
}

/// The fixed rotation `[0 1; -1 0]` used to build the normal from the tangent.
#[inline]
pub fn rotate(a: Point) -> Point {
    [a[1], -a[0]]
}

/// The two subdomains separated by the interface; `Minus` is where the
/// level set is negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn of_level(phi: f64) -> Side {
        if phi < 0.0 {
            Side::Minus
        } else {
            Side::Plus
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::Minus => 0,
            Side::Plus => 1,
        }
    }
}
