//! Local shape functions: the Frenet IFE basis on interface elements and the
//! tensor Lagrange basis on the rest.

mod basis;
mod lagrange;
pub mod poly;

pub use basis::{build_ife_basis, JumpResidual, LocalIfeBasis};
pub use lagrange::lagrange_basis;
pub(crate) use lagrange::lagrange_basis_into;

use crate::geometry::{FrenetFrame, Point};

/// Values and physical gradients of all local shape functions at one point.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BasisEval {
    pub values: Vec<f64>,
    pub grads: Vec<Point>,
}

impl BasisEval {
    pub fn zeros(n: usize) -> Self {
        BasisEval { values: vec![0.0; n], grads: vec![[0.0; 2]; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sum_k c_k phi_k` and its gradient.
    pub fn combine(&self, coeffs: &[f64]) -> (f64, Point) {
        let mut v = 0.0;
        let mut g = [0.0; 2];
        for ((c, phi), dphi) in coeffs.iter().zip(&self.values).zip(&self.grads) {
            v += c * phi;
            g[0] += c * dphi[0];
            g[1] += c * dphi[1];
        }
        (v, g)
    }
}

/// A point in Frenet coordinates together with the frame at its foot. The
/// parameter is unwrapped onto the branch of the owning fictitious element.
#[derive(Clone, Copy, Debug)]
pub struct FrenetSample {
    pub eta: f64,
    pub xi: f64,
    pub frame: FrenetFrame,
}
