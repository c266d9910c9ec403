use super::poly::lagrange_1d;
use super::BasisEval;
use crate::geometry::Point;
use crate::mesh::Rect;

/// Tensor `Q_m` Lagrange shapes on the uniform node grid of `rect`; shape
/// `a + (m + 1) b` belongs to node `(a, b)`.
pub fn lagrange_basis(rect: &Rect, m: usize, x: Point) -> BasisEval {
    let mut out = BasisEval::zeros((m + 1) * (m + 1));
    lagrange_basis_into(rect, m, x, &mut out);
    out
}

pub(crate) fn lagrange_basis_into(rect: &Rect, m: usize, x: Point, out: &mut BasisEval) {
    let sx = 2.0 / rect.width();
    let sy = 2.0 / rect.height();
    let (vx, dx) = lagrange_1d(m, sx * (x[0] - rect.x0) - 1.0);
    let (vy, dy) = lagrange_1d(m, sy * (x[1] - rect.y0) - 1.0);
    let nb = (m + 1) * (m + 1);
    out.values.resize(nb, 0.0);
    out.grads.resize(nb, [0.0; 2]);
    for b in 0..=m {
        for a in 0..=m {
            let k = a + (m + 1) * b;
            out.values[k] = vx[a] * vy[b];
            out.grads[k] = [sx * dx[a] * vy[b], sy * vx[a] * dy[b]];
        }
    }
}
