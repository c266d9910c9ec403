use faer::linalg::solvers::Solve;
#[cfg(test)]
use faer::linalg::solvers::SolveLstsq;
use faer::Mat;

use super::poly::LegendreTable;
use super::{BasisEval, FrenetSample};
use crate::error::{Error, Result};
use crate::geometry::{Curve, FrenetPoint, Point, Side};
use crate::mesh::FictitiousElement;
use crate::quadrature::interface_segment_rule;

/// Largest accepted condition estimate of the constraint matrix.
pub const MAX_CONDITION: f64 = 1e12;

/// Frenet IFE shape functions on one interface element.
///
/// Each shape is a pair of tensor polynomials in the scaled coordinates
/// `s = eta / h` and `t` (affine image of `[a_K, b_K]` onto `[-1, 1]`),
/// stored by Legendre coefficients: index `i + (m + 1) j` for `P_i(s) P_j(t)`.
/// The minus pieces are the Lagrange duals of the uniform node grid of
/// `[-1, 1]^2`; the plus pieces are their images under the extension map.
#[derive(Clone, Debug)]
pub struct LocalIfeBasis {
    pub parent: usize,
    pub degree: usize,
    pub half_width: f64,
    pub xi_range: (f64, f64),
    pub beta: (f64, f64),
    pub constraint_points: usize,
    /// Ratio of extreme singular values of the constraint matrix.
    pub condition: f64,
    minus: Vec<f64>,
    plus: Vec<f64>,
    extension: Vec<f64>,
}

/// Largest normalized residual of each constraint family.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpResidual {
    pub continuity: f64,
    pub flux: f64,
    /// One entry per `j = 0..=m-2`; empty for `m = 1`.
    pub extended: Vec<f64>,
}

impl JumpResidual {
    pub fn max(&self) -> f64 {
        self.extended.iter().copied().fold(self.continuity.max(self.flux), f64::max)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Rows: `m + 1` continuity moments, `m + 1` flux moments, then `m + 1`
/// moments of `d^j L` for each `j = 0..=m-2`; columns: Legendre products.
/// Row family `f` is scaled by `h^f`-type factors so entries are `O(1)`.
fn constraint_matrix(curve: &Curve, m: usize, h: f64, (a, b): (f64, f64), q: usize) -> Result<Mat<f64>> {
    let n1 = m + 1;
    let nb = n1 * n1;
    let c_xi = 2.0 / (b - a);
    let ls = LegendreTable::new(m, m, 0.0);
    let rule = interface_segment_rule(curve, (a, b), q);
    let mut mat = Mat::<f64>::zeros(nb, nb);
    for (&xi, &w) in rule.xi.iter().zip(&rule.weights) {
        let lt = LegendreTable::new(m, 2, c_xi * (xi - a) - 1.0);
        let coeffs = if m >= 2 { Some(curve.laplacian_coeffs(FrenetPoint::new(0.0, curve.wrap(xi)), m - 2)?) } else { None };
        for k in 0..n1 {
            let v = w * lt.get(k, 0);
            for j in 0..n1 {
                let (t0, t1, t2) = (lt.get(j, 0), c_xi * lt.get(j, 1), c_xi * c_xi * lt.get(j, 2));
                for i in 0..n1 {
                    let col = i + n1 * j;
                    mat[(k, col)] += v * ls.get(i, 0) * t0;
                    mat[(n1 + k, col)] += v * ls.get(i, 1) * t0;
                    let Some(c) = &coeffs else { continue };
                    for jj in 0..m - 1 {
                        // h^(jj+2) d_eta^jj L(P_i(eta/h) P_j(t)) at eta = 0
                        let mut s = ls.get(i, jj + 2) * t0;
                        for l in 0..=jj {
                            let bin = binomial(jj, l);
                            let hl = h.powi(l as i32);
                            s += bin
                                * hl
                                * (h * h * c.j0[l] * ls.get(i, jj - l) * t2
                                    + h * c.j1[l] * ls.get(i, jj - l + 1) * t0
                                    + h * h * c.j2[l] * ls.get(i, jj - l) * t1);
                        }
                        mat[((2 + jj) * n1 + k, col)] += v * s;
                    }
                }
            }
        }
    }
    Ok(mat)
}

/// Builds the IFE shapes on the fictitious element `fe` for coefficients
/// `beta = (beta_minus, beta_plus)` using `q` points on the interface.
pub fn build_ife_basis(fe: &FictitiousElement, curve: &Curve, beta: (f64, f64), m: usize, q: usize) -> Result<LocalIfeBasis> {
    if m == 0 {
        return Err(Error::invalid("IFE degree must be at least 1"));
    }
    if !(beta.0 > 0.0 && beta.1 > 0.0) {
        return Err(Error::invalid("coefficients must be positive"));
    }
    let n1 = m + 1;
    let nb = n1 * n1;
    let h = fe.half_width;
    let a = constraint_matrix(curve, m, h, fe.xi_range, q)?;
    let sv = a.singular_values().map_err(|_| Error::IllConditioned { element: fe.parent, condition: f64::INFINITY })?;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = smax / smin;
    log::debug!("element {}: IFE constraint condition {condition:.3e}", fe.parent);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { element: fe.parent, condition });
    }
    let ratio = beta.0 / beta.1;
    let mut da = a.clone();
    for r in n1..nb {
        for c in 0..nb {
            da[(r, c)] *= ratio;
        }
    }
    let e = a.col_piv_qr().solve(da.as_ref());

    let vandermonde = Mat::<f64>::from_fn(nb, nb, |node, idx| {
        let (na, nbb) = (node % n1, node / n1);
        let s = -1.0 + 2.0 * na as f64 / m as f64;
        let t = -1.0 + 2.0 * nbb as f64 / m as f64;
        LegendreTable::new(m, 0, s).get(idx % n1, 0) * LegendreTable::new(m, 0, t).get(idx / n1, 0)
    });
    let minus = vandermonde.partial_piv_lu().solve(Mat::<f64>::identity(nb, nb).as_ref());
    let plus = &e * &minus;
    let flat = |x: &Mat<f64>| (0..nb * nb).map(|k| x[(k / nb, k % nb)]).collect::<Vec<f64>>();
    Ok(LocalIfeBasis {
        parent: fe.parent,
        degree: m,
        half_width: h,
        xi_range: fe.xi_range,
        beta,
        constraint_points: q,
        condition,
        minus: flat(&minus),
        plus: flat(&plus),
        extension: flat(&e),
    })
}

impl LocalIfeBasis {
    pub fn len(&self) -> usize {
        (self.degree + 1) * (self.degree + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn xi_center(&self) -> f64 {
        0.5 * (self.xi_range.0 + self.xi_range.1)
    }

    /// Extension map on Legendre coefficients, row-major.
    pub fn extension(&self) -> &[f64] {
        &self.extension
    }

    /// Legendre coefficients of shape `k` on one side.
    pub fn coefficients(&self, k: usize, side: Side) -> Vec<f64> {
        let nb = self.len();
        let src = if side == Side::Minus { &self.minus } else { &self.plus };
        (0..nb).map(|i| src[i * nb + k]).collect()
    }

    /// Frenet coordinates of `x` on this element's parameter branch.
    pub fn locate(&self, curve: &Curve, x: Point) -> Result<FrenetSample> {
        let center = self.xi_center();
        let p = curve.pull_back(x, Some(curve.wrap(center)))?;
        let frame = curve.frame(p.xi)?;
        Ok(FrenetSample { eta: p.eta, xi: curve.unwrap_near(p.xi, center), frame })
    }

    /// Evaluates all shapes at `sample` using the pieces of `side`.
    pub fn eval_sample(&self, sample: &FrenetSample, side: Side, out: &mut BasisEval) {
        let m = self.degree;
        let n1 = m + 1;
        let nb = n1 * n1;
        let (a, b) = self.xi_range;
        let c_xi = 2.0 / (b - a);
        let h = self.half_width;
        let ls = LegendreTable::new(m, 1, sample.eta / h);
        let lt = LegendreTable::new(m, 1, c_xi * (sample.xi - a) - 1.0);
        let coeffs = if side == Side::Minus { &self.minus } else { &self.plus };
        out.values.clear();
        out.values.resize(nb, 0.0);
        out.grads.clear();
        out.grads.resize(nb, [0.0; 2]);
        let mut d_eta = vec![0.0; nb];
        let mut d_xi = vec![0.0; nb];
        for j in 0..n1 {
            for i in 0..n1 {
                let idx = i + n1 * j;
                let p = ls.get(i, 0) * lt.get(j, 0);
                let pe = ls.get(i, 1) * lt.get(j, 0) / h;
                let px = ls.get(i, 0) * lt.get(j, 1) * c_xi;
                let row = &coeffs[idx * nb..(idx + 1) * nb];
                for k in 0..nb {
                    out.values[k] += row[k] * p;
                    d_eta[k] += row[k] * pe;
                    d_xi[k] += row[k] * px;
                }
            }
        }
        let f = &sample.frame;
        let stretch = f.speed * (1.0 + sample.eta * f.curvature);
        for k in 0..nb {
            let t = d_xi[k] / stretch;
            out.grads[k] = [d_eta[k] * f.normal[0] + t * f.tangent[0], d_eta[k] * f.normal[1] + t * f.tangent[1]];
        }
    }

    /// Evaluates all shapes at a physical point, choosing the side by the
    /// sign of `eta`.
    pub fn eval(&self, curve: &Curve, x: Point) -> Result<BasisEval> {
        let sample = self.locate(curve, x)?;
        let side = if sample.eta < 0.0 { Side::Minus } else { Side::Plus };
        let mut out = BasisEval::zeros(self.len());
        self.eval_sample(&sample, side, &mut out);
        Ok(out)
    }

    /// Residuals of all constraint families over all shapes, recomputed with
    /// two more interface points than used in the construction.
    pub fn jump_residual(&self, curve: &Curve) -> Result<JumpResidual> {
        let a = self.check_matrix(curve)?;
        let mut total = self.empty_residual();
        for k in 0..self.len() {
            let r = self.residual_with(&a, &self.coefficients(k, Side::Minus), &self.coefficients(k, Side::Plus));
            total.continuity = total.continuity.max(r.continuity);
            total.flux = total.flux.max(r.flux);
            for (t, v) in total.extended.iter_mut().zip(&r.extended) {
                *t = t.max(*v);
            }
        }
        Ok(total)
    }

    /// Residuals of an arbitrary pair of Legendre coefficient vectors.
    pub fn jump_residual_of(&self, curve: &Curve, minus: &[f64], plus: &[f64]) -> Result<JumpResidual> {
        let a = self.check_matrix(curve)?;
        Ok(self.residual_with(&a, minus, plus))
    }

    fn check_matrix(&self, curve: &Curve) -> Result<Mat<f64>> {
        constraint_matrix(curve, self.degree, self.half_width, self.xi_range, self.constraint_points + 2)
    }

    fn empty_residual(&self) -> JumpResidual {
        JumpResidual { continuity: 0.0, flux: 0.0, extended: vec![0.0; self.degree - 1] }
    }

    fn residual_with(&self, a: &Mat<f64>, minus: &[f64], plus: &[f64]) -> JumpResidual {
        let n1 = self.degree + 1;
        let nb = n1 * n1;
        let scale_c = minus.iter().chain(plus).fold(0.0f64, |s, v| s.max(v.abs()));
        let (bm, bp) = self.beta;
        let mut out = self.empty_residual();
        for r in 0..nb {
            let (weight_m, weight_p) = if r < n1 { (1.0, 1.0) } else { (bm, bp) };
            let mut vm = 0.0;
            let mut vp = 0.0;
            let mut row_norm = 0.0;
            for c in 0..nb {
                vm += a[(r, c)] * minus[c];
                vp += a[(r, c)] * plus[c];
                row_norm += a[(r, c)].abs();
            }
            let scale = row_norm * scale_c * weight_m.max(weight_p);
            let res = if scale > 0.0 { (weight_p * vp - weight_m * vm).abs() / scale } else { 0.0 };
            let family = r / n1;
            match family {
                0 => out.continuity = out.continuity.max(res),
                1 => out.flux = out.flux.max(res),
                f => out.extended[f - 2] = out.extended[f - 2].max(res),
            }
        }
        out
    }

    /// Rows `row,col,value` of the extension map.
    pub fn extension_csv(&self) -> String {
        let nb = self.len();
        let mut out = String::new();
        for r in 0..nb {
            for c in 0..nb {
                out.push_str(&format!("{},{r},{c},{}\n", self.parent, self.extension[r * nb + c]));
            }
        }
        out
    }
}
