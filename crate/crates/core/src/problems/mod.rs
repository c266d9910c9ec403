//! Manufactured interface problems with exact solutions.

mod bessel;

pub use bessel::{bessel_j1_y1, Bessel1, MAX_ARGUMENT};

use std::f64::consts::{FRAC_PI_3, PI};

use crate::error::{Error, Result};
use crate::geometry::{Curve, FrenetPoint, Point, Shape, Side};
use crate::jet::{Jet, Scalar};
use crate::mesh::Rect;

/// Default interface radius of the circular examples, chosen off the grid
/// lines of the usual meshes.
#[allow(clippy::approx_constant)]
pub const DEFAULT_RADIUS: f64 = PI / 6.28;

#[derive(Clone, Debug, PartialEq)]
pub enum ProblemKind {
    /// `u = r^nu / beta` inside, shifted to be continuous outside.
    Radial { r0: f64, nu: f64 },
    /// `u = cos(psi) / beta (+ const)` for the star level set `psi`.
    Star { lobe: f64, level: f64 },
    /// `u = J1(gamma r) sin(theta)` inside, `(A J1 + B Y1)(gamma r) sin(theta)` outside.
    Bessel { r0: f64, a: f64, b: f64 },
}

/// Exact piecewise solution of `-div(beta grad u) = f` with homogeneous jump
/// conditions across the curve and Dirichlet data `g = u` on the boundary.
#[derive(Clone, Debug)]
pub struct ManufacturedProblem {
    pub name: String,
    pub domain: Rect,
    pub curve: Curve,
    pub beta: (f64, f64),
    pub kind: ProblemKind,
}

fn check_beta(beta: (f64, f64)) -> Result<()> {
    if !(beta.0 > 0.0 && beta.1 > 0.0) {
        return Err(Error::invalid("coefficients must be positive"));
    }
    Ok(())
}

/// The radial problem on `(-1, 1)^2` with circular interface of radius `r0`.
pub fn radial_problem(r0: f64, nu: f64, beta: (f64, f64)) -> Result<ManufacturedProblem> {
    check_beta(beta)?;
    if !(r0 > 0.0 && r0 < 1.0) || !(nu >= 2.0) {
        return Err(Error::invalid("radial problem needs 0 < r0 < 1 and nu >= 2"));
    }
    Ok(ManufacturedProblem {
        name: "radial".into(),
        domain: Rect::square(-1.0, 1.0),
        curve: Curve::new(Shape::Circle { center: [0.0, 0.0], radius: r0 })?,
        beta,
        kind: ProblemKind::Radial { r0, nu },
    })
}

/// The star problem on `(-2, 2)^2`, interface `r^4 (1 + b sin 6 theta)^2 = r0`.
pub fn star_problem(lobe: f64, level: f64, beta: (f64, f64)) -> Result<ManufacturedProblem> {
    check_beta(beta)?;
    Ok(ManufacturedProblem {
        name: "star".into(),
        domain: Rect::square(-2.0, 2.0),
        curve: Curve::new(Shape::Star { center: [0.0, 0.0], lobe, level })?,
        beta,
        kind: ProblemKind::Star { lobe, level },
    })
}

/// Star problem with `(b, r0) = (3/10, pi/3)`.
pub fn default_star_problem(beta: (f64, f64)) -> Result<ManufacturedProblem> {
    star_problem(0.3, FRAC_PI_3, beta)
}

/// Bessel eigenmode problem on `(-1, 1)^2` with circular interface of radius `r0`.
pub fn bessel_problem(r0: f64, beta: (f64, f64)) -> Result<ManufacturedProblem> {
    check_beta(beta)?;
    if !(r0 > 0.0 && r0 < 1.0) {
        return Err(Error::invalid("Bessel problem needs 0 < r0 < 1"));
    }
    let (gm, gp) = (beta.0.powf(-0.5), beta.1.powf(-0.5));
    let reach = 2f64.sqrt() * gm.max(gp);
    if reach > MAX_ARGUMENT {
        return Err(Error::invalid(format!("Bessel arguments up to {reach:.3} exceed {MAX_ARGUMENT}")));
    }
    let (a, b) = bessel_coefficients(r0, beta)?;
    Ok(ManufacturedProblem {
        name: "bessel".into(),
        domain: Rect::square(-1.0, 1.0),
        curve: Curve::new(Shape::Circle { center: [0.0, 0.0], radius: r0 })?,
        beta,
        kind: ProblemKind::Bessel { r0, a, b },
    })
}

/// `(A, B)` from continuity of `u` and of `beta d_r u` at `r0`; with
/// `beta gamma = sqrt(beta)` the flux row reads
/// `sqrt(beta+) (A J1' + B Y1') = sqrt(beta-) J1'`.
pub fn bessel_coefficients(r0: f64, beta: (f64, f64)) -> Result<(f64, f64)> {
    let (gm, gp) = (beta.0.powf(-0.5), beta.1.powf(-0.5));
    let inner = bessel_j1_y1(gm * r0)?;
    let outer = bessel_j1_y1(gp * r0)?;
    let (sm, sp) = (beta.0.sqrt(), beta.1.sqrt());
    let m = [[outer.j1, outer.y1], [sp * outer.dj1, sp * outer.dy1]];
    let rhs = [inner.j1, sm * inner.dj1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m[0][0].abs().max(m[0][1].abs()) * m[1][0].abs().max(m[1][1].abs());
    if !(det.abs() > 1e-14 * scale) {
        return Err(Error::invalid("singular Bessel matching system"));
    }
    let a = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det;
    let b = (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / det;
    Ok((a, b))
}

impl ManufacturedProblem {
    pub fn beta_on(&self, side: Side) -> f64 {
        match side {
            Side::Minus => self.beta.0,
            Side::Plus => self.beta.1,
        }
    }

    pub fn side_of(&self, p: Point) -> Side {
        Side::of_level(self.curve.level_set(p))
    }

    /// Branch `side` of the solution, written once for values and jets.
    fn eval<T: Scalar>(&self, x: T, y: T, side: Side) -> T {
        let beta = self.beta_on(side);
        match self.kind {
            ProblemKind::Radial { r0, nu } => {
                let r = (x * x + y * y).sqrt();
                let v = r.powf(nu) / beta;
                match side {
                    Side::Minus => v,
                    Side::Plus => v + (1.0 / self.beta.0 - 1.0 / self.beta.1) * r0.powf(nu),
                }
            }
            ProblemKind::Star { .. } => {
                let v = self.curve.shape().level_set(x, y).cos() / beta;
                match side {
                    Side::Minus => v,
                    Side::Plus => v + (1.0 / self.beta.0 - 1.0 / self.beta.1),
                }
            }
            ProblemKind::Bessel { .. } => unreachable!("Bessel branches are evaluated in closed form"),
        }
    }

    /// `(F(r), F'(r))` with `u = F(r) sin(theta)` on `side`.
    fn bessel_radial(&self, r: f64, side: Side) -> (f64, f64) {
        let ProblemKind::Bessel { a, b, .. } = self.kind else { unreachable!() };
        let gamma = self.beta_on(side).powf(-0.5);
        // r = 0 only at the centre, where J1 vanishes
        let s = bessel_j1_y1((gamma * r).max(1e-300)).expect("argument range checked at construction");
        match side {
            Side::Minus => (s.j1, gamma * s.dj1),
            Side::Plus => (a * s.j1 + b * s.y1, gamma * (a * s.dj1 + b * s.dy1)),
        }
    }

    /// Value of branch `side` at `p`.
    pub fn u(&self, p: Point, side: Side) -> f64 {
        match self.kind {
            ProblemKind::Bessel { .. } => {
                let r = p[0].hypot(p[1]);
                if r == 0.0 {
                    return 0.0;
                }
                self.bessel_radial(r, side).0 * p[1] / r
            }
            _ => self.eval(p[0], p[1], side),
        }
    }

    /// Value on the side containing `p`.
    pub fn u_exact(&self, p: Point) -> f64 {
        self.u(p, self.side_of(p))
    }

    pub fn grad(&self, p: Point, side: Side) -> Point {
        match self.kind {
            ProblemKind::Bessel { .. } => {
                let r = p[0].hypot(p[1]);
                if r == 0.0 {
                    // J1(gamma r) sin(theta) ~ gamma y / 2
                    return [0.0, 0.5 * self.beta_on(side).powf(-0.5)];
                }
                let (f, df) = self.bessel_radial(r, side);
                let (c, s) = (p[0] / r, p[1] / r);
                // grad(F sin t) = F' s e_r + F c / r e_t
                [df * s * c - f * c * s / r, df * s * s + f * c * c / r]
            }
            _ => {
                let gx = self.eval(Jet::<2>::variable(p[0]), Jet::constant(p[1]), side).c[1];
                let gy = self.eval(Jet::<2>::constant(p[0]), Jet::variable(p[1]), side).c[1];
                [gx, gy]
            }
        }
    }

    /// `f = -beta Laplacian(u)` on `side`.
    pub fn f(&self, p: Point, side: Side) -> f64 {
        match self.kind {
            ProblemKind::Radial { nu, .. } => -nu * nu * p[0].hypot(p[1]).powf(nu - 2.0),
            ProblemKind::Bessel { .. } => self.u(p, side),
            ProblemKind::Star { .. } => {
                let uxx = self.eval(Jet::<3>::variable(p[0]), Jet::constant(p[1]), side).derivative(2);
                let uyy = self.eval(Jet::<3>::constant(p[0]), Jet::variable(p[1]), side).derivative(2);
                -self.beta_on(side) * (uxx + uyy)
            }
        }
    }

    /// Dirichlet data: the plus branch.
    pub fn g(&self, p: Point) -> f64 {
        self.u(p, Side::Plus)
    }

    /// Largest `|u+ - u-|` and `|beta+ d_n u+ - beta- d_n u-|` over `samples`
    /// points on the interface.
    pub fn jump_residuals(&self, samples: usize) -> Result<(f64, f64)> {
        let (lo, _) = self.curve.param_domain();
        let period = self.curve.period();
        let (mut ju, mut jf) = (0.0f64, 0.0f64);
        for k in 0..samples {
            let xi = lo + period * (k as f64 + 0.5) / samples as f64;
            let p = self.curve.point(xi);
            let n = self.curve.frame(xi)?.normal;
            ju = ju.max((self.u(p, Side::Plus) - self.u(p, Side::Minus)).abs());
            let (gp, gm) = (self.grad(p, Side::Plus), self.grad(p, Side::Minus));
            let flux = self.beta.1 * (gp[0] * n[0] + gp[1] * n[1]) - self.beta.0 * (gm[0] * n[0] + gm[1] * n[1]);
            jf = jf.max(flux.abs());
        }
        Ok((ju, jf))
    }

    /// Largest `|[beta d_n^j Laplacian(u)]|`, `j = 0..=max_order`, sampled on
    /// the interface. Both branches of `beta Laplacian(u) = -f` are smooth
    /// across the curve, so their difference is differentiated along the
    /// normal with a centred stencil. Values above `1e-6` are logged.
    pub fn extended_jump_diagnostic(&self, max_order: usize, samples: usize) -> Result<Vec<f64>> {
        let (lo, _) = self.curve.param_domain();
        let period = self.curve.period();
        let delta = 0.05 * self.curve.tube_half_width().min(1.0);
        let mut worst = vec![0.0f64; max_order + 1];
        for k in 0..samples {
            let xi = lo + period * (k as f64 + 0.5) / samples as f64;
            for (j, w) in worst.iter_mut().enumerate() {
                let half = j / 2 + 1;
                let nodes: Vec<f64> = (0..=2 * half).map(|i| i as f64 - half as f64).collect();
                let mut d = 0.0;
                for (c, s) in derivative_weights(j, &nodes).iter().zip(&nodes) {
                    let p = self.curve.push_forward(FrenetPoint::new(s * delta, xi))?;
                    d += c * (self.f(p, Side::Minus) - self.f(p, Side::Plus));
                }
                *w = w.max((d / delta.powi(j as i32)).abs());
            }
        }
        for (j, w) in worst.iter().enumerate() {
            if *w > 1e-6 {
                log::warn!("{}: extended jump [beta d_n^{j} Laplacian u] reaches {w:.3e}", self.name);
            }
        }
        Ok(worst)
    }
}

/// Weights `w_i` with `sum_i w_i p(x_i) = p^(j)(0)` for polynomials `p` of
/// degree below `nodes.len()`.
fn derivative_weights(j: usize, nodes: &[f64]) -> Vec<f64> {
    let factorial: f64 = (1..=j).map(|i| i as f64).product();
    (0..nodes.len())
        .map(|i| {
            // monomial coefficients of the Lagrange polynomial L_i
            let mut poly = vec![1.0];
            let mut denom = 1.0;
            for (k, &xk) in nodes.iter().enumerate() {
                if k == i {
                    continue;
                }
                let mut next = vec![0.0; poly.len() + 1];
                for (d, &c) in poly.iter().enumerate() {
                    next[d + 1] += c;
                    next[d] -= xk * c;
                }
                poly = next;
                denom *= nodes[i] - xk;
            }
            poly.get(j).copied().unwrap_or(0.0) * factorial / denom
        })
        .collect()
}
