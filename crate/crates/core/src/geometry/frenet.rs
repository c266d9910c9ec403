use super::curve::Curve;
use super::roots::brent;
use super::{axpy, dot, norm, rotate, sub, Point};
use crate::error::{Error, Result};

const MAX_NEWTON: usize = 50;
const REFINED_SAMPLES: usize = 64;

/// Smallest admissible `1 + eta kappa` at the closest-point foot. Points
/// closer to a centre of curvature than this are rejected.
pub const MIN_STRETCH: f64 = 0.05;

/// Frenet coordinates: signed normal offset `eta` and curve parameter `xi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrenetPoint {
    pub eta: f64,
    pub xi: f64,
}

impl FrenetPoint {
    pub fn new(eta: f64, xi: f64) -> Self {
        FrenetPoint { eta, xi }
    }
}

/// Columns of the Jacobian of `P(eta, xi) = g(xi) + eta n(xi)`.
#[derive(Clone, Copy, Debug)]
pub struct FrenetJacobian {
    pub d_eta: Point,
    pub d_xi: Point,
}

/// `eta`-derivatives (index = derivative order) of the coefficients of the
/// Laplacian in Frenet coordinates,
/// `L u = u_ee + J0 u_xx + J1 u_e + J2 u_x` with `psi = 1 / (1 + eta kappa)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianCoeffs {
    pub psi: Vec<f64>,
    pub j0: Vec<f64>,
    pub j1: Vec<f64>,
    pub j2: Vec<f64>,
}

impl Curve {
    fn check_tube(&self, eta: f64, kappa: f64) -> Result<()> {
        let stretch = 1.0 + eta * kappa;
        if !(stretch >= MIN_STRETCH) {
            return Err(Error::OutsideTube {
                eta,
                stretch,
                half_width: self.tube_half_width(),
            });
        }
        Ok(())
    }

    pub fn push_forward(&self, p: FrenetPoint) -> Result<Point> {
        let f = self.frame(p.xi)?;
        self.check_tube(p.eta, f.curvature)?;
        Ok(axpy(self.point(p.xi), p.eta, f.normal))
    }

    pub fn jacobian(&self, p: FrenetPoint) -> Result<FrenetJacobian> {
        let d = self.derivs(p.xi);
        let f = self.frame(p.xi)?;
        self.check_tube(p.eta, f.curvature)?;
        // tau' = (g'' - tau (tau . g'')) / |g'|, n' = R tau'
        let t = f.tangent;
        let tt = dot(t, d.d2);
        let dtau = [(d.d2[0] - tt * t[0]) / f.speed, (d.d2[1] - tt * t[1]) / f.speed];
        Ok(FrenetJacobian {
            d_eta: f.normal,
            d_xi: axpy(d.d1, p.eta, rotate(dtau)),
        })
    }

    /// Closest-point inverse of the Frenet map.
    ///
    /// Damped Newton on `(x - g(xi)) . g'(xi) = 0`, started from `hint` or the
    /// nearest seed sample. If that start does not converge, the nearest seed
    /// and then a dense scan around it are tried. The returned `xi` is wrapped
    /// into the parameter domain for closed curves.
    pub fn pull_back(&self, x: Point, hint: Option<f64>) -> Result<FrenetPoint> {
        let seed = self.nearest_seed(x);
        let (fine, spacing) = self.refined_seed(x, seed);
        let mut last = f64::INFINITY;
        let mut found = None;
        for start in [hint, Some(seed), Some(fine)].into_iter().flatten() {
            match self.closest_point_newton(x, start) {
                Ok(xi) => {
                    found = Some(xi);
                    break;
                }
                Err(r) => last = r,
            }
        }
        if found.is_none() {
            // Slow Newton near the evolute: bracket the stationary point instead.
            let stationarity = |xi: f64| {
                let d = self.derivs(xi);
                dot(sub(x, d.g), d.d1)
            };
            found = brent(stationarity, fine - spacing, fine + spacing, 1e-15 * (1.0 + fine.abs()), 0.0);
        }
        let xi = found.ok_or(Error::PullBackDiverged { iterations: MAX_NEWTON, residual: last })?;
        let f = self.frame(xi)?;
        let eta = dot(sub(x, self.point(xi)), f.normal);
        self.check_tube(eta, f.curvature)?;
        Ok(FrenetPoint {
            eta,
            xi: self.wrap(xi),
        })
    }

    fn closest_point_newton(&self, x: Point, start: f64) -> std::result::Result<f64, f64> {
        let mut xi = start;
        let scale = 1.0 + norm(x);
        let residual = |xi: f64| {
            let d = self.derivs(xi);
            dot(sub(x, d.g), d.d1)
        };
        let mut last = f64::INFINITY;
        for _ in 0..MAX_NEWTON {
            let d = self.derivs(xi);
            let r = sub(x, d.g);
            let f = dot(r, d.d1);
            last = f.abs();
            let s2 = dot(d.d1, d.d1);
            let mut df = -s2 + dot(r, d.d2);
            if df > -0.1 * s2 {
                // Far from a distance minimum; fall back to a Gauss-Newton step.
                df = -s2;
            }
            let step = -f / df;
            let mut lambda = 1.0;
            let mut next = xi + step;
            for _ in 0..30 {
                if residual(next).abs() <= f.abs() || (step * lambda).abs() * s2.sqrt() < 1e-15 * scale {
                    break;
                }
                lambda *= 0.5;
                next = xi + lambda * step;
            }
            xi = next;
            if (lambda * step).abs() * s2.sqrt() <= 1e-14 * scale {
                return Ok(xi);
            }
        }
        Err(last)
    }

    /// Nearest of a fine sampling within one seed spacing of `seed`, with the
    /// fine spacing.
    fn refined_seed(&self, x: Point, seed: f64) -> (f64, f64) {
        let (a, b) = self.param_domain();
        let spacing = (b - a) / self.seeds().len().max(1) as f64;
        let fine = 2.0 * spacing / REFINED_SAMPLES as f64;
        let best = (0..=REFINED_SAMPLES)
            .map(|i| seed - spacing + fine * i as f64)
            .filter(|xi| self.is_closed() || (*xi >= a && *xi <= b))
            .map(|xi| (xi, norm(sub(x, self.point(xi)))))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .map_or(seed, |(xi, _)| xi);
        (best, fine)
    }

    fn nearest_seed(&self, x: Point) -> f64 {
        self.seeds()
            .iter()
            .map(|&(xi, g)| (xi, norm(sub(x, g))))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(xi, _)| xi)
            .unwrap_or(self.param_domain().0)
    }

    /// Values and `eta`-derivatives up to `order` of `psi, J0, J1, J2`.
    pub fn laplacian_coeffs(&self, p: FrenetPoint, order: usize) -> Result<LaplacianCoeffs> {
        let d = self.derivs(p.xi);
        let speed = d.speed();
        if speed < 1e-14 {
            return Err(Error::DegenerateParametrization { xi: p.xi, speed });
        }
        let kappa = d.curvature();
        self.check_tube(p.eta, kappa)?;
        let dkappa = d.curvature_derivative();
        let s2 = speed * speed;
        let tangential = dot(d.d1, d.d2) / s2;
        let psi = 1.0 / (1.0 + p.eta * kappa);

        // d^k psi^q / d eta^k = (q)_k (-kappa)^k psi^(q+k), rising factorial.
        let dpow = |q: usize, k: usize| -> f64 {
            let mut rising = 1.0;
            for i in 0..k {
                rising *= (q + i) as f64;
            }
            rising * (-kappa).powi(k as i32) * psi.powi((q + k) as i32)
        };

        let mut out = LaplacianCoeffs {
            psi: Vec::with_capacity(order + 1),
            j0: Vec::with_capacity(order + 1),
            j1: Vec::with_capacity(order + 1),
            j2: Vec::with_capacity(order + 1),
        };
        for k in 0..=order {
            let dpsi = dpow(1, k);
            let dpsi2 = dpow(2, k);
            // d^k (eta psi^3) = eta d^k psi^3 + k d^(k-1) psi^3
            let eta_psi3 = p.eta * dpow(3, k) + if k > 0 { k as f64 * dpow(3, k - 1) } else { 0.0 };
            out.psi.push(dpsi);
            out.j0.push(dpsi2 / s2);
            out.j1.push(kappa * dpsi);
            out.j2.push(-(dkappa * eta_psi3 + tangential * dpsi2) / s2);
        }
        Ok(out)
    }
}
