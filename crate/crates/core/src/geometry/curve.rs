use std::f64::consts::TAU;
use std::fmt::Write as _;

use super::{cross, dot, norm, rotate, Point};
use crate::error::{Error, Result};
use crate::jet::{Jet, Scalar};

const SEED_SAMPLES: usize = 64;
const CURVATURE_SAMPLES: usize = 4096;

/// Built-in interface parametrizations.
///
/// Every shape is oriented so that `n = [0 1; -1 0] tau` points from the
/// minus side (level set < 0) to the plus side.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    /// Counter-clockwise circle `center + radius (cos xi, sin xi)`.
    Circle { center: Point, radius: f64 },
    /// Six-lobed star `{ r^4 (1 + lobe sin 6 theta)^2 = level }`, parametrized
    /// by the polar angle.
    Star { center: Point, lobe: f64, level: f64 },
    /// Straight segment `origin + xi * direction`, `xi` in `range`.
    Line {
        origin: Point,
        direction: Point,
        range: (f64, f64),
    },
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Circle { .. } => "circle",
            Shape::Star { .. } => "star",
            Shape::Line { .. } => "line",
        }
    }

    pub fn param_domain(&self) -> (f64, f64) {
        match self {
            Shape::Circle { .. } | Shape::Star { .. } => (0.0, TAU),
            Shape::Line { range, .. } => *range,
        }
    }

    pub fn is_closed(&self) -> bool {
        !matches!(self, Shape::Line { .. })
    }

    pub fn position<T: Scalar>(&self, t: T) -> [T; 2] {
        match *self {
            Shape::Circle { center, radius } => {
                [t.cos() * radius + center[0], t.sin() * radius + center[1]]
            }
            Shape::Star {
                center,
                lobe,
                level,
            } => {
                let r = ((t * 6.0).sin() * lobe + 1.0).powf(-0.5) * level.powf(0.25);
                [r * t.cos() + center[0], r * t.sin() + center[1]]
            }
            Shape::Line {
                origin, direction, ..
            } => [
                t * direction[0] + origin[0],
                t * direction[1] + origin[1],
            ],
        }
    }

    /// Level-set function, negative on the minus side.
    pub fn level_set<T: Scalar>(&self, x: T, y: T) -> T {
        match *self {
            Shape::Circle { center, radius } => {
                let dx = x - center[0];
                let dy = y - center[1];
                (dx * dx + dy * dy).sqrt() - radius
            }
            Shape::Star {
                center,
                lobe,
                level,
            } => {
                let dx = x - center[0];
                let dy = y - center[1];
                let r2 = dx * dx + dy * dy;
                // r^4 (1 + b sin 6t)^2 vanishes to fourth order at the centre.
                if r2.value() == 0.0 {
                    return T::cst(-level);
                }
                let x2 = dx * dx;
                let y2 = dy * dy;
                // Im (dx + i dy)^6
                let im6 = dx * dy * (x2 * x2 * 6.0 - x2 * y2 * 20.0 + y2 * y2 * 6.0);
                let num = r2 * r2 * r2 + im6 * lobe;
                num * num / (r2 * r2 * r2 * r2) - level
            }
            Shape::Line {
                origin, direction, ..
            } => {
                let len = norm(direction);
                let n = rotate([direction[0] / len, direction[1] / len]);
                (x - origin[0]) * n[0] + (y - origin[1]) * n[1]
            }
        }
    }
}

/// Position and the first three parameter derivatives at one `xi`.
#[derive(Clone, Copy, Debug)]
pub struct CurveDerivs {
    pub g: Point,
    pub d1: Point,
    pub d2: Point,
    pub d3: Point,
}

impl CurveDerivs {
    pub fn speed(&self) -> f64 {
        norm(self.d1)
    }

    pub fn curvature(&self) -> f64 {
        cross(self.d1, self.d2) / self.speed().powi(3)
    }

    pub fn curvature_derivative(&self) -> f64 {
        let s2 = dot(self.d1, self.d1);
        let s = s2.sqrt();
        cross(self.d1, self.d3) / (s2 * s) - 3.0 * cross(self.d1, self.d2) * dot(self.d1, self.d2) / (s2 * s2 * s)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FrenetFrame {
    pub tangent: Point,
    pub normal: Point,
    pub curvature: f64,
    pub speed: f64,
}

/// An interface curve with cached seed samples and tube half-width.
///
/// Immutable after construction; all queries are pure.
#[derive(Clone, Debug)]
pub struct Curve {
    shape: Shape,
    domain: (f64, f64),
    seeds: Vec<(f64, Point)>,
    max_curvature: f64,
    half_width: f64,
}

impl Curve {
    pub fn new(shape: Shape) -> Result<Self> {
        match &shape {
            Shape::Circle { radius, .. } if !(*radius > 0.0) => {
                return Err(Error::invalid("circle radius must be positive"))
            }
            Shape::Star { lobe, level, .. } if !(lobe.abs() < 1.0 && *level > 0.0) => {
                return Err(Error::invalid("star needs |b| < 1 and r0 > 0"))
            }
            Shape::Line { range, .. } if !(range.0 < range.1) => {
                return Err(Error::invalid("line parameter range is empty"))
            }
            _ => {}
        }
        let domain = shape.param_domain();
        let mut curve = Curve {
            shape,
            domain,
            seeds: Vec::new(),
            max_curvature: 0.0,
            half_width: f64::INFINITY,
        };
        let period = domain.1 - domain.0;
        let mut kmax: f64 = 0.0;
        for i in 0..CURVATURE_SAMPLES {
            let xi = domain.0 + period * (i as f64 + 0.5) / CURVATURE_SAMPLES as f64;
            let d = curve.derivs(xi);
            if d.speed() < 1e-14 {
                return Err(Error::DegenerateParametrization {
                    xi,
                    speed: d.speed(),
                });
            }
            kmax = kmax.max(d.curvature().abs());
        }
        curve.max_curvature = kmax;
        if kmax > 0.0 {
            curve.half_width = 0.9 / kmax;
        }
        let n_seeds = if curve.is_closed() { SEED_SAMPLES } else { SEED_SAMPLES + 1 };
        curve.seeds = (0..n_seeds)
            .map(|i| {
                let xi = domain.0 + period * i as f64 / SEED_SAMPLES as f64;
                (xi, curve.point(xi))
            })
            .collect();
        curve.check_orientation()?;
        Ok(curve)
    }

    fn check_orientation(&self) -> Result<()> {
        let delta = 1e-4 * self.half_width.min(1.0);
        for &(xi, g) in &self.seeds {
            let n = self.frame(xi)?.normal;
            let plus = self.level_set([g[0] + delta * n[0], g[1] + delta * n[1]]);
            let minus = self.level_set([g[0] - delta * n[0], g[1] - delta * n[1]]);
            if !(plus > 0.0 && minus < 0.0) {
                return Err(Error::Orientation { xi, value: plus });
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn param_domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn is_closed(&self) -> bool {
        self.shape.is_closed()
    }

    pub fn period(&self) -> f64 {
        self.domain.1 - self.domain.0
    }

    /// Half-width `0.9 / max |kappa|` of the uniform tube around the curve.
    ///
    /// Diagnostic only: Frenet evaluations check `1 + eta kappa` at the foot
    /// point, which allows wider offsets where the curvature is small.
    pub fn tube_half_width(&self) -> f64 {
        self.half_width
    }

    pub fn max_curvature(&self) -> f64 {
        self.max_curvature
    }

    pub(crate) fn seeds(&self) -> &[(f64, Point)] {
        &self.seeds
    }

    pub fn point(&self, xi: f64) -> Point {
        self.shape.position(xi)
    }

    pub fn derivs(&self, xi: f64) -> CurveDerivs {
        let [x, y] = self.shape.position(Jet::<4>::variable(xi));
        CurveDerivs {
            g: [x.c[0], y.c[0]],
            d1: [x.c[1], y.c[1]],
            d2: [2.0 * x.c[2], 2.0 * y.c[2]],
            d3: [6.0 * x.c[3], 6.0 * y.c[3]],
        }
    }

    pub fn level_set(&self, p: Point) -> f64 {
        self.shape.level_set(p[0], p[1])
    }

    pub fn frame(&self, xi: f64) -> Result<FrenetFrame> {
        let d = self.derivs(xi);
        let speed = d.speed();
        if speed < 1e-14 {
            return Err(Error::DegenerateParametrization { xi, speed });
        }
        let tangent = [d.d1[0] / speed, d.d1[1] / speed];
        Ok(FrenetFrame {
            tangent,
            normal: rotate(tangent),
            curvature: d.curvature(),
            speed,
        })
    }

    /// Maps `xi` into the parameter domain (closed curves only).
    pub fn wrap(&self, xi: f64) -> f64 {
        if !self.is_closed() {
            return xi;
        }
        let p = self.period();
        let w = (xi - self.domain.0).rem_euclid(p) + self.domain.0;
        if w >= self.domain.1 {
            self.domain.0
        } else {
            w
        }
    }

    /// Representative of `xi` (mod the period) closest to `reference`.
    pub fn unwrap_near(&self, xi: f64, reference: f64) -> f64 {
        if !self.is_closed() {
            return xi;
        }
        let p = self.period();
        xi + ((reference - xi) / p).round() * p
    }

    /// CSV rows `xi,x,y,kappa` at `n` uniformly spaced parameters.
    pub fn sample_csv(&self, n: usize) -> String {
        let mut out = String::from("xi,x,y,kappa\n");
        let (a, b) = self.domain;
        let last = if self.is_closed() { n } else { n.saturating_sub(1).max(1) };
        for i in 0..n {
            let xi = a + (b - a) * i as f64 / last as f64;
            let d = self.derivs(xi);
            let _ = writeln!(out, "{xi},{},{},{}", d.g[0], d.g[1], d.curvature());
        }
        out
    }
}
