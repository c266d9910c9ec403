use super::{gauss_interval, QuadRule, Region};
use crate::error::{Error, Result};
use crate::geometry::roots::brent;
use crate::geometry::{Curve, Point, Side};
use crate::mesh::Rect;

/// Sign samples per inner line when looking for interface crossings.
const LINE_SAMPLES: usize = 8;

/// Rules for the two pieces `K^-` and `K^+` of a cut cell.
#[derive(Clone, Debug)]
pub struct CutRule {
    pub minus: QuadRule,
    pub plus: QuadRule,
}

impl CutRule {
    pub fn side(&self, side: Side) -> &QuadRule {
        match side {
            Side::Minus => &self.minus,
            Side::Plus => &self.plus,
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.minus.total_weight() + self.plus.total_weight()
    }
}

/// Iterated Gauss rule on the two pieces of `rect` cut by `curve`, which
/// crosses the cell boundary at `crossings`.
///
/// The outer integral runs along the axis on which the crossings are further
/// apart, split at the crossing coordinates; the inner integral is split at
/// the interface, located per outer node by bracketed root finding. If the
/// interface is not a graph over that axis the other axis is tried.
pub fn cut_cell_rule(rect: &Rect, curve: &Curve, crossings: [Point; 2], q: usize, element: usize) -> Result<CutRule> {
    let dx = (crossings[0][0] - crossings[1][0]).abs();
    let dy = (crossings[0][1] - crossings[1][1]).abs();
    let first = dx >= dy;
    fubini(rect, curve, crossings, q, first, element)
        .or_else(|_| fubini(rect, curve, crossings, q, !first, element))
        .map_err(|_| Error::NotGraph { element })
}

fn fubini(rect: &Rect, curve: &Curve, crossings: [Point; 2], q: usize, outer_x: bool, element: usize) -> Result<CutRule> {
    let (u0, u1, v0, v1) = if outer_x {
        (rect.x0, rect.x1, rect.y0, rect.y1)
    } else {
        (rect.y0, rect.y1, rect.x0, rect.x1)
    };
    let map = |u: f64, v: f64| if outer_x { [u, v] } else { [v, u] };
    let k = if outer_x { 0 } else { 1 };
    let tol = 1e-12 * (u1 - u0);
    let mut breaks = vec![u0];
    let mut inner: Vec<f64> = crossings.iter().map(|c| c[k]).filter(|&u| u > u0 + tol && u < u1 - tol).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup_by(|a, b| (*a - *b).abs() <= tol);
    breaks.extend(inner);
    breaks.push(u1);

    let mut rule = CutRule { minus: QuadRule::empty(Region::Minus), plus: QuadRule::empty(Region::Plus) };
    let push = |rule: &mut CutRule, p: Point, w: f64, side: Side| match side {
        Side::Minus => rule.minus.push(p, w, side),
        Side::Plus => rule.plus.push(p, w, side),
    };
    for strip in breaks.windows(2) {
        for (u, wu) in gauss_interval(strip[0], strip[1], q) {
            let phi = |v: f64| curve.level_set(map(u, v));
            let mut changes = 0;
            let mut bracket = (v0, v1);
            let mut prev: Option<(f64, f64)> = None;
            let mut strongest = (0.0f64, 0.0f64);
            for i in 0..=LINE_SAMPLES {
                let v = v0 + (v1 - v0) * i as f64 / LINE_SAMPLES as f64;
                let f = phi(v);
                if f.abs() > strongest.0.abs() {
                    strongest = (f, v);
                }
                if f == 0.0 {
                    continue;
                }
                if let Some((pv, pf)) = prev {
                    if pf.signum() != f.signum() {
                        changes += 1;
                        bracket = (pv, v);
                    }
                }
                prev = Some((v, f));
            }
            match changes {
                0 => {
                    let side = Side::of_level(strongest.0);
                    for (v, wv) in gauss_interval(v0, v1, q) {
                        push(&mut rule, map(u, v), wu * wv, side);
                    }
                }
                1 => {
                    let root = brent(phi, bracket.0, bracket.1, 1e-15 * (v1 - v0), 0.0)
                        .ok_or(Error::NotGraph { element })?;
                    let lower = Side::of_level(phi(0.5 * (v0 + root)));
                    let upper = if lower == Side::Minus { Side::Plus } else { Side::Minus };
                    for (v, wv) in gauss_interval(v0, root, q) {
                        push(&mut rule, map(u, v), wu * wv, lower);
                    }
                    for (v, wv) in gauss_interval(root, v1, q) {
                        push(&mut rule, map(u, v), wu * wv, upper);
                    }
                }
                _ => return Err(Error::NotGraph { element }),
            }
        }
    }
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::geometry::Shape;
    use crate::mesh::{classify, CartesianMesh};
    use crate::quadrature::gauss_interval;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn circle(r: f64) -> Curve {
        Curve::new(Shape::Circle { center: [0.0, 0.0], radius: r }).unwrap()
    }

    fn crossings_of(rect: &Rect, curve: &Curve) -> [Point; 2] {
        let v = rect.vertices();
        let pts: Vec<Point> = (0..4)
            .filter_map(|i| curve.edge_intersection(v[i], v[(i + 1) % 4]).unwrap().map(|c| c.point))
            .collect();
        [pts[0], pts[1]]
    }

    #[test]
    fn circular_segment_area() {
        let c = circle(0.5);
        let rect = Rect::new(0.3, 0.7, -0.2, 0.2);
        let rule = cut_cell_rule(&rect, &c, crossings_of(&rect, &c), 10, 0).unwrap();
        // int_{-0.2}^{0.2} (sqrt(r^2 - y^2) - 0.3) dy
        let r2: f64 = 0.25;
        let prim = |y: f64| 0.5 * (y * (r2 - y * y).sqrt() + r2 * (y / r2.sqrt()).asin()) - 0.3 * y;
        let exact = prim(0.2) - prim(-0.2);
        assert!((rule.minus.total_weight() - exact).abs() < 1e-10 * exact);
        assert!((rule.total_weight() - rect.area()).abs() < 1e-12 * rect.area());
        assert!(rule.minus.weights.iter().chain(&rule.plus.weights).all(|&w| w > 0.0));
    }

    #[test]
    fn partition_of_unity_on_meshes() {
        for (curve, n, lo, hi) in [
            (circle(0.50025), 20, -1.0, 1.0),
            (circle(0.50025), 40, -1.0, 1.0),
            (Curve::new(Shape::Star { center: [0.0, 0.0], lobe: 0.3, level: std::f64::consts::FRAC_PI_3 }).unwrap(), 80, -2.0, 2.0),
        ] {
            let mesh = CartesianMesh::new(Rect::square(lo, hi), n).unwrap();
            let cls = classify(&mesh, &curve, Execution::Parallel).unwrap();
            for cut in &cls.cuts {
                let rect = mesh.element_rect(cut.element);
                let pts = [cut.crossings[0].point, cut.crossings[1].point];
                let rule = cut_cell_rule(&rect, &curve, pts, 4, cut.element).unwrap();
                assert!((rule.total_weight() - rect.area()).abs() < 1e-12 * rect.area());
                for (p, s) in rule.minus.points.iter().zip(&rule.minus.sides) {
                    assert!(*s == Side::Minus && curve.level_set(*p) <= 0.0);
                }
                for p in &rule.plus.points {
                    assert!(curve.level_set(*p) >= 0.0);
                }
            }
        }
    }

    /// `int_{K^-} p dA = oint P dy` with `dP/dx = p`, counter-clockwise around
    /// `K^-`: along the arc in the curve direction and up the right edge /
    /// down the left edge where they lie inside the circle.
    fn green_oracle(curve: &Curve, rect: &Rect, p_antiderivative: impl Fn(f64, f64) -> f64) -> f64 {
        let r = 0.5f64;
        let q = 30;
        let mut total = 0.0;
        let [c0, c1] = crossings_of(rect, curve);
        let (a0, a1) = (c0[1].atan2(c0[0]), c1[1].atan2(c1[0]));
        let (lo, hi) = (a0.min(a1), a0.max(a1));
        for (t, w) in gauss_interval(lo, hi, q) {
            total += w * p_antiderivative(r * t.cos(), r * t.sin()) * r * t.cos();
        }
        for (x, sign) in [(rect.x1, 1.0), (rect.x0, -1.0)] {
            if x.abs() >= r {
                continue;
            }
            let ymax = (r * r - x * x).sqrt();
            let (y0, y1) = (rect.y0.max(-ymax), rect.y1.min(ymax));
            if y1 > y0 {
                for (y, w) in gauss_interval(y0, y1, q) {
                    total += sign * w * p_antiderivative(x, y);
                }
            }
        }
        total
    }

    #[test]
    fn cubic_moments_against_divergence_theorem() {
        let c = circle(0.5);
        // p = 1 + x - 2y + x y - 3 x^2 y + y^3, P = int p dx
        let p = |x: f64, y: f64| 1.0 + x - 2.0 * y + x * y - 3.0 * x * x * y + y.powi(3);
        let pp = |x: f64, y: f64| x + 0.5 * x * x - 2.0 * x * y + 0.5 * x * x * y - x.powi(3) * y + x * y.powi(3);
        for rect in [Rect::new(0.3, 0.7, -0.2, 0.2), Rect::new(0.25, 0.45, 0.25, 0.45), Rect::new(-0.2, 0.1, 0.4, 0.6)] {
            let rule = cut_cell_rule(&rect, &c, crossings_of(&rect, &c), 10, 0).unwrap();
            let v = rule.minus.integrate(|q| p(q[0], q[1]));
            let exact = green_oracle(&c, &rect, pp);
            assert!((v - exact).abs() <= 1e-8 * exact.abs(), "{rect:?}: {v} vs {exact}");
        }
    }

    #[test]
    fn first_moment_against_monte_carlo() {
        let c = circle(0.5);
        let rect = Rect::new(0.3, 0.7, -0.2, 0.2);
        let rule = cut_cell_rule(&rect, &c, crossings_of(&rect, &c), 8, 0).unwrap();
        let v = rule.minus.integrate(|p| p[0]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let samples = 1_000_000;
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..samples {
            let x = rng.gen_range(rect.x0..rect.x1);
            let y = rng.gen_range(rect.y0..rect.y1);
            let f = if c.level_set([x, y]) < 0.0 { x * rect.area() } else { 0.0 };
            sum += f;
            sum2 += f * f;
        }
        let mean = sum / samples as f64;
        let stderr = ((sum2 / samples as f64 - mean * mean) / samples as f64).sqrt();
        assert!((v - mean).abs() < 3.0 * stderr, "{v} vs {mean} +- {stderr}");
    }

    #[test]
    fn non_graph_interface_is_rejected() {
        // The arc bulges past x = y = 0.28 inside the cell, so lines near
        // that coordinate meet it twice in both directions.
        let c = Curve::new(Shape::Circle { center: [0.0, 0.0], radius: 0.3 }).unwrap();
        let rect = Rect::new(-0.1, 0.4, -0.1, 0.4);
        let err = cut_cell_rule(&rect, &c, crossings_of(&rect, &c), 4, 3).unwrap_err();
        assert!(matches!(err, Error::NotGraph { element: 3 }));
    }
}
