use super::{gauss_interval, QuadRule, Region};
use crate::geometry::{Curve, EdgeCrossing, Point, Side};

/// Gauss rule on the segment `a -> b`, split at `crossing` if present. Each
/// point is tagged with the side of its sub-segment.
pub fn edge_rule(a: Point, b: Point, crossing: Option<&EdgeCrossing>, curve: &Curve, q: usize) -> QuadRule {
    let len = (b[0] - a[0]).hypot(b[1] - a[1]);
    let at = |t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    let pieces: Vec<(f64, f64)> = match crossing {
        Some(c) => vec![(0.0, c.t), (c.t, 1.0)],
        None => vec![(0.0, 1.0)],
    };
    let mut rule = QuadRule::empty(Region::Whole);
    for (t0, t1) in pieces {
        if t1 <= t0 {
            continue;
        }
        let side = Side::of_level(curve.level_set(at(0.5 * (t0 + t1))));
        for (t, w) in gauss_interval(t0, t1, q) {
            rule.push(at(t), w * len, side);
        }
    }
    rule
}

/// Points on the interface, by curve parameter, with arc-length weights.
#[derive(Clone, Debug)]
pub struct CurveRule {
    /// Parameters on the caller's branch (not wrapped).
    pub xi: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CurveRule {
    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// `q`-point Gauss rule in the curve parameter on `[a, b]`, weights scaled
/// by `|g'|`.
pub fn interface_segment_rule(curve: &Curve, (a, b): (f64, f64), q: usize) -> CurveRule {
    let mut xi = Vec::with_capacity(q);
    let mut weights = Vec::with_capacity(q);
    for (x, w) in gauss_interval(a, b, q) {
        xi.push(x);
        weights.push(w * curve.derivs(curve.wrap(x)).speed());
    }
    CurveRule { xi, weights }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Shape;
    use std::f64::consts::FRAC_PI_2;

    fn circle() -> Curve {
        Curve::new(Shape::Circle { center: [0.0, 0.0], radius: 0.5 }).unwrap()
    }

    #[test]
    fn uncut_edge_length() {
        let rule = edge_rule([0.0, 0.0], [0.0, 0.4], None, &circle(), 3);
        assert_eq!(rule.len(), 3);
        assert!((rule.total_weight() - 0.4).abs() < 1e-15);
        assert!(rule.sides.iter().all(|&s| s == Side::Minus));
    }

    #[test]
    fn split_edge() {
        let c = circle();
        let (a, b) = ([0.4, 0.0], [0.6, 0.0]);
        let crossing = c.edge_intersection(a, b).unwrap().unwrap();
        let rule = edge_rule(a, b, Some(&crossing), &c, 3);
        assert_eq!(rule.len(), 6);
        let minus: f64 = rule.weights.iter().zip(&rule.sides).filter(|(_, &s)| s == Side::Minus).map(|(w, _)| w).sum();
        let plus: f64 = rule.weights.iter().zip(&rule.sides).filter(|(_, &s)| s == Side::Plus).map(|(w, _)| w).sum();
        assert!((minus - 0.1).abs() < 1e-14 && (plus - 0.1).abs() < 1e-14);
        // int x ds over [0.4, 0.6] = (0.36 - 0.16) / 2
        assert!((rule.integrate(|p| p[0]) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn circle_arc_length() {
        let c = circle();
        for q in 1..=6 {
            let rule = interface_segment_rule(&c, (0.0, FRAC_PI_2), q);
            assert!((rule.total_weight() - 0.25 * std::f64::consts::PI).abs() < 1e-14);
        }
    }

    #[test]
    fn sine_moment() {
        let c = circle();
        let rule = interface_segment_rule(&c, (0.0, FRAC_PI_2), 8);
        let v: f64 = rule.xi.iter().zip(&rule.weights).map(|(x, w)| w * x.sin()).sum();
        assert!((v - 0.5).abs() < 1e-12);
    }
}
