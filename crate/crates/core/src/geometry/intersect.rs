use super::curve::Curve;
use super::roots::brent;
use super::{norm, sub, Point};
use crate::error::{Error, Result};

const EDGE_SUBSAMPLES: usize = 16;
const TOUCH_TOL: f64 = 1e-13;

/// Where the interface crosses a segment `a -> b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeCrossing {
    pub point: Point,
    pub xi: f64,
    /// Position along the segment, `point = a + t (b - a)`.
    pub t: f64,
}

impl Curve {
    /// The unique crossing of the interface with segment `a -> b`, if any.
    ///
    /// A level set vanishing at an endpoint (tangential touching or a curve
    /// through a vertex) is reported as no crossing. More than one sign
    /// change yields `Error::EdgeCrossings` with `edge = usize::MAX`; callers
    /// that know the edge id substitute it.
    pub fn edge_intersection(&self, a: Point, b: Point) -> Result<Option<EdgeCrossing>> {
        let along = |t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
        let phi = |t: f64| self.level_set(along(t));
        let fa = phi(0.0);
        let fb = phi(1.0);
        if fa.abs() < TOUCH_TOL || fb.abs() < TOUCH_TOL {
            log::warn!("interface touches segment endpoint ({a:?} -> {b:?}); treated as no crossing");
            return Ok(None);
        }
        let mut changes = 0;
        let mut bracket = (0.0, 1.0);
        let mut prev = (0.0, fa);
        for i in 1..=EDGE_SUBSAMPLES {
            let t = i as f64 / EDGE_SUBSAMPLES as f64;
            let f = if i == EDGE_SUBSAMPLES { fb } else { phi(t) };
            if f != 0.0 && f.signum() != prev.1.signum() {
                changes += 1;
                bracket = (prev.0, t);
            }
            if f != 0.0 {
                prev = (t, f);
            }
        }
        match changes {
            0 => Ok(None),
            1 => {
                let len = norm(sub(b, a));
                let t = brent(phi, bracket.0, bracket.1, 4.0 * f64::EPSILON, TOUCH_TOL * len.max(1e-300))
                    .ok_or_else(|| Error::invalid("failed to bracket edge crossing"))?;
                let point = along(t);
                let xi = self.pull_back(point, None)?.xi;
                Ok(Some(EdgeCrossing { point, xi, t }))
            }
            _ => Err(Error::EdgeCrossings { edge: usize::MAX }),
        }
    }
}
