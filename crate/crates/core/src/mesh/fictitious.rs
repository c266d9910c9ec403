use super::{CartesianMesh, MeshClassification, Rect};
use crate::error::{Error, Result};
use crate::geometry::{axpy, Curve};

/// Largest number of mesh elements a fictitious element may overlap.
pub const MAX_OVERLAP: usize = 49;

const IMAGE_SAMPLES: usize = 16;

/// The rectangle `[-h, h] x [a_K, b_K]` in Frenet coordinates attached to an
/// interface element.
#[derive(Clone, Copy, Debug)]
pub struct FictitiousElement {
    pub parent: usize,
    pub half_width: f64,
    /// `(a_K, b_K)`, unwrapped around the parent's interface segment.
    pub xi_range: (f64, f64),
    /// Mesh elements whose rectangles meet the bounding box of the physical
    /// image.
    pub overlap_count: usize,
}

impl FictitiousElement {
    pub fn xi_length(&self) -> f64 {
        self.xi_range.1 - self.xi_range.0
    }

    pub fn xi_center(&self) -> f64 {
        0.5 * (self.xi_range.0 + self.xi_range.1)
    }
}

/// Builds the fictitious element of interface element `e`.
pub fn fictitious_element(
    mesh: &CartesianMesh,
    classification: &MeshClassification,
    e: usize,
    curve: &Curve,
) -> Result<FictitiousElement> {
    let cut = classification
        .cut(e)
        .ok_or_else(|| Error::invalid(format!("element {e} is not an interface element")))?;
    let (a, b) = parameter_envelope(curve, &mesh.element_rect(e), cut.xi_range)?;
    let h = mesh.edge_size();
    let overlap_count = overlap_count(mesh, curve, h, (a, b));
    if overlap_count > MAX_OVERLAP {
        return Err(Error::FictitiousOverlap { element: e, count: overlap_count });
    }
    Ok(FictitiousElement { parent: e, half_width: h, xi_range: (a, b), overlap_count })
}

/// Smallest parameter interval holding the feet of the four vertices of
/// `rect` and the interface segment `segment`.
pub(crate) fn parameter_envelope(curve: &Curve, rect: &Rect, segment: (f64, f64)) -> Result<(f64, f64)> {
    let reference = 0.5 * (segment.0 + segment.1);
    let (mut lo, mut hi) = segment;
    for v in rect.vertices() {
        let foot = curve.pull_back(v, Some(curve.wrap(reference)))?;
        let xi = curve.unwrap_near(foot.xi, reference);
        lo = lo.min(xi);
        hi = hi.max(xi);
    }
    Ok((lo, hi))
}

fn overlap_count(mesh: &CartesianMesh, curve: &Curve, h: f64, (a, b): (f64, f64)) -> usize {
    let mut bbox = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
    let mut add = |eta: f64, xi: f64| {
        // Evaluated without the tube check: only the extent matters here.
        let xi = curve.wrap(xi);
        let frame = curve.derivs(xi);
        let tangent = frame.d1;
        let speed = frame.speed();
        let normal = [tangent[1] / speed, -tangent[0] / speed];
        let p = axpy(frame.g, eta, normal);
        bbox = [bbox[0].min(p[0]), bbox[1].max(p[0]), bbox[2].min(p[1]), bbox[3].max(p[1])];
    };
    for k in 0..=IMAGE_SAMPLES {
        let s = k as f64 / IMAGE_SAMPLES as f64;
        let xi = a + s * (b - a);
        let eta = -h + 2.0 * s * h;
        for e in [-h, 0.0, h] {
            add(e, xi);
        }
        add(eta, a);
        add(eta, b);
    }
    let d = mesh.domain();
    let n = mesh.n() as f64;
    let range = |lo: f64, hi: f64, start: f64, step: f64| -> Option<(usize, usize)> {
        let i0 = ((lo - start) / step).floor().max(0.0);
        let i1 = ((hi - start) / step).ceil().min(n);
        (i1 > i0).then_some((i0 as usize, i1 as usize))
    };
    match (range(bbox[0], bbox[1], d.x0, mesh.hx()), range(bbox[2], bbox[3], d.y0, mesh.hy())) {
        (Some((i0, i1)), Some((j0, j1))) => (i1 - i0) * (j1 - j0),
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::geometry::Shape;
    use crate::mesh::classify;
    use std::f64::consts::FRAC_PI_4;

    fn circle() -> Curve {
        Curve::new(Shape::Circle { center: [0.0, 0.0], radius: 0.5 }).unwrap()
    }

    fn generic_circle() -> Curve {
        Curve::new(Shape::Circle { center: [0.0, 0.0], radius: 0.50025 }).unwrap()
    }

    #[test]
    fn vertex_feet_envelope() {
        let c = circle();
        let rect = Rect::new(0.4, 0.8, 0.0, 0.4);
        let segment = (0.0, (0.3f64).atan2(0.4));
        let (a, b) = parameter_envelope(&c, &rect, segment).unwrap();
        assert!(a.abs() < 1e-12, "a = {a}");
        assert!((b - FRAC_PI_4).abs() < 1e-12, "b = {b}");
    }

    #[test]
    fn envelope_contains_segment_and_overlap_is_bounded() {
        let c = generic_circle();
        for n in [10, 20, 40] {
            let mesh = CartesianMesh::new(Rect::square(-1.0, 1.0), n).unwrap();
            let cls = classify(&mesh, &c, Execution::Parallel).unwrap();
            for cut in &cls.cuts {
                let f = fictitious_element(&mesh, &cls, cut.element, &c).unwrap();
                assert!(f.xi_range.0 < f.xi_range.1);
                let lo = c.unwrap_near(cut.xi_range.0, f.xi_center());
                let hi = lo + (cut.xi_range.1 - cut.xi_range.0);
                assert!(f.xi_range.0 <= lo + 1e-14 && hi <= f.xi_range.1 + 1e-14);
                assert!(f.overlap_count >= 1 && f.overlap_count <= MAX_OVERLAP);
            }
        }
    }

    #[test]
    fn non_interface_element_is_rejected() {
        let c = circle();
        let mesh = CartesianMesh::new(Rect::square(-1.0, 1.0), 10).unwrap();
        let cls = classify(&mesh, &c, Execution::Sequential).unwrap();
        assert!(fictitious_element(&mesh, &cls, 0, &c).is_err());
    }
}
