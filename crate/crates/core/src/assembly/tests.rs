use super::*;
use crate::exec::Execution;
use crate::geometry::{Curve, Shape};
use crate::mesh::{CartesianMesh, Rect};
use crate::quadrature::QuadratureConfig;
use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn disc(n: usize, m: usize, beta: (f64, f64)) -> Discretization {
    let curve = Curve::new(Shape::Circle { center: [0.0, 0.0], radius: 0.50025 }).unwrap();
    let mesh = CartesianMesh::new(Rect::square(-1.0, 1.0), n).unwrap();
    Discretization::new(mesh, curve, beta, m, QuadratureConfig::for_degree(m), Execution::Parallel).unwrap()
}

fn zero_source(_: Point, _: Side) -> f64 {
    0.0
}

/// Random vector vanishing on the boundary unknowns.
fn interior_random(space: &GlobalSpace, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mask = space.is_boundary_mask();
    (0..space.dof_count).map(|i| if mask[i] { 0.0 } else { rng.gen_range(-1.0..1.0) }).collect()
}

#[test]
fn symmetric_scheme_gives_symmetric_matrix() {
    for m in [1, 2] {
        let d = disc(10, m, (1.0, 10.0));
        let space = build_global_space(&d.mesh, &d.classification, m, Scheme::Sdg).unwrap();
        let raw = assemble_raw(&d, &space, &SchemeParams::symmetric(d.beta), &zero_source).unwrap();
        assert!(raw.matrix.asymmetry() <= 1e-12 * raw.matrix.max_abs(), "m={m}: {}", raw.matrix.asymmetry());
        let dg = build_global_space(&d.mesh, &d.classification, m, Scheme::Dg).unwrap();
        let params = SchemeParams::symmetric(d.beta).with_edge_set(Scheme::Dg);
        let raw = assemble_raw(&d, &dg, &params, &zero_source).unwrap();
        assert!(raw.matrix.asymmetry() <= 1e-12 * raw.matrix.max_abs());
        let raw = assemble_raw(&d, &space, &SchemeParams::nonsymmetric(d.beta, m), &zero_source).unwrap();
        assert!(raw.matrix.asymmetry() > 1e-6 * raw.matrix.max_abs());
    }
}

#[test]
fn constants_are_in_the_kernel() {
    // The IFE extension preserves constants for any coefficients, so the
    // constant vector has no gradient and no jumps.
    for (m, beta) in [(1, (1.0, 10.0)), (2, (1.0, 1000.0)), (3, (10.0, 1.0))] {
        let d = disc(10, m, beta);
        for scheme in [Scheme::Sdg, Scheme::Dg] {
            let space = build_global_space(&d.mesh, &d.classification, m, scheme).unwrap();
            let params = SchemeParams::nonsymmetric(beta, m).with_edge_set(scheme);
            let raw = assemble_raw(&d, &space, &params, &zero_source).unwrap();
            let r = raw.matrix.matvec(&vec![1.0; space.dof_count]);
            let worst = r.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            assert!(worst <= 1e-10 * raw.matrix.max_abs(), "m={m} {scheme:?}: {worst}");
        }
    }
}

#[test]
fn continuous_vector_sees_only_the_volume_term() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let m = 2;
    let d = disc(10, m, (1.0, 10.0));
    let space = build_global_space(&d.mesh, &d.classification, m, Scheme::Sdg).unwrap();
    // A CG function vanishing on every element that touches a penalty edge.
    let mut near = vec![false; space.dof_count];
    for &e in &d.classification.shell_elements {
        for &g in space.local_to_global(e) {
            near[g] = true;
        }
    }
    let w: Vec<f64> = (0..space.dof_count).map(|i| if near[i] { 0.0 } else { rng.gen_range(-1.0..1.0) }).collect();
    let vol = volume_matrix(&d, &space).unwrap();
    for epsilon in [-1.0, 0.0, 1.0] {
        let params = SchemeParams::new(epsilon, large_penalty(d.beta), 1.0, Scheme::Sdg).unwrap();
        let raw = assemble_raw(&d, &space, &params, &zero_source).unwrap();
        for _ in 0..5 {
            let v: Vec<f64> = (0..space.dof_count).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for (a, b) in [(raw.matrix.bilinear(&v, &w), vol.bilinear(&v, &w)), (raw.matrix.bilinear(&w, &v), vol.bilinear(&w, &v))] {
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{a} vs {b}");
            }
        }
    }
    // DG edges on a mesh without interface: a CG vector copied into the blocks.
    let far = Curve::new(Shape::Circle { center: [5.0, 5.0], radius: 0.5 }).unwrap();
    let mesh = CartesianMesh::new(Rect::square(-1.0, 1.0), 6).unwrap();
    let d = Discretization::new(mesh, far, (3.0, 3.0), m, QuadratureConfig::for_degree(m), Execution::Sequential).unwrap();
    let cg = build_global_space(&d.mesh, &d.classification, m, Scheme::Sdg).unwrap();
    let dg = build_global_space(&d.mesh, &d.classification, m, Scheme::Dg).unwrap();
    let lift = |x: &[f64]| {
        let mut y = vec![0.0; dg.dof_count];
        for e in 0..d.mesh.element_count() {
            for (a, b) in dg.local_to_global(e).iter().zip(cg.local_to_global(e)) {
                y[*a] = x[*b];
            }
        }
        y
    };
    let (w, v): (Vec<f64>, Vec<f64>) = (0..cg.dof_count).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).unzip();
    let (w, v) = (lift(&w), lift(&v));
    let raw = assemble_raw(&d, &dg, &SchemeParams::symmetric(d.beta).with_edge_set(Scheme::Dg), &zero_source).unwrap();
    let vol = volume_matrix(&d, &dg).unwrap();
    let (a, b) = (raw.matrix.bilinear(&v, &w), vol.bilinear(&v, &w));
    assert!((a - b).abs() <= 1e-10 * b.abs(), "{a} vs {b}");
}

#[test]
fn coercivity_and_continuity_probes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (m, beta) in [(1, (1.0, 10.0)), (1, (1.0, 1000.0)), (2, (1.0, 10.0)), (2, (1.0, 1000.0))] {
        let d = disc(10, m, beta);
        let space = build_global_space(&d.mesh, &d.classification, m, Scheme::Sdg).unwrap();
        let sym = SchemeParams::symmetric(beta);
        let a = assemble_raw(&d, &space, &sym, &zero_source).unwrap().matrix;
        let norm = energy_matrix(&d, &space, &sym).unwrap();
        let nonsym = SchemeParams::nonsymmetric(beta, m);
        let an = assemble_raw(&d, &space, &nonsym, &zero_source).unwrap().matrix;
        let norm_n = energy_matrix(&d, &space, &nonsym).unwrap();
        let bound = 10.0 * beta.1 / beta.0.sqrt();
        for _ in 0..100 {
            let v = interior_random(&space, &mut rng);
            let w = interior_random(&space, &mut rng);
            let nv = energy_norm(&norm, &v);
            assert!(a.bilinear(&v, &v) >= 0.1 * nv * nv, "m={m} beta={beta:?}");
            assert!(an.bilinear(&v, &v) > 0.0);
            let ratio = an.bilinear(&v, &v) / energy_norm(&norm_n, &v).powi(2);
            assert!(ratio > 0.999, "nonsymmetric a(v,v)/|v|^2 = {ratio}");
            if m == 1 {
                let c = a.bilinear(&v, &w).abs() / (nv * energy_norm(&norm, &w));
                assert!(c <= bound, "continuity constant {c}");
            }
        }
    }
}

#[test]
fn energy_norm_is_a_norm_on_the_constrained_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let d = disc(10, 1, (1.0, 10.0));
    let space = build_global_space(&d.mesh, &d.classification, 1, Scheme::Sdg).unwrap();
    let norm = energy_matrix(&d, &space, &SchemeParams::symmetric(d.beta)).unwrap();
    assert_eq!(energy_norm(&norm, &vec![0.0; space.dof_count]), 0.0);
    for _ in 0..10 {
        let v = interior_random(&space, &mut rng);
        let c: f64 = rng.gen_range(-5.0..5.0);
        let cv: Vec<f64> = v.iter().map(|x| c * x).collect();
        let (a, b) = (energy_norm(&norm, &cv), c.abs() * energy_norm(&norm, &v));
        assert!((a - b).abs() <= 1e-12 * b);
    }
    let mask = space.is_boundary_mask();
    let interior: Vec<usize> = (0..space.dof_count).filter(|&i| !mask[i]).collect();
    let mut pos = vec![usize::MAX; space.dof_count];
    for (k, &i) in interior.iter().enumerate() {
        pos[i] = k;
    }
    let mut dense = Mat::<f64>::zeros(interior.len(), interior.len());
    for &(r, c, v) in &norm.entries {
        if !mask[r] && !mask[c] {
            dense[(pos[r], pos[c])] += v;
        }
    }
    assert!(dense.llt(faer::Side::Lower).is_ok());
}

#[test]
fn trace_constants_are_moderate() {
    for (m, beta) in [(1, (1.0, 10.0)), (2, (1.0, 1000.0))] {
        let d = disc(20, m, beta);
        let c = trace_constants(&d).unwrap();
        assert_eq!(c.len(), d.classification.interface_elements.len());
        let worst = c.iter().map(|x| x.1).fold(0.0, f64::max);
        assert!(worst > 0.0 && worst <= TRACE_CONSTANT_LIMIT, "m={m}: {worst}");
    }
}

#[test]
fn dirichlet_rows_are_identity() {
    let d = disc(6, 1, (1.0, 10.0));
    let space = build_global_space(&d.mesh, &d.classification, 1, Scheme::Sdg).unwrap();
    let sys = assemble(&d, &space, &SchemeParams::symmetric(d.beta), &|_, _| 1.0, &|p: Point| p[0] + 2.0).unwrap();
    for (&b, &p) in space.boundary_dofs.iter().zip(&space.boundary_points) {
        assert_eq!(sys.rhs[b], p[0] + 2.0);
        assert_eq!(sys.matrix.get(b, b), 1.0);
        assert!(sys.matrix.entries.iter().all(|&(r, c, _)| (r != b && c != b) || (r == b && c == b)));
    }
    assert!(sys.matrix.asymmetry() <= 1e-12 * sys.matrix.max_abs());
}

#[test]
fn parallel_and_sequential_assembly_agree_bitwise() {
    let d = disc(10, 2, (1.0, 10.0));
    let space = build_global_space(&d.mesh, &d.classification, 2, Scheme::Sdg).unwrap();
    let f = |p: Point, _: Side| p[0] * p[1];
    let a = assemble_raw(&d, &space, &SchemeParams::symmetric(d.beta), &f).unwrap();
    let d = d.with_execution(Execution::Sequential);
    let b = assemble_raw(&d, &space, &SchemeParams::symmetric(d.beta), &f).unwrap();
    assert_eq!(a.matrix, b.matrix);
    assert_eq!(a.rhs, b.rhs);
}

#[test]
fn parameters_are_validated() {
    assert!(SchemeParams::new(-1.0, 4.0, 0.5, Scheme::Sdg).is_err());
    assert!(SchemeParams::new(-1.0, 0.0, 1.0, Scheme::Sdg).is_err());
    assert!(SchemeParams::new(0.5, 1.0, 1.0, Scheme::Sdg).is_err());
    assert_eq!(SchemeParams::nonsymmetric((1.0, 10.0), 2).alpha, 3.0);
    assert_eq!(SchemeParams::nonsymmetric((1.0, 10.0), 1).alpha, 1.0);
    assert_eq!(SchemeParams::symmetric((1.0, 10.0)).sigma0, 40.0);
}
