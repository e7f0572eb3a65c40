use polykernel::oracle::{brute_force_kernel, hausdorff, inside_convex, kernel_membership, monte_carlo_volume, winding_number};
use polykernel::{
    classify_point, face_normal_newell, models, polyhedron_kernel, polyhedron_kernel_traced,
    signed_volume, KernelOptions, KernelResult, KernelStatus, Plane, Point3, Polyhedron, Sign,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kernel(model: &models::Model, opts: &KernelOptions) -> KernelResult {
    polyhedron_kernel(&model.0, &model.1, opts).unwrap()
}

fn star_models() -> Vec<(String, models::Model)> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut out = vec![
        ("cube".to_string(), models::unit_cube()),
        ("l_prism".into(), models::l_prism()),
        ("tent_0.3".into(), models::tent(0.3)),
        ("tent_0.8".into(), models::tent(0.8)),
        ("star".into(), models::star_bipyramid(0.6)),
    ];
    for i in 0..5 {
        out.push((format!("convex_{i}"), models::random_convex(&mut rng, 12 + 4 * i)));
    }
    out
}

/// Kernel vertices are on the inner side of every input face plane.
fn assert_half_space_containment(model: &models::Model, k: &Polyhedron) {
    let (p, n) = model;
    for (f, &nf) in p.faces.iter().zip(n) {
        let plane = Plane::from_face(p, f, nf).unwrap();
        for &v in &k.verts {
            assert_ne!(classify_point(&plane, v, 1e-8), Sign::Below, "vertex {v} below a face plane");
        }
    }
}

/// Every kernel vertex lies on or behind every kernel face.
fn assert_convex(k: &Polyhedron) {
    for f in &k.faces {
        let pts = k.face_points(f);
        let outward = face_normal_newell(&pts).unwrap();
        let plane = Plane::from_face(k, f, outward).unwrap();
        for &v in &k.verts {
            // plane normal points inward
            assert_ne!(classify_point(&plane, v, 1e-8), Sign::Below);
        }
    }
}

fn assert_distinct_vertices(k: &Polyhedron) {
    for (i, a) in k.verts.iter().enumerate() {
        for b in &k.verts[i + 1..] {
            assert!(a.distance(*b) > 1e-10, "duplicate vertex {a}");
        }
    }
}

#[test]
fn l_prism_kernel_is_unit_cube() {
    let r = kernel(&models::l_prism(), &KernelOptions::default());
    assert_eq!(r.status, KernelStatus::NonEmpty);
    assert!((r.volume - 1.0).abs() < 1e-9);
    let k = r.kernel.unwrap();
    assert_eq!(hausdorff(&k.verts, &models::unit_cube().0.verts), 0.0);
}

#[test]
fn ring_kernel_is_empty() {
    let model = models::ring(8, 1);
    assert_eq!(model.0.faces.len(), 32);
    for opts in [KernelOptions::default(), KernelOptions::shuffled(0)] {
        let r = kernel(&model, &opts);
        assert_eq!(r.status, KernelStatus::Empty);
        assert!(r.kernel.is_none() && !r.star_shaped && r.volume == 0.0);
    }
}

#[test]
fn tent_kernel_matches_closed_form() {
    for e in [0.1, 0.4, 0.7, 0.95] {
        let r = kernel(&models::tent(e), &KernelOptions::default());
        let expected = models::tent_kernel_volume(e);
        assert!((r.volume - expected).abs() <= 1e-9 * expected, "e={e}: {} vs {expected}", r.volume);
    }
    assert!(kernel(&models::tent(1.2), &KernelOptions::default()).is_empty());
}

#[test]
fn kernel_invariants_on_star_shaped_models() {
    for (name, model) in star_models() {
        let r = kernel(&model, &KernelOptions::default());
        assert_eq!(r.status, KernelStatus::NonEmpty, "{name}");
        let k = r.kernel.as_ref().unwrap();
        assert!(k.verts.len() >= 4 && k.faces.len() >= 4, "{name}");
        k.check_closed().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!((signed_volume(k).unwrap() - r.volume).abs() < 1e-12, "{name}");
        assert_half_space_containment(&model, k);
        assert_convex(k);
        assert_distinct_vertices(k);
    }
}

#[test]
fn kernel_is_idempotent() {
    for (name, model) in star_models() {
        let first = kernel(&model, &KernelOptions::default()).kernel.unwrap();
        let mut k = first.clone();
        let normals = polykernel::compute_outward_normals(&mut k).unwrap();
        let again = polyhedron_kernel(&k, &normals, &KernelOptions::default()).unwrap();
        let v0 = signed_volume(&first).unwrap();
        assert!((again.volume - v0).abs() <= 1e-9 * v0, "{name}");
    }
}

#[test]
fn volume_never_grows_between_cuts() {
    for (name, model) in star_models() {
        let mut volumes = vec![];
        polyhedron_kernel_traced(&model.0, &model.1, &KernelOptions::shuffled(5), |_, k| {
            volumes.push(signed_volume(k).unwrap());
        })
        .unwrap();
        for w in volumes.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12), "{name}: {} -> {}", w[0], w[1]);
        }
    }
}

#[test]
fn shuffle_does_not_change_the_kernel() {
    for (name, model) in star_models() {
        let base = kernel(&model, &KernelOptions::default());
        for seed in 1..6 {
            let r = kernel(&model, &KernelOptions::shuffled(seed));
            assert_eq!(r.status, base.status);
            assert!((r.volume - base.volume).abs() <= 1e-9 * base.volume, "{name} seed {seed}");
            let h = hausdorff(&r.kernel.unwrap().verts, &base.kernel.as_ref().unwrap().verts);
            assert!(h <= 1e-9, "{name} seed {seed}: hausdorff {h}");
        }
    }
}

#[test]
fn refinement_leaves_kernel_unchanged() {
    let mut model = models::star_bipyramid(0.6);
    let reference = kernel(&model, &KernelOptions::default()).kernel.unwrap();
    for _ in 0..3 {
        model = models::midpoint_refine(&model);
        let k = kernel(&model, &KernelOptions::default()).kernel.unwrap();
        assert!(hausdorff(&k.verts, &reference.verts) <= 1e-9);
    }
}

#[test]
fn kernel_vertices_pass_membership_and_outside_points_fail() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for (name, model) in [("l", models::l_prism()), ("tent", models::tent(0.6)), ("star", models::star_bipyramid(0.5))] {
        let (p, n) = &model;
        let k = kernel(&model, &KernelOptions::default()).kernel.unwrap();
        for &v in &k.verts {
            assert!(kernel_membership(p, n, v, 1e-7).unwrap(), "{name}: {v}");
        }
        let (lo, hi) = polykernel::geometry::bounds(&p.verts).unwrap();
        let mut tested = 0;
        while tested < 200 {
            let q = Point3::new(
                rng.gen_range(lo.x..hi.x),
                rng.gen_range(lo.y..hi.y),
                rng.gen_range(lo.z..hi.z),
            );
            let in_p = winding_number(p, q) > 0.5;
            // Points clearly outside the kernel (not within 1e-6 of it).
            let near_kernel = !inside_convex(&k, q, -1e-6);
            if in_p && near_kernel {
                assert!(!kernel_membership(p, n, q, 1e-7).unwrap(), "{name}: {q}");
                tested += 1;
            }
        }
    }
}

#[test]
fn monte_carlo_agrees_with_kernel_volume() {
    for model in [models::l_prism(), models::tent(0.5)] {
        let (p, n) = &model;
        let r = kernel(&model, &KernelOptions::default());
        let bbox = polykernel::aabb(p).unwrap();
        let est = monte_carlo_volume(|q| kernel_membership(p, n, q, 1e-8).unwrap(), &bbox, 200_000, 1).unwrap();
        assert!(
            (est.volume - r.volume).abs() <= 3.0 * est.std_error,
            "{} vs {} ± {}",
            est.volume,
            r.volume,
            est.std_error
        );
    }
}

#[test]
fn oracle_agrees_on_random_small_polyhedra() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut empty = 0;
    for i in 0..70 {
        let model = models::random_small(&mut rng, i);
        let r = kernel(&model, &KernelOptions::default());
        let o = brute_force_kernel(&model.0, &model.1).unwrap();
        match (&r.kernel, &o) {
            (None, None) => empty += 1,
            (Some(k), Some(ok)) => {
                let h = hausdorff(&k.verts, &ok.vertices);
                assert!(h <= 1e-7, "case {i}: hausdorff {h}");
                assert!((r.volume - ok.volume).abs() <= 1e-6 * ok.volume, "case {i}");
            }
            _ => panic!("case {i}: kernel {:?} vs oracle {}", r.status, o.is_some()),
        }
    }
    assert!(empty > 0, "family should contain empty kernels");
}

#[test]
fn snapping_face_vertices_gives_same_kernel() {
    let opts = KernelOptions {
        snap_face_vertices: true,
        ..Default::default()
    };
    for (name, model) in star_models() {
        let a = kernel(&model, &KernelOptions::default());
        let b = kernel(&model, &opts);
        assert!((a.volume - b.volume).abs() <= 1e-9 * a.volume, "{name}");
    }
}
