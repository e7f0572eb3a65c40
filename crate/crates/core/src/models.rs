//! Parametric test solids and random polyhedron families.
//!
//! Every generator returns a closed, outward-wound polyhedron together with
//! its outward face normals.

use std::f64::consts::PI;

use rand::Rng;

use crate::geometry::{box_polyhedron, Face, Point3, Polyhedron};
use crate::hull::convex_hull;
use crate::kernel::polyhedron_plane_intersection;
use crate::mesh_io::compute_outward_normals;
use crate::predicates::classify_points;
use crate::Plane;

pub type Model = (Polyhedron, Vec<Point3>);

fn with_normals(mut poly: Polyhedron) -> Model {
    let normals = compute_outward_normals(&mut poly).expect("generated solid is closed");
    (poly, normals)
}

pub fn unit_cube() -> Model {
    with_normals(box_polyhedron(Point3::ORIGIN, Point3::new(1.0, 1.0, 1.0)))
}

pub fn cuboid(lo: Point3, hi: Point3) -> Model {
    with_normals(box_polyhedron(lo, hi))
}

/// Tetrahedron `(0,0,0), (1,0,0), (0,1,0), (0,0,1)`.
pub fn unit_tetrahedron() -> Model {
    tetrahedron([
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(0.0, 0.0, 1.0),
    ])
}

pub fn tetrahedron(p: [Point3; 4]) -> Model {
    let faces = [[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]]
        .into_iter()
        .map(|f| Face::from_indices(f.to_vec()))
        .collect();
    with_normals(Polyhedron {
        verts: p.to_vec(),
        faces,
    })
}

/// Extrusion of a simple counter-clockwise polygon in the xy-plane over
/// `z ∈ [z0, z1]`.
pub fn prism(polygon: &[(f64, f64)], z0: f64, z1: f64) -> Model {
    let n = polygon.len();
    let mut verts: Vec<Point3> = polygon.iter().map(|&(x, y)| Point3::new(x, y, z0)).collect();
    verts.extend(polygon.iter().map(|&(x, y)| Point3::new(x, y, z1)));
    let mut faces = vec![
        Face::from_indices((0..n).rev().collect()),
        Face::from_indices((n..2 * n).collect()),
    ];
    for i in 0..n {
        let j = (i + 1) % n;
        faces.push(Face::from_indices(vec![i, j, n + j, n + i]));
    }
    with_normals(Polyhedron { verts, faces })
}

/// L-shaped prism: the polygon `(0,0) (2,0) (2,1) (1,1) (1,2) (0,2)`
/// extruded over `z ∈ [0, 1]`. Its kernel is the unit cube.
pub fn l_prism() -> Model {
    l_prism_scaled(2.0, 2.0, 1.0, 1.0, 1.0)
}

/// L-prism with outer extents `a × b`, arm widths `u × v` and height `h`.
pub fn l_prism_scaled(a: f64, b: f64, u: f64, v: f64, h: f64) -> Model {
    prism(&[(0.0, 0.0), (a, 0.0), (a, v), (u, v), (u, b), (0.0, b)], 0.0, h)
}

/// Tent cross-section parameters.
pub const TENT_HEIGHT: f64 = 2.0;
pub const TENT_ENTRANCE_HALF_BASE: f64 = 0.5;
pub const TENT_ENTRANCE_HALF_TOP: f64 = 0.25;

/// Largest entrance height for which the tent is still a simple polyhedron.
pub fn tent_max_entrance() -> f64 {
    TENT_HEIGHT * (1.0 - TENT_ENTRANCE_HALF_TOP)
}

/// A tent: triangular roof over `x ∈ [-1, 1]` with apex height 2, with a
/// trapezoidal entrance tunnel of height `entrance` (base half-width 0.5,
/// top half-width 0.25) running through it, extruded over `z ∈ [0, 1]`.
/// The kernel shrinks as the entrance grows.
///
/// # Panics
/// If `entrance` is not in `(0, tent_max_entrance())`.
pub fn tent(entrance: f64) -> Model {
    assert!(
        entrance > 0.0 && entrance < tent_max_entrance(),
        "entrance height {entrance} out of range"
    );
    let (w, t) = (TENT_ENTRANCE_HALF_BASE, TENT_ENTRANCE_HALF_TOP);
    prism(
        &[
            (-1.0, 0.0),
            (-w, 0.0),
            (-t, entrance),
            (t, entrance),
            (w, 0.0),
            (1.0, 0.0),
            (0.0, TENT_HEIGHT),
        ],
        0.0,
        1.0,
    )
}

/// Closed-form kernel volume of [`tent`]: the cross-section kernel lies
/// between `y = e (w + |x|) / (w - t)` and the roof `y = H (1 - |x|)`.
pub fn tent_kernel_volume(entrance: f64) -> f64 {
    let (w, t, h) = (TENT_ENTRANCE_HALF_BASE, TENT_ENTRANCE_HALF_TOP, TENT_HEIGHT);
    let slope = entrance / (w - t);
    let floor0 = slope * w;
    if floor0 >= h {
        return 0.0;
    }
    // Half-width where floor and roof meet, then twice a trapezoid.
    let x_max = (h - floor0) / (slope + h);
    let gap0 = h - floor0;
    2.0 * 0.5 * gap0 * x_max
}

/// Entrance height at which the tent kernel degenerates to a segment.
pub fn tent_threshold() -> f64 {
    TENT_HEIGHT * (1.0 - TENT_ENTRANCE_HALF_TOP / TENT_ENTRANCE_HALF_BASE)
}

/// Torus-like ring: a square cross-section of side 1 swept around a
/// regular `path_segments`-gon of radius 2. Each cross-section side is
/// split into `section_subdiv` strips, giving
/// `4 * path_segments * section_subdiv` planar quads.
pub fn ring(path_segments: usize, section_subdiv: usize) -> Model {
    assert!(path_segments >= 3 && section_subdiv >= 1);
    let radius = 2.0;
    let half = 0.5;
    // Cross-section loop in (radial, z), counter-clockwise seen along the
    // path direction.
    let m = section_subdiv;
    let mut section = Vec::with_capacity(4 * m);
    let corners = [(-half, -half), (half, -half), (half, half), (-half, half)];
    for c in 0..4 {
        let (a, b) = (corners[c], corners[(c + 1) % 4]);
        for s in 0..m {
            let t = s as f64 / m as f64;
            section.push((a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t));
        }
    }
    let k = section.len();
    let mut verts = Vec::with_capacity(path_segments * k);
    for j in 0..path_segments {
        let theta = 2.0 * PI * j as f64 / path_segments as f64;
        let (s, c) = theta.sin_cos();
        for &(r, z) in &section {
            let rho = radius + r;
            verts.push(Point3::new(rho * c, rho * s, z));
        }
    }
    let mut faces = Vec::with_capacity(path_segments * k);
    for j in 0..path_segments {
        let jn = (j + 1) % path_segments;
        for i in 0..k {
            let i_n = (i + 1) % k;
            faces.push(Face::from_indices(vec![
                j * k + i,
                jn * k + i,
                jn * k + i_n,
                j * k + i_n,
            ]));
        }
    }
    with_normals(Polyhedron { verts, faces })
}

/// Bipyramid over a five-pointed star (outer radius 1, inner radius
/// `inner`), apexes at `z = ±1`: 20 triangles, non-convex, star-shaped.
pub fn star_bipyramid(inner: f64) -> Model {
    let n = 10;
    let mut verts: Vec<Point3> = (0..n)
        .map(|i| {
            let r = if i % 2 == 0 { 1.0 } else { inner };
            let a = 2.0 * PI * i as f64 / n as f64;
            Point3::new(r * a.cos(), r * a.sin(), 0.0)
        })
        .collect();
    verts.push(Point3::new(0.0, 0.0, 1.0));
    verts.push(Point3::new(0.0, 0.0, -1.0));
    let (top, bottom) = (n, n + 1);
    let mut faces = Vec::with_capacity(2 * n);
    for i in 0..n {
        let j = (i + 1) % n;
        faces.push(Face::from_indices(vec![i, j, top]));
        faces.push(Face::from_indices(vec![j, i, bottom]));
    }
    with_normals(Polyhedron { verts, faces })
}

/// Splits every face into triangles fanned around its vertex barycenter.
/// Children inherit the parent's normal, so the face planes are unchanged.
/// Only meaningful when every face is star-shaped around its barycenter,
/// for instance convex faces.
pub fn midpoint_refine(model: &Model) -> Model {
    let (poly, normals) = model;
    let mut verts = poly.verts.clone();
    let mut faces = Vec::new();
    let mut out_normals = Vec::new();
    for (f, &n) in poly.faces.iter().zip(normals) {
        let pts = poly.face_points(f);
        let c = pts.iter().fold(Point3::ORIGIN, |a, &p| a + p) / pts.len() as f64;
        let ci = verts.len();
        verts.push(c);
        for (a, b) in f.edges() {
            faces.push(Face::from_indices(vec![a, b, ci]));
            out_normals.push(n);
        }
    }
    (Polyhedron { verts, faces }, out_normals)
}

fn random_point<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Point3 {
    Point3::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

/// Convex hull of `n` uniform points in `[-1, 1]^3`.
pub fn random_convex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Model {
    loop {
        let pts: Vec<Point3> = (0..n).map(|_| random_point(rng, 1.0)).collect();
        if let Ok(h) = convex_hull(&pts) {
            return with_normals(h);
        }
    }
}

pub fn random_tetrahedron<R: Rng + ?Sized>(rng: &mut R) -> Model {
    loop {
        let p = [0; 4].map(|_| random_point(rng, 1.0));
        let vol = (p[1] - p[0]).cross(p[2] - p[0]).dot(p[3] - p[0]) / 6.0;
        if vol.abs() > 1e-2 {
            return tetrahedron(p);
        }
    }
}

/// Union of two tetrahedra glued on a common triangle: apexes on opposite
/// sides of the shared face. Often non-convex.
pub fn random_bipyramid<R: Rng + ?Sized>(rng: &mut R) -> Model {
    loop {
        let base = [0; 3].map(|_| {
            Point3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-0.2..0.2))
        });
        let normal = (base[1] - base[0]).cross(base[2] - base[0]);
        if normal.norm() < 0.2 {
            continue;
        }
        let n = normal / normal.norm();
        let up = random_point(rng, 1.0) + n * rng.gen_range(0.3..1.0);
        let down = random_point(rng, 1.0) - n * rng.gen_range(0.3..1.0);
        let h_up = (up - base[0]).dot(n);
        let h_down = (down - base[0]).dot(n);
        if h_up < 0.2 || h_down > -0.2 {
            continue;
        }
        let verts = vec![base[0], base[1], base[2], up, down];
        // base is CCW seen from `up`; the lower pyramid takes reversed winding.
        let faces = [[0, 1, 3], [1, 2, 3], [2, 0, 3], [1, 0, 4], [2, 1, 4], [0, 2, 4]]
            .into_iter()
            .map(|f| Face::from_indices(f.to_vec()))
            .collect();
        return with_normals(Polyhedron { verts, faces });
    }
}

/// Random box with one random corner-region sliced off.
pub fn random_clipped_box<R: Rng + ?Sized>(rng: &mut R) -> Model {
    loop {
        let lo = random_point(rng, 1.0);
        let ext = Point3::new(rng.gen_range(0.3..2.0), rng.gen_range(0.3..2.0), rng.gen_range(0.3..2.0));
        let b = box_polyhedron(lo, lo + ext);
        let centre = lo + ext * 0.5;
        let dir = random_point(rng, 1.0);
        if dir.norm() < 0.1 {
            continue;
        }
        let through = centre + Point3::new(ext.x * dir.x, ext.y * dir.y, ext.z * dir.z) * 0.4;
        let Ok(plane) = Plane::through_point(through, -dir) else { continue };
        let signs = classify_points(&plane, &b.verts, 1e-8);
        let cut = polyhedron_plane_intersection(&b, &signs, &plane);
        if cut.is_closed() && cut.fan_volume() > 0.05 * ext.x * ext.y * ext.z {
            return with_normals(cut);
        }
    }
}

pub fn random_tent<R: Rng + ?Sized>(rng: &mut R) -> Model {
    tent(rng.gen_range(0.05..tent_max_entrance() - 0.05))
}

pub fn random_l_prism<R: Rng + ?Sized>(rng: &mut R) -> Model {
    let a = rng.gen_range(1.0..3.0);
    let b = rng.gen_range(1.0..3.0);
    let u = rng.gen_range(0.2..0.9) * a;
    let v = rng.gen_range(0.2..0.9) * b;
    l_prism_scaled(a, b, u, v, rng.gen_range(0.3..2.0))
}

/// Prism over a random star polygon with `points` tips (`2 * points`
/// polygon vertices). Sharp stars have an empty kernel.
pub fn random_star_prism<R: Rng + ?Sized>(rng: &mut R, points: usize) -> Model {
    let n = 2 * points;
    let phase = rng.gen_range(0.0..2.0 * PI);
    let polygon: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let r = if i % 2 == 0 {
                rng.gen_range(0.8..1.2)
            } else {
                rng.gen_range(0.15..0.8)
            };
            let a = phase + 2.0 * PI * i as f64 / n as f64;
            (r * a.cos(), r * a.sin())
        })
        .collect();
    prism(&polygon, 0.0, rng.gen_range(0.2..1.5))
}

/// One member of the mixed small-polyhedron family (at most 12 faces),
/// chosen by `kind % 7`.
pub fn random_small<R: Rng + ?Sized>(rng: &mut R, kind: usize) -> Model {
    match kind % 7 {
        0 => random_tetrahedron(rng),
        1 => random_bipyramid(rng),
        2 => random_clipped_box(rng),
        3 => random_tent(rng),
        4 => random_l_prism(rng),
        5 => random_star_prism(rng, 5),
        _ => random_convex(rng, 7),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::signed_volume;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixed_models_are_closed_and_outward() {
        for (name, (p, n)) in [
            ("cube", unit_cube()),
            ("tetra", unit_tetrahedron()),
            ("l", l_prism()),
            ("tent", tent(0.5)),
            ("ring", ring(8, 1)),
            ("star", star_bipyramid(0.6)),
        ] {
            p.check_closed().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(signed_volume(&p).unwrap() > 0.0, "{name}");
            assert_eq!(n.len(), p.faces.len(), "{name}");
        }
    }

    #[test]
    fn reference_volumes() {
        assert_abs_diff_eq!(signed_volume(&l_prism().0).unwrap(), 3.0, epsilon = 1e-12);
        // Tent: roof triangle (area 2) minus trapezoid entrance.
        let e = 0.5;
        let area = 2.0 - e * (0.5 + 0.25);
        assert_abs_diff_eq!(signed_volume(&tent(e).0).unwrap(), area, epsilon = 1e-12);
        let (r, _) = ring(8, 1);
        assert_eq!(r.faces.len(), 32);
        assert_eq!(ring(200, 13).0.faces.len(), 10_400);
        assert_eq!(star_bipyramid(0.6).0.faces.len(), 20);
    }

    #[test]
    fn tent_kernel_closed_form() {
        // At e = 0 the floor is y >= 0, kernel = whole roof triangle.
        assert_abs_diff_eq!(tent_kernel_volume(0.0), 2.0, epsilon = 1e-12);
        assert_eq!(tent_threshold(), 1.0);
        assert_eq!(tent_kernel_volume(1.0), 0.0);
        assert!(tent_kernel_volume(0.9) > 0.0);
    }

    #[test]
    fn refinement_triples_triangles_and_keeps_volume() {
        let m = star_bipyramid(0.6);
        let r = midpoint_refine(&m);
        assert_eq!(r.0.faces.len(), 60);
        r.0.check_closed().unwrap();
        assert_abs_diff_eq!(
            signed_volume(&r.0).unwrap(),
            signed_volume(&m.0).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn random_families_are_valid_and_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in 0..70 {
            let (p, n) = random_small(&mut rng, kind);
            p.check_closed().unwrap();
            assert!(p.faces.len() <= 12, "kind {kind}: {} faces", p.faces.len());
            assert!(signed_volume(&p).unwrap() > 0.0);
            assert_eq!(n.len(), p.faces.len());
        }
    }
}
