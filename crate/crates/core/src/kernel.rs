//! Kernel computation by successive convex clipping.
//!
//! The candidate kernel starts as the bounding box of the input and is cut
//! by the inner half-space of every face plane in turn. Each cut is a
//! polyhedron/plane intersection that clips every face of the (convex)
//! candidate against the plane and closes the result with a cap face.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{aabb, face_normal_newell, Face, Plane, Point3, Polyhedron, Sign};
use crate::predicates::{classify_edge, classify_face, classify_points, DEFAULT_TOLERANCE};

/// Relative volume below which a kernel counts as flat, hence empty.
pub const EMPTY_VOLUME_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    /// Visit faces in a seeded random order.
    pub shuffle: bool,
    pub seed: u64,
    /// Hessian-distance tolerance for INTER snapping.
    pub tolerance: f64,
    /// Mark kernel vertices that coincide exactly with a vertex of the
    /// current face as INTER without evaluating the predicate.
    pub snap_face_vertices: bool,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions {
            shuffle: false,
            seed: 0,
            tolerance: DEFAULT_TOLERANCE,
            snap_face_vertices: false,
        }
    }
}

impl KernelOptions {
    pub fn shuffled(seed: u64) -> Self {
        KernelOptions {
            shuffle: true,
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelStatus {
    NonEmpty,
    Empty,
}

impl KernelStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelStatus::NonEmpty => "NON_EMPTY",
            KernelStatus::Empty => "EMPTY",
        }
    }
}

impl std::fmt::Display for KernelStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelResult {
    pub status: KernelStatus,
    /// Present iff `status` is `NonEmpty`.
    pub kernel: Option<Polyhedron>,
    /// Number of face planes processed before returning.
    pub iterations: usize,
    pub volume: f64,
    pub star_shaped: bool,
}

impl KernelResult {
    fn empty(iterations: usize) -> Self {
        KernelResult {
            status: KernelStatus::Empty,
            kernel: None,
            iterations,
            volume: 0.0,
            star_shaped: false,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.status == KernelStatus::Empty
    }
}

/// Order in which the faces are visited: identity, or a seeded shuffle.
pub fn face_order(n_faces: usize, opts: &KernelOptions) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n_faces).collect();
    if opts.shuffle {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        order.shuffle(&mut rng);
    }
    order
}

/// Kernel of a closed polyhedron with the given outward face normals.
pub fn polyhedron_kernel(
    poly: &Polyhedron,
    normals: &[Point3],
    opts: &KernelOptions,
) -> Result<KernelResult> {
    polyhedron_kernel_traced(poly, normals, opts, |_, _| {})
}

/// Same as [`polyhedron_kernel`], calling `on_step(face_id, &candidate)`
/// after every cut.
pub fn polyhedron_kernel_traced<F>(
    poly: &Polyhedron,
    normals: &[Point3],
    opts: &KernelOptions,
    mut on_step: F,
) -> Result<KernelResult>
where
    F: FnMut(usize, &Polyhedron),
{
    if normals.len() != poly.faces.len() {
        return Err(Error::InputMismatch {
            expected: poly.faces.len(),
            actual: normals.len(),
        });
    }
    let mut kernel = aabb(poly)?;
    let box_volume = kernel.fan_volume();

    let order = face_order(poly.faces.len(), opts);
    for (step, &fi) in order.iter().enumerate() {
        let face = &poly.faces[fi];
        let plane = Plane::from_face_indexed(poly, face, normals[fi], fi)?;
        let mut signs = classify_points(&plane, &kernel.verts, opts.tolerance);
        if opts.snap_face_vertices {
            let face_pts = poly.face_points(face);
            for (s, v) in signs.iter_mut().zip(&kernel.verts) {
                if face_pts.contains(v) {
                    *s = Sign::Inter;
                }
            }
        }
        if signs.contains(&Sign::Below) {
            kernel = polyhedron_plane_intersection(&kernel, &signs, &plane);
        }
        on_step(fi, &kernel);
        if kernel.faces.len() < 3 {
            return Ok(KernelResult::empty(step + 1));
        }
    }

    let volume = kernel.fan_volume();
    if kernel.faces.len() < 4 || kernel.verts.len() < 4 || volume <= EMPTY_VOLUME_RATIO * box_volume
    {
        return Ok(KernelResult::empty(order.len()));
    }
    Ok(KernelResult {
        status: KernelStatus::NonEmpty,
        kernel: Some(kernel),
        iterations: order.len(),
        volume,
        star_shaped: true,
    })
}

/// Part of the convex polyhedron `poly` on the normal side of `plane`.
///
/// `signs` classifies `poly.verts`. Faces entirely below are dropped, faces
/// with no vertex below are copied, and crossing faces are clipped. Cut
/// points are shared between the two faces adjacent to the cut edge. When
/// at least three vertices of the result lie on the plane they are closed
/// off with a cap face, unless an identical face is already present.
pub fn polyhedron_plane_intersection(poly: &Polyhedron, signs: &[Sign], plane: &Plane) -> Polyhedron {
    debug_assert_eq!(signs.len(), poly.verts.len());
    let mut out = Polyhedron::empty();
    let mut on_plane: Vec<usize> = Vec::new();
    let mut remap = vec![usize::MAX; poly.verts.len()];
    let mut cuts: HashMap<(usize, usize), usize> = HashMap::new();

    let mut keep = |old: usize, out: &mut Polyhedron, on_plane: &mut Vec<usize>| -> usize {
        if remap[old] == usize::MAX {
            remap[old] = out.verts.len();
            if signs[old] == Sign::Inter {
                on_plane.push(out.verts.len());
            }
            out.verts.push(poly.verts[old]);
        }
        remap[old]
    };

    let mut face_signs = Vec::new();
    for face in &poly.faces {
        face_signs.clear();
        face_signs.extend(face.indices().iter().map(|&i| signs[i]));
        let ids: Vec<usize> = match classify_face(&face_signs) {
            Sign::Below => continue,
            Sign::Above => face
                .indices()
                .iter()
                .map(|&i| keep(i, &mut out, &mut on_plane))
                .collect(),
            Sign::Inter => {
                // Faces touching the plane only at vertices or along an edge
                // have nothing above it.
                if !face_signs.contains(&Sign::Above) {
                    continue;
                }
                clip_face(&poly.verts, face.indices(), signs, plane)
                    .into_iter()
                    .map(|c| match c {
                        Corner::Old(i) => keep(i, &mut out, &mut on_plane),
                        Corner::Cut(a, b, p) => *cuts.entry((a, b)).or_insert_with(|| {
                            on_plane.push(out.verts.len());
                            out.verts.push(p);
                            out.verts.len() - 1
                        }),
                    })
                    .collect()
            }
        };
        if ids.len() >= 3 {
            out.faces.push(Face::from_indices(ids));
        }
    }

    if on_plane.len() >= 3 {
        let pts: Vec<Point3> = on_plane.iter().map(|&i| out.verts[i]).collect();
        if let Ok(order) = sort_cap_ccw(&pts, plane) {
            let cap = Face::from_indices(order.indices().iter().map(|&k| on_plane[k]).collect());
            if !out.faces.iter().any(|f| f.same_cycle(&cap)) {
                out.faces.push(cap);
            }
        }
    }
    out
}

/// Vertex of a clipped polygon: either an original vertex or the crossing
/// point on edge `(a, b)` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Corner {
    Old(usize),
    Cut(usize, usize, Point3),
}

/// Edge walk over one crossing face. Only the second endpoint of each edge
/// (or the crossing point) is ever emitted, so no vertex appears twice.
fn clip_face(verts: &[Point3], face: &[usize], signs: &[Sign], plane: &Plane) -> Vec<Corner> {
    let n = face.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let (id1, id2) = (face[i], face[(i + 1) % n]);
        let (s1, s2) = (signs[id1], signs[id2]);
        match classify_edge(s1, s2) {
            Sign::Below => {
                if s2 == Sign::Inter {
                    out.push(Corner::Old(id2));
                }
            }
            Sign::Above => out.push(Corner::Old(id2)),
            Sign::Inter => {
                let (a, b) = (id1.min(id2), id1.max(id2));
                out.push(Corner::Cut(a, b, crossing_point(verts[a], verts[b], plane)));
                if s1 == Sign::Below {
                    out.push(Corner::Old(id2));
                }
            }
        }
    }
    out
}

/// Crossing point of a segment whose endpoints are strictly on opposite
/// sides. The parameter is clamped to the segment so that a warped input
/// face cannot push the point outside it.
fn crossing_point(v1: Point3, v2: Point3, plane: &Plane) -> Point3 {
    let dir = v2 - v1;
    let num = plane.normal().dot(v1 - plane.witnesses()[0]);
    let den = plane.normal().dot(dir);
    if den == 0.0 {
        return v1 + dir * 0.5;
    }
    v1 + dir * (-num / den).clamp(0.0, 1.0)
}

/// Part of a convex polygon on the normal side of `plane`.
///
/// `poly_v` and `poly_s` are indexed by vertex id; `poly_f` lists the ids of
/// the polygon. Returns the points of the clipped polygon together with
/// their ids; crossing points get fresh ids above `max(poly_f)`, in order of
/// creation.
pub fn polygon_plane_intersection(
    poly_v: &[Point3],
    poly_f: &Face,
    poly_s: &[Sign],
    plane: &Plane,
) -> Result<(Vec<Point3>, Face)> {
    let face = poly_f.indices();
    let has = |s: Sign| face.iter().any(|&i| poly_s[i] == s);
    if !has(Sign::Above) || !has(Sign::Below) {
        return Err(Error::NoProperIntersection);
    }
    let mut next_id = face.iter().copied().max().unwrap_or(0) + 1;
    let mut pts = Vec::new();
    let mut ids = Vec::new();
    for c in clip_face(poly_v, face, poly_s, plane) {
        match c {
            Corner::Old(i) => {
                pts.push(poly_v[i]);
                ids.push(i);
            }
            Corner::Cut(_, _, p) => {
                pts.push(p);
                ids.push(next_id);
                next_id += 1;
            }
        }
    }
    Ok((pts, Face::from_indices(ids)))
}

/// Intersection of the line through `v1`, `v2` with `plane`, as
/// `v1 + t (v2 - v1)` with `t = -(n · (v1 - p1)) / (n · (v2 - v1))`.
pub fn line_plane_intersection(v1: Point3, v2: Point3, plane: &Plane) -> Result<Point3> {
    let num = plane.normal().dot(v1 - plane.witnesses()[0]);
    let den = plane.normal().dot(v2 - v1);
    if den == 0.0 {
        return Err(Error::ParallelLine);
    }
    let t = -num / den;
    Ok(v1 + (v2 - v1) * t)
}

/// Counter-clockwise order of the coplanar cap points, as positions into
/// `cap`. The cycle is oriented so its normal is `-plane.normal()`, which is
/// outward for the solid kept on the normal side.
pub fn sort_cap_ccw(cap: &[Point3], plane: &Plane) -> Result<Face> {
    if cap.len() < 3 {
        return Err(Error::DegenerateCap);
    }
    let n = plane.normal();
    let drop = if n.x.abs() >= n.y.abs() && n.x.abs() >= n.z.abs() {
        0
    } else if n.y.abs() >= n.z.abs() {
        1
    } else {
        2
    };
    let (ua, va) = ((drop + 1) % 3, (drop + 2) % 3);
    let count = cap.len() as f64;
    let cu = cap.iter().map(|p| p.axis(ua)).sum::<f64>() / count;
    let cv = cap.iter().map(|p| p.axis(va)).sum::<f64>() / count;
    let angles: Vec<f64> = cap
        .iter()
        .map(|p| (p.axis(va) - cv).atan2(p.axis(ua) - cu))
        .collect();
    let mut order: Vec<usize> = (0..cap.len()).collect();
    order.sort_by(|&a, &b| angles[a].total_cmp(&angles[b]));

    let ordered: Vec<Point3> = order.iter().map(|&i| cap[i]).collect();
    let normal = face_normal_newell(&ordered).map_err(|_| Error::DegenerateCap)?;
    if normal.dot(n) > 0.0 {
        order.reverse();
    }
    Ok(Face::from_indices(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{box_polyhedron, signed_volume};
    use crate::predicates::classify_points;
    use approx::assert_abs_diff_eq;

    fn cube() -> Polyhedron {
        box_polyhedron(Point3::ORIGIN, Point3::new(1.0, 1.0, 1.0))
    }

    fn cube_normals() -> Vec<Point3> {
        vec![
            Point3::new(0.0, 0.0, -1.0),
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(0.0, -1.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(-1.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
        ]
    }

    fn z_plane(z: f64) -> Plane {
        Plane::through_point(Point3::new(0.0, 0.0, z), Point3::new(0.0, 0.0, 1.0)).unwrap()
    }

    fn cut(poly: &Polyhedron, plane: &Plane) -> Polyhedron {
        let s = classify_points(plane, &poly.verts, 1e-8);
        polyhedron_plane_intersection(poly, &s, plane)
    }

    #[test]
    fn kernel_of_cube_is_cube() {
        let r = polyhedron_kernel(&cube(), &cube_normals(), &KernelOptions::default()).unwrap();
        assert_eq!(r.status, KernelStatus::NonEmpty);
        assert!(r.star_shaped);
        assert_eq!(r.iterations, 6);
        assert_abs_diff_eq!(r.volume, 1.0, epsilon = 1e-9);
        let k = r.kernel.unwrap();
        assert_eq!((k.verts.len(), k.faces.len()), (8, 6));
    }

    #[test]
    fn kernel_rejects_normal_count_mismatch() {
        let err = polyhedron_kernel(&cube(), &cube_normals()[..5], &KernelOptions::default());
        assert_eq!(err, Err(Error::InputMismatch { expected: 6, actual: 5 }));
    }

    #[test]
    fn clip_cube_at_half_height() {
        let a = cut(&cube(), &z_plane(0.5));
        assert_eq!((a.verts.len(), a.faces.len()), (8, 6));
        assert_abs_diff_eq!(signed_volume(&a).unwrap(), 0.5, epsilon = 1e-12);
        for v in &a.verts {
            assert!(v.z >= 0.5);
        }
    }

    #[test]
    fn tangent_plane_adds_no_duplicate_cap() {
        let a = cut(&cube(), &z_plane(0.0));
        assert_eq!((a.verts.len(), a.faces.len()), (8, 6));
        assert_abs_diff_eq!(signed_volume(&a).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn plane_above_everything_empties() {
        let a = cut(&cube(), &z_plane(2.0));
        assert!(a.faces.is_empty());
    }

    #[test]
    fn corner_cut_yields_triangle_cap() {
        // Keep the corner near the origin: x + y + z <= 1.
        let p = Plane::through_point(Point3::new(1.0, 0.0, 0.0), Point3::new(-1.0, -1.0, -1.0))
            .unwrap();
        let a = cut(&cube(), &p);
        a.check_closed().unwrap();
        assert_abs_diff_eq!(signed_volume(&a).unwrap(), 1.0 / 6.0, epsilon = 1e-9);
    }

    #[test]
    fn hexagonal_cap() {
        // x + y + z = 1.5 slices the cube through six edge midpoints.
        let p = Plane::through_point(Point3::new(0.5, 0.5, 0.5), Point3::new(1.0, 1.0, 1.0))
            .unwrap();
        let a = cut(&cube(), &p);
        a.check_closed().unwrap();
        let cap = a.faces.last().unwrap();
        assert_eq!(cap.len(), 6);
        let pts = a.face_points(cap);
        let n = face_normal_newell(&pts).unwrap();
        assert!(n.distance(-p.normal()) < 1e-12);
        assert_abs_diff_eq!(signed_volume(&a).unwrap(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn square_clipped_by_vertical_plane() {
        let v = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
            Point3::new(2.0, 2.0, 0.0),
            Point3::new(0.0, 2.0, 0.0),
        ];
        let f = Face::new(vec![0, 1, 2, 3]).unwrap();
        let p = Plane::through_point(Point3::new(1.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0))
            .unwrap();
        let s = classify_points(&p, &v, 1e-8);
        let (pts, face) = polygon_plane_intersection(&v, &f, &s, &p).unwrap();
        assert_eq!(
            pts,
            vec![
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(2.0, 0.0, 0.0),
                Point3::new(2.0, 2.0, 0.0),
                Point3::new(1.0, 2.0, 0.0),
            ]
        );
        assert_eq!(face.indices(), &[4, 1, 2, 5]);
    }

    #[test]
    fn triangle_clipped_by_vertical_plane() {
        let v = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
            Point3::new(0.0, 2.0, 0.0),
        ];
        let f = Face::new(vec![0, 1, 2]).unwrap();
        let p = Plane::through_point(Point3::new(1.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0))
            .unwrap();
        let s = classify_points(&p, &v, 1e-8);
        let (pts, _) = polygon_plane_intersection(&v, &f, &s, &p).unwrap();
        assert_eq!(
            pts,
            vec![
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(2.0, 0.0, 0.0),
                Point3::new(1.0, 1.0, 0.0),
            ]
        );
    }

    #[test]
    fn vertex_on_plane_is_kept_once() {
        // Diamond with its left vertex on x = 0.
        let v = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, -1.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
        ];
        let f = Face::new(vec![0, 1, 2, 3]).unwrap();
        let p = Plane::through_point(Point3::ORIGIN, Point3::new(1.0, 0.0, 0.0)).unwrap();
        let s = classify_points(&p, &v, 1e-8);
        assert_eq!(s[0], Sign::Inter);
        // Not a proper crossing: nothing lies below.
        assert_eq!(
            polygon_plane_intersection(&v, &f, &s, &p),
            Err(Error::NoProperIntersection)
        );
        // The edge walk itself keeps all four vertices exactly once.
        let corners = clip_face(&v, f.indices(), &s, &p);
        assert_eq!(
            corners,
            vec![Corner::Old(1), Corner::Old(2), Corner::Old(3), Corner::Old(0)]
        );
    }

    #[test]
    fn quad_split_through_opposite_vertices() {
        let v = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, -1.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
        ];
        let f = Face::new(vec![0, 1, 2, 3]).unwrap();
        // y = 0 through vertices 0 and 2; keep y >= 0.
        let p = Plane::through_point(Point3::ORIGIN, Point3::new(0.0, 1.0, 0.0)).unwrap();
        let s = classify_points(&p, &v, 1e-8);
        let (pts, face) = polygon_plane_intersection(&v, &f, &s, &p).unwrap();
        assert_eq!(face.indices(), &[2, 3, 0]);
        assert_eq!(pts.len(), 3);
    }

    #[test]
    fn line_plane_cases() {
        let p = z_plane(0.0);
        let v = line_plane_intersection(Point3::new(0.0, 0.0, -1.0), Point3::new(0.0, 0.0, 3.0), &p)
            .unwrap();
        assert_eq!(v, Point3::new(0.0, 0.0, 0.0));
        let mid = line_plane_intersection(Point3::ORIGIN, Point3::new(0.0, 0.0, 2.0), &z_plane(1.0))
            .unwrap();
        assert_eq!(mid, Point3::new(0.0, 0.0, 1.0));
        assert_eq!(
            line_plane_intersection(Point3::new(1.0, 1.0, 0.0), Point3::new(1.0, 1.0, 0.0), &p),
            Err(Error::ParallelLine)
        );
    }

    #[test]
    fn line_plane_residual_is_small() {
        let p = Plane::through_point(Point3::new(0.3, -0.2, 0.7), Point3::new(0.2, -1.3, 0.4))
            .unwrap();
        let v = line_plane_intersection(Point3::new(-3.0, 2.0, 1.0), Point3::new(4.0, -5.0, 0.5), &p)
            .unwrap();
        assert!(p.signed_distance(v).abs() <= 1e-9 * (1.0 + p.offset().abs()));
    }

    #[test]
    fn cap_orientation_and_rotation_invariance() {
        let pts = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ];
        let p = z_plane(0.0);
        let order = sort_cap_ccw(&pts, &p).unwrap();
        let cyc: Vec<Point3> = order.indices().iter().map(|&i| pts[i]).collect();
        assert_eq!(face_normal_newell(&cyc).unwrap(), Point3::new(0.0, 0.0, -1.0));

        let shuffled = vec![pts[2], pts[0], pts[3], pts[1]];
        let order2 = sort_cap_ccw(&shuffled, &p).unwrap();
        let cyc2: Vec<Point3> = order2.indices().iter().map(|&i| shuffled[i]).collect();
        let start = cyc2.iter().position(|&q| q == cyc[0]).unwrap();
        for i in 0..4 {
            assert_eq!(cyc[i], cyc2[(start + i) % 4]);
        }
    }

    #[test]
    fn collinear_cap_is_rejected() {
        let pts = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
        ];
        assert_eq!(sort_cap_ccw(&pts, &z_plane(0.0)), Err(Error::DegenerateCap));
    }

    #[test]
    fn shuffle_order_is_a_seeded_permutation() {
        let a = face_order(50, &KernelOptions::shuffled(7));
        let b = face_order(50, &KernelOptions::shuffled(7));
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..50).collect::<Vec<_>>());
        assert_ne!(a, face_order(50, &KernelOptions::shuffled(8)));
        assert_eq!(face_order(5, &KernelOptions::default()), vec![0, 1, 2, 3, 4]);
    }
}
