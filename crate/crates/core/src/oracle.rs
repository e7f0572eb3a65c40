//! Brute-force reference computations used to validate kernels.
//!
//! Nothing here is used by [`crate::polyhedron_kernel`]. The vertex
//! enumeration works on exact rational face planes built directly from the
//! face vertices, so it shares no arithmetic with the clipping path.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{bounds, Plane, Point3, Polyhedron, Sign};
use crate::hull::convex_hull;
use crate::kernel::EMPTY_VOLUME_RATIO;
use crate::predicates::classify_point;

/// Plane count limit of [`brute_force_kernel`] (face planes plus the six
/// bounding-box planes).
pub const MAX_ORACLE_PLANES: usize = 40;

/// Feasibility slack on candidate vertices, in model units.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// True when `q` lies in the bounding box of `poly` and on the inner side
/// (ABOVE or INTER) of every face plane.
pub fn kernel_membership(poly: &Polyhedron, normals: &[Point3], q: Point3, tol: f64) -> Result<bool> {
    if normals.len() != poly.faces.len() {
        return Err(Error::InputMismatch {
            expected: poly.faces.len(),
            actual: normals.len(),
        });
    }
    let (lo, hi) = bounds(&poly.verts)?;
    if (0..3).any(|k| q.axis(k) < lo.axis(k) || q.axis(k) > hi.axis(k)) {
        return Ok(false);
    }
    for (f, &n) in poly.faces.iter().zip(normals) {
        let plane = Plane::from_face(poly, f, n)?;
        if classify_point(&plane, q, tol) == Sign::Below {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Kernel found by exhaustive vertex enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleKernel {
    /// Extreme points of the feasible region.
    pub vertices: Vec<Point3>,
    pub hull: Polyhedron,
    pub volume: f64,
}

/// Exact half-space `normal · x >= offset`.
struct RationalHalfSpace {
    normal: [BigRational; 3],
    offset: BigRational,
    approx_normal: Point3,
    approx_offset: f64,
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

fn rat_point(p: Point3) -> [BigRational; 3] {
    [rat(p.x), rat(p.y), rat(p.z)]
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl RationalHalfSpace {
    fn new(normal: [BigRational; 3], through: &[BigRational; 3]) -> Self {
        let offset = dot(&normal, through);
        let approx_normal = Point3::new(to_f64(&normal[0]), to_f64(&normal[1]), to_f64(&normal[2]));
        let approx_offset = to_f64(&offset);
        RationalHalfSpace {
            normal,
            offset,
            approx_normal,
            approx_offset,
        }
    }
}

fn dot(a: &[BigRational; 3], b: &[BigRational; 3]) -> BigRational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn sub(a: &[BigRational; 3], b: &[BigRational; 3]) -> [BigRational; 3] {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn cross(a: &[BigRational; 3], b: &[BigRational; 3]) -> [BigRational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Inner half-spaces of all faces plus the bounding box.
fn half_spaces(poly: &Polyhedron, normals: &[Point3]) -> Result<Vec<RationalHalfSpace>> {
    let mut out = Vec::with_capacity(poly.faces.len() + 6);
    for (fi, (f, &outward)) in poly.faces.iter().zip(normals).enumerate() {
        let pts: Vec<[BigRational; 3]> = poly.face_points(f).into_iter().map(rat_point).collect();
        // Exact area vector (Newell) of the face polygon.
        let mut area = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
        for i in 1..pts.len() - 1 {
            let c = cross(&sub(&pts[i], &pts[0]), &sub(&pts[i + 1], &pts[0]));
            for k in 0..3 {
                area[k] += &c[k];
            }
        }
        let along = to_f64(&area[0]) * outward.x + to_f64(&area[1]) * outward.y + to_f64(&area[2]) * outward.z;
        if area.iter().all(Zero::is_zero) || along == 0.0 {
            return Err(Error::DegenerateFace { face: fi });
        }
        // Inner normal is opposite to the outward one.
        let inner = if along > 0.0 {
            area.map(|c| -c)
        } else {
            area
        };
        out.push(RationalHalfSpace::new(inner, &pts[0]));
    }
    let (lo, hi) = bounds(&poly.verts)?;
    for k in 0..3 {
        let mut e = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
        e[k] = BigRational::from_integer(BigInt::from(1));
        out.push(RationalHalfSpace::new(e.clone(), &rat_point(lo)));
        out.push(RationalHalfSpace::new(e.map(|c| -c), &rat_point(hi)));
    }
    Ok(out)
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn solve_f64(hs: [&RationalHalfSpace; 3]) -> Option<Point3> {
    let m = hs.map(|h| h.approx_normal.to_array());
    let d = det3(&m);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let b = hs.map(|h| h.approx_offset);
    let col = |k: usize| {
        let mut mk = m;
        for r in 0..3 {
            mk[r][k] = b[r];
        }
        det3(&mk) / d
    };
    Some(Point3::new(col(0), col(1), col(2)))
}

fn rdet3(m: &[&[BigRational; 3]; 3]) -> BigRational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Exact intersection point of three planes, `None` if they are not
/// linearly independent.
fn solve_exact(hs: [&RationalHalfSpace; 3]) -> Option<[BigRational; 3]> {
    let rows = [&hs[0].normal, &hs[1].normal, &hs[2].normal];
    let d = rdet3(&rows);
    if d.is_zero() {
        return None;
    }
    let mut x: [BigRational; 3] = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
    for (k, xk) in x.iter_mut().enumerate() {
        let replaced: Vec<[BigRational; 3]> = (0..3)
            .map(|r| {
                let mut row = rows[r].clone();
                row[k] = hs[r].offset.clone();
                row
            })
            .collect();
        *xk = rdet3(&[&replaced[0], &replaced[1], &replaced[2]]) / &d;
    }
    Some(x)
}

/// Kernel by enumerating every triple of planes (face planes plus the six
/// bounding-box planes), keeping the intersection points that satisfy all
/// half-spaces within [`FEASIBILITY_TOL`], and taking their convex hull.
/// Returns `None` for an empty (or flat) kernel.
pub fn brute_force_kernel(poly: &Polyhedron, normals: &[Point3]) -> Result<Option<OracleKernel>> {
    if normals.len() != poly.faces.len() {
        return Err(Error::InputMismatch {
            expected: poly.faces.len(),
            actual: normals.len(),
        });
    }
    let planes = poly.faces.len() + 6;
    if planes > MAX_ORACLE_PLANES {
        return Err(Error::TooManyPlanes {
            planes,
            limit: MAX_ORACLE_PLANES,
        });
    }
    let hs = half_spaces(poly, normals)?;
    let (lo, hi) = bounds(&poly.verts)?;
    let scale = 1.0 + lo.max_abs_component().max(hi.max_abs_component());

    let mut exact_seen: HashSet<[BigRational; 3]> = HashSet::new();
    let mut candidates: Vec<Point3> = Vec::new();
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            for k in j + 1..hs.len() {
                let triple = [&hs[i], &hs[j], &hs[k]];
                // Cheap float screen; the exact test below decides.
                if let Some(p) = solve_f64(triple) {
                    let far_out = hs.iter().any(|h| {
                        (h.approx_normal.dot(p) - h.approx_offset) / h.approx_normal.norm() < -1e-6 * scale
                    });
                    if far_out {
                        continue;
                    }
                }
                let Some(x) = solve_exact(triple) else { continue };
                let feasible = hs.iter().all(|h| {
                    let r = dot(&h.normal, &x) - &h.offset;
                    !r.is_negative() || to_f64(&r) / h.approx_normal.norm() >= -FEASIBILITY_TOL
                });
                if feasible && !exact_seen.contains(&x) {
                    let p = Point3::new(to_f64(&x[0]), to_f64(&x[1]), to_f64(&x[2]));
                    exact_seen.insert(x);
                    if candidates.iter().all(|c| c.distance(p) > 1e-12 * scale) {
                        candidates.push(p);
                    }
                }
            }
        }
    }
    if candidates.len() < 4 {
        return Ok(None);
    }
    let Ok(hull) = convex_hull(&candidates) else {
        return Ok(None);
    };
    let volume = hull.fan_volume();
    let box_volume = (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z);
    if volume <= EMPTY_VOLUME_RATIO * box_volume {
        return Ok(None);
    }
    Ok(Some(OracleKernel {
        vertices: hull.verts.clone(),
        hull,
        volume,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub volume: f64,
    pub std_error: f64,
    pub hits: usize,
    pub samples: usize,
}

/// Hit-or-miss volume of `member` inside the axis-aligned box spanned by
/// `bbox.verts`, from `n` seeded uniform samples.
pub fn monte_carlo_volume<F>(member: F, bbox: &Polyhedron, n: usize, seed: u64) -> Result<MonteCarloEstimate>
where
    F: Fn(Point3) -> bool,
{
    let (lo, hi) = bounds(&bbox.verts)?;
    let ext = hi - lo;
    let box_volume = ext.x * ext.y * ext.z;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n.max(1);
    let hits = (0..n)
        .filter(|_| {
            let p = Point3::new(
                lo.x + ext.x * rng.gen::<f64>(),
                lo.y + ext.y * rng.gen::<f64>(),
                lo.z + ext.z * rng.gen::<f64>(),
            );
            member(p)
        })
        .count();
    let h = hits as f64 / n as f64;
    Ok(MonteCarloEstimate {
        volume: box_volume * h,
        std_error: box_volume * (h * (1.0 - h) / n as f64).sqrt(),
        hits,
        samples: n,
    })
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Point3], b: &[Point3]) -> f64 {
    fn directed(a: &[Point3], b: &[Point3]) -> f64 {
        a.iter()
            .map(|p| b.iter().map(|q| p.distance(*q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => directed(a, b).max(directed(b, a)),
    }
}

/// Generalized winding number of a closed polyhedron around `q`: close to
/// 1 inside, 0 outside.
pub fn winding_number(poly: &Polyhedron, q: Point3) -> f64 {
    let mut total = 0.0;
    for f in &poly.faces {
        let idx = f.indices();
        let a = poly.verts[idx[0]] - q;
        for w in idx[1..].windows(2) {
            let b = poly.verts[w[0]] - q;
            let c = poly.verts[w[1]] - q;
            let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
            let num = a.dot(b.cross(c));
            let den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
            total += 2.0 * num.atan2(den);
        }
    }
    total / (4.0 * std::f64::consts::PI)
}

/// True when `q` is strictly inside the convex polyhedron `convex` (by at
/// least `margin` from every face plane).
pub fn inside_convex(convex: &Polyhedron, q: Point3, margin: f64) -> bool {
    let centroid = convex.vertex_centroid();
    convex.faces.iter().all(|f| {
        let pts = convex.face_points(f);
        match crate::geometry::face_normal_newell(&pts) {
            Ok(n) => {
                let n = if n.dot(pts[0] - centroid) < 0.0 { -n } else { n };
                n.dot(q - pts[0]) < -margin
            }
            Err(_) => true,
        }
    })
}
