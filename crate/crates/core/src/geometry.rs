//! Value types shared by every stage of the kernel pipeline, plus the
//! elementary constructions on them (bounding boxes, face planes, normals
//! and volumes).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A point (or vector) in model space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, o: Point3) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Component by axis index (0 = x, 1 = y, 2 = z).
    pub fn axis(self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("axis index {i} out of range"),
        }
    }

    pub fn max_abs_component(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Point3 {
    type Output = Point3;
    fn div(self, s: f64) -> Point3 {
        Point3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// Vertex ids of one polygonal face, counter-clockwise seen from outside.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Face(Vec<usize>);

impl Face {
    /// Builds a face, rejecting fewer than three ids or repeated ids.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.len() < 3 {
            return Err(Error::InvalidFace(format!(
                "{} indices, need at least 3",
                indices.len()
            )));
        }
        for (i, a) in indices.iter().enumerate() {
            if indices[i + 1..].contains(a) {
                return Err(Error::InvalidFace(format!("index {a} repeated")));
            }
        }
        Ok(Face(indices))
    }

    /// Skips validation; callers guarantee the face invariants.
    pub(crate) fn from_indices(indices: Vec<usize>) -> Self {
        debug_assert!(indices.len() >= 3);
        Face(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Same vertices in the opposite winding.
    pub fn reversed(&self) -> Face {
        let mut v = self.0.clone();
        v.reverse();
        Face(v)
    }

    /// Directed edges `(v_i, v_{i+1})`, wrapping around.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }

    /// True when both faces describe the same vertex cycle, in either
    /// orientation and from any starting vertex.
    pub fn same_cycle(&self, other: &Face) -> bool {
        let (a, b) = (&self.0, &other.0);
        if a.len() != b.len() {
            return false;
        }
        let n = a.len();
        let Some(start) = b.iter().position(|&v| v == a[0]) else {
            return false;
        };
        let forward = (0..n).all(|i| a[i] == b[(start + i) % n]);
        forward || (0..n).all(|i| a[i] == b[(start + n - i) % n])
    }
}

impl From<Face> for Vec<usize> {
    fn from(f: Face) -> Vec<usize> {
        f.0
    }
}

/// A polyhedron as a vertex array plus faces indexing into it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polyhedron {
    pub verts: Vec<Point3>,
    pub faces: Vec<Face>,
}

impl Polyhedron {
    /// Builds a polyhedron after checking coordinates and face indices.
    pub fn new(verts: Vec<Point3>, faces: Vec<Face>) -> Result<Self> {
        if let Some(i) = verts.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        for f in &faces {
            if let Some(&index) = f.indices().iter().find(|&&i| i >= verts.len()) {
                return Err(Error::IndexOutOfRange {
                    index,
                    len: verts.len(),
                });
            }
        }
        Ok(Polyhedron { verts, faces })
    }

    /// Convenience constructor from raw index lists.
    pub fn from_raw(verts: Vec<Point3>, faces: Vec<Vec<usize>>) -> Result<Self> {
        let faces = faces.into_iter().map(Face::new).collect::<Result<_>>()?;
        Polyhedron::new(verts, faces)
    }

    pub fn empty() -> Self {
        Polyhedron::default()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face_points(&self, face: &Face) -> Vec<Point3> {
        face.indices().iter().map(|&i| self.verts[i]).collect()
    }

    /// Checks that every unordered edge is shared by exactly two faces.
    pub fn check_closed(&self) -> Result<()> {
        let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
        for f in &self.faces {
            for (a, b) in f.edges() {
                *counts.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let mut bad: Vec<_> = counts.into_iter().filter(|&(_, c)| c != 2).collect();
        bad.sort_unstable();
        match bad.first() {
            Some(&((a, b), c)) => Err(Error::NotClosed(a, b, c)),
            None => Ok(()),
        }
    }

    pub fn is_closed(&self) -> bool {
        !self.faces.is_empty() && self.check_closed().is_ok()
    }

    /// Every face with its winding reversed.
    pub fn reversed(&self) -> Polyhedron {
        Polyhedron {
            verts: self.verts.clone(),
            faces: self.faces.iter().map(Face::reversed).collect(),
        }
    }

    /// Divergence-theorem volume with faces fanned from their first
    /// vertex. Does not check closedness.
    pub(crate) fn fan_volume(&self) -> f64 {
        // Measured from a vertex rather than the origin to limit cancellation.
        let Some(&r) = self.verts.first() else {
            return 0.0;
        };
        let mut six_v = 0.0;
        for f in &self.faces {
            let idx = f.indices();
            let v0 = self.verts[idx[0]] - r;
            for w in idx[1..].windows(2) {
                six_v += v0.dot((self.verts[w[0]] - r).cross(self.verts[w[1]] - r));
            }
        }
        six_v / 6.0
    }

    /// Vertex centroid (not the volume centroid).
    pub fn vertex_centroid(&self) -> Point3 {
        let n = self.verts.len().max(1) as f64;
        self.verts.iter().fold(Point3::ORIGIN, |acc, &p| acc + p) / n
    }
}

/// Per-vertex position relative to an oriented plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    /// Opposite side of the plane normal.
    Below,
    /// Side the plane normal points to.
    Above,
    /// On the plane (or within tolerance of it).
    Inter,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Below => "BELOW",
            Sign::Above => "ABOVE",
            Sign::Inter => "INTER",
        })
    }
}

pub type SignArray = Vec<Sign>;

/// Oriented plane `n · x = d` with unit normal `n`, plus three witness
/// points used by the exact orientation predicate. The witnesses are
/// ordered so that `(p2 - p1) × (p3 - p1)` points along `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    n: Point3,
    d: f64,
    witnesses: [Point3; 3],
}

impl Plane {
    /// Plane of `face` oriented with normal `-outward`, i.e. pointing into
    /// the solid. `d` is taken from the first face vertex.
    pub fn from_face(poly: &Polyhedron, face: &Face, outward: Point3) -> Result<Plane> {
        Self::from_face_indexed(poly, face, outward, 0)
    }

    pub(crate) fn from_face_indexed(
        poly: &Polyhedron,
        face: &Face,
        outward: Point3,
        face_id: usize,
    ) -> Result<Plane> {
        let len = outward.norm();
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::DegenerateFace { face: face_id });
        }
        let n = -outward / len;
        let pts = poly.face_points(face);
        let p1 = pts[0];
        // Anchor at the first vertex, then take the farthest vertex and the
        // one spanning the largest triangle with them.
        let (i2, far) = pts[1..]
            .iter()
            .enumerate()
            .map(|(i, &p)| (i + 1, p.distance(p1)))
            .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(far > 0.0) {
            return Err(Error::DegenerateFace { face: face_id });
        }
        let p2 = pts[i2];
        let (i3, area) = pts
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != 0 && i != i2)
            .map(|(i, &p)| (i, (p2 - p1).cross(p - p1).norm()))
            .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(area > 0.0) {
            return Err(Error::DegenerateFace { face: face_id });
        }
        let p3 = pts[i3];
        let orient = (p2 - p1).cross(p3 - p1).dot(n);
        if orient == 0.0 {
            return Err(Error::DegenerateFace { face: face_id });
        }
        let witnesses = if orient > 0.0 { [p1, p2, p3] } else { [p1, p3, p2] };
        Ok(Plane {
            n,
            d: n.dot(p1),
            witnesses,
        })
    }

    /// Plane through three points, oriented by their winding.
    pub fn from_points(p1: Point3, p2: Point3, p3: Point3) -> Result<Plane> {
        let c = (p2 - p1).cross(p3 - p1);
        let len = c.norm();
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::DegenerateFace { face: 0 });
        }
        let n = c / len;
        Ok(Plane {
            n,
            d: n.dot(p1),
            witnesses: [p1, p2, p3],
        })
    }

    /// Plane through `point` with the given normal. Witness points are
    /// built from an orthonormal frame, so they are exactly on the plane
    /// only for axis-aligned normals.
    pub fn through_point(point: Point3, normal: Point3) -> Result<Plane> {
        let len = normal.norm();
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::DegenerateFace { face: 0 });
        }
        let n = normal / len;
        let helper = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
            Point3::new(1.0, 0.0, 0.0)
        } else if n.y.abs() <= n.z.abs() {
            Point3::new(0.0, 1.0, 0.0)
        } else {
            Point3::new(0.0, 0.0, 1.0)
        };
        let u = n.cross(helper);
        let u = u / u.norm();
        let v = n.cross(u);
        Ok(Plane {
            n,
            d: n.dot(point),
            witnesses: [point, point + u, point + v],
        })
    }

    pub fn normal(&self) -> Point3 {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.d
    }

    pub fn witnesses(&self) -> [Point3; 3] {
        self.witnesses
    }

    /// Hessian signed distance `n · q - d`.
    pub fn signed_distance(&self, q: Point3) -> f64 {
        self.n.dot(q) - self.d
    }
}

/// Axis-aligned bounding box of `poly` as a closed, outward-wound box.
/// Zero-extent axes are inflated by `1e-10 * (1 + max |coordinate|)`.
pub fn aabb(poly: &Polyhedron) -> Result<Polyhedron> {
    let (lo, hi) = bounds(&poly.verts)?;
    Ok(box_polyhedron(lo, hi))
}

/// Componentwise extrema of a point set, with degenerate axes inflated.
pub fn bounds(points: &[Point3]) -> Result<(Point3, Point3)> {
    let first = *points.first().ok_or(Error::EmptyInput)?;
    if let Some(i) = points.iter().position(|p| !p.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let (mut lo, mut hi) = (first.to_array(), first.to_array());
    let mut max_abs: f64 = 0.0;
    for p in points {
        for (k, c) in p.to_array().into_iter().enumerate() {
            lo[k] = lo[k].min(c);
            hi[k] = hi[k].max(c);
            max_abs = max_abs.max(c.abs());
        }
    }
    let eps = 1e-10 * (1.0 + max_abs);
    for k in 0..3 {
        if hi[k] - lo[k] <= 0.0 {
            lo[k] -= eps;
            hi[k] += eps;
        }
    }
    Ok((lo.into(), hi.into()))
}

/// Box `[lo, hi]` with vertex `i` at corner bits `x = i & 1, y = i & 2, z = i & 4`.
pub fn box_polyhedron(lo: Point3, hi: Point3) -> Polyhedron {
    let verts = (0..8)
        .map(|i| {
            Point3::new(
                if i & 1 == 0 { lo.x } else { hi.x },
                if i & 2 == 0 { lo.y } else { hi.y },
                if i & 4 == 0 { lo.z } else { hi.z },
            )
        })
        .collect();
    let faces = [
        [0, 2, 3, 1],
        [4, 5, 7, 6],
        [0, 1, 5, 4],
        [2, 6, 7, 3],
        [0, 4, 6, 2],
        [1, 3, 7, 5],
    ]
    .into_iter()
    .map(|f| Face::from_indices(f.to_vec()))
    .collect();
    Polyhedron { verts, faces }
}

/// Signed volume of a closed polyhedron; positive when outward-wound.
pub fn signed_volume(poly: &Polyhedron) -> Result<f64> {
    poly.check_closed()?;
    Ok(poly.fan_volume())
}

/// Unit normal of a (possibly non-planar or concave) polygon by Newell's
/// formula. Points along the counter-clockwise winding direction.
pub fn face_normal_newell(pts: &[Point3]) -> Result<Point3> {
    if pts.len() < 3 {
        return Err(Error::DegenerateFace { face: 0 });
    }
    let mut n = Point3::ORIGIN;
    for (i, &a) in pts.iter().enumerate() {
        let b = pts[(i + 1) % pts.len()];
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    let len = n.norm();
    if !(len >= 1e-14) {
        return Err(Error::DegenerateFace { face: 0 });
    }
    Ok(n / len)
}
