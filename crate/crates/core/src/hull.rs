//! Incremental 3D convex hull on top of the exact orientation predicate.
//! Quadratic in the number of points, meant for small point sets.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geometry::{Face, Point3, Polyhedron};
use crate::predicates::orient;

/// Convex hull of `points` as an outward-wound triangulated polyhedron.
/// Points on the hull boundary that are not extreme are dropped.
pub fn convex_hull(points: &[Point3]) -> Result<Polyhedron> {
    if points.len() < 4 {
        return Err(Error::DegenerateHull);
    }
    let [a, b, c, d] = initial_simplex(points)?;

    let mut faces: Vec<[usize; 3]> = if orient(points[a], points[b], points[c], points[d]) > 0 {
        // d sees abc from its positive side, so abc must be flipped.
        vec![[a, c, b], [a, b, d], [b, c, d], [c, a, d]]
    } else {
        vec![[a, b, c], [a, d, b], [b, d, c], [c, d, a]]
    };

    for (i, &p) in points.iter().enumerate() {
        if i == a || i == b || i == c || i == d {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| orient(points[f[0]], points[f[1]], points[f[2]], p) > 0)
            .collect();
        if !visible.contains(&true) {
            continue;
        }
        let seen: HashSet<(usize, usize)> = faces
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| v)
            .flat_map(|(f, _)| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])])
            .collect();
        let mut next = Vec::with_capacity(faces.len() + 4);
        for (f, &v) in faces.iter().zip(&visible) {
            if !v {
                next.push(*f);
                continue;
            }
            for (u, w) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                if !seen.contains(&(w, u)) {
                    next.push([u, w, i]);
                }
            }
        }
        faces = next;
    }

    // Compact to the vertices actually used.
    let mut remap = vec![usize::MAX; points.len()];
    let mut verts = Vec::new();
    let mut out_faces = Vec::with_capacity(faces.len());
    for f in &faces {
        let ids = f
            .iter()
            .map(|&i| {
                if remap[i] == usize::MAX {
                    remap[i] = verts.len();
                    verts.push(points[i]);
                }
                remap[i]
            })
            .collect();
        out_faces.push(Face::from_indices(ids));
    }
    Ok(Polyhedron {
        verts,
        faces: out_faces,
    })
}

fn initial_simplex(points: &[Point3]) -> Result<[usize; 4]> {
    let a = 0;
    let b = (1..points.len())
        .max_by(|&i, &j| {
            points[i]
                .distance(points[a])
                .total_cmp(&points[j].distance(points[a]))
        })
        .ok_or(Error::DegenerateHull)?;
    if points[b] == points[a] {
        return Err(Error::DegenerateHull);
    }
    let area = |i: usize| (points[b] - points[a]).cross(points[i] - points[a]).norm();
    let c = (0..points.len())
        .filter(|&i| i != a && i != b)
        .max_by(|&i, &j| area(i).total_cmp(&area(j)))
        .ok_or(Error::DegenerateHull)?;
    if area(c) == 0.0 {
        return Err(Error::DegenerateHull);
    }
    let height = |i: usize| {
        (points[b] - points[a])
            .cross(points[c] - points[a])
            .dot(points[i] - points[a])
            .abs()
    };
    let d = (0..points.len())
        .filter(|&i| i != a && i != b && i != c)
        .filter(|&i| orient(points[a], points[b], points[c], points[i]) != 0)
        .max_by(|&i, &j| height(i).total_cmp(&height(j)))
        .ok_or(Error::DegenerateHull)?;
    Ok([a, b, c, d])
}
