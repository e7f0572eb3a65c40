use thiserror::Error;

/// Errors raised by the geometric routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input polyhedron has no vertices")]
    EmptyInput,
    #[error("face {face} is degenerate (no affinely independent vertex triple)")]
    DegenerateFace { face: usize },
    #[error("polyhedron is not closed: edge ({0}, {1}) is shared by {2} faces")]
    NotClosed(usize, usize, usize),
    #[error("expected {expected} face normals, got {actual}")]
    InputMismatch { expected: usize, actual: usize },
    #[error("invalid face: {0}")]
    InvalidFace(String),
    #[error("face vertex index {index} out of range ({len} vertices)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("non-finite coordinate in vertex {0}")]
    NonFinite(usize),
    #[error("polygon is not properly intersected by the plane")]
    NoProperIntersection,
    #[error("segment is parallel to the plane (denominator is zero)")]
    ParallelLine,
    #[error("cap points are collinear")]
    DegenerateCap,
    #[error("{planes} planes exceed the brute-force limit of {limit}")]
    TooManyPlanes { planes: usize, limit: usize },
    #[error("point set is degenerate (all points coplanar)")]
    DegenerateHull,
}

pub type Result<T> = std::result::Result<T, Error>;
