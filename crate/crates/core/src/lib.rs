//! Geometric kernel of simple polyhedra.
//!
//! The kernel of a polyhedron is the set of interior points from which the
//! whole polyhedron is visible; a polyhedron is star-shaped iff its kernel
//! has non-zero volume. [`polyhedron_kernel`] computes it by clipping the
//! bounding box of the input against the inner half-space of every face,
//! classifying vertices with an exact orientation predicate.
//!
//! ```
//! use polykernel::{models, polyhedron_kernel, KernelOptions, KernelStatus};
//!
//! let (poly, normals) = models::l_prism();
//! let result = polyhedron_kernel(&poly, &normals, &KernelOptions::default()).unwrap();
//! assert_eq!(result.status, KernelStatus::NonEmpty);
//! assert!((result.volume - 1.0).abs() < 1e-9);
//! ```

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod hull;
pub mod kernel;
pub mod mesh_io;
pub mod models;
pub mod oracle;
pub mod predicates;

pub use error::{Error, Result};
pub use geometry::{
    aabb, box_polyhedron, face_normal_newell, signed_volume, Face, Plane, Point3, Polyhedron,
    Sign, SignArray,
};
pub use kernel::{
    line_plane_intersection, polygon_plane_intersection, polyhedron_kernel,
    polyhedron_kernel_traced, polyhedron_plane_intersection, sort_cap_ccw, KernelOptions,
    KernelResult, KernelStatus,
};
pub use mesh_io::{compute_outward_normals, MeshDataset, MeshElement};
pub use predicates::{classify_edge, classify_face, classify_point, classify_points, orient};
