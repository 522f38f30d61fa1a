//! Plane graphs as rotation systems, canvases with a distinguished outer
//! face, canonical codes, structural predicates and serialization.

mod canvas;
mod code;
mod graph;
pub mod planar_code;
mod predicates;
mod triangulate;

pub use canvas::{Canvas, FaceSoup};
pub use code::{canonical_code, canonical_form, sphere_canonical_code, CanonicalCode};
pub use graph::{faces, AdjMatrix, RotationGraph, MAX_VERTICES};
pub use predicates::{
    all_triangles_facial, cycle_is_hollow, internally_k_connected, is_thick, nonfacial_triangles,
};
pub use triangulate::triangulate_preserving;

pub(crate) use predicates::{four_cycles, interior_vertices};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaneError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("vertex {0} lists neighbor {1} twice")]
    RepeatedNeighbor(usize, usize),
    #[error("{1} is in the rotation of {0} but not conversely")]
    Asymmetric(usize, usize),
    #[error("Euler formula fails: V={v}, E={e}, F={f}")]
    Euler { v: usize, e: usize, f: usize },
    #[error("graph with {0} vertices exceeds the 16-bit identifier range")]
    TooLarge(usize),
    #[error("outer face: {0}")]
    OuterFace(String),
    #[error("inner face of length {0}")]
    NonTriangularFace(usize),
    #[error("invalid input: {0}")]
    Input(String),
}
