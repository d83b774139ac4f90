//! Face areas, outward normals and normal Gram matrices of Euclidean
//! simplices, together with the generalized law of sines that links them:
//! for any simplex the cofactor matrix of the normal Gram matrix is a
//! positive multiple of `a aᵗ`, where `a` is the vector of face areas.
//!
//! The crate also covers the inverse direction (Gram matrix to simplex),
//! closed-form triangle and tetrahedron identities, and a deterministic
//! randomized property harness.

pub mod closedform;
pub mod cli;
pub mod harness;
pub mod matrix;
pub mod recover;
pub mod report;
pub mod simplex;
pub mod sines;

pub use matrix::{Matrix, MatrixError, Rank1Factorization, Vector};
pub use simplex::{build_simplex, face_geometry, gram_matrix, FaceData, GeometryError, Simplex};
