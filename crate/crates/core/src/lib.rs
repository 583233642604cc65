//! Polygon spaces with fixed edge lengths, polygon dimension, and the
//! directed system of moduli spaces obtained by raising the ambient
//! dimension.
//!
//! A polygon with edge lengths `l_1 .. l_n` in `R^d` is a closed chain
//! starting and ending at the origin; its dimension is the dimension of the
//! span of its vertices. Modulo rotations, a polygon in `R^d` and its
//! mirror image become the same point once it is pushed into `R^{d+1}`, and
//! the system of moduli spaces stops changing at `d = n`.
//!
//! - [`lengths`]: edge-length vectors and feasibility.
//! - [`polygon`], [`gram`]: polygons, dimension, embeddings, Gram invariant.
//! - [`construct`]: degenerate, planar, bent and random polygons.
//! - [`quotient`]: SO(d)/O(d) equivalence, moduli points, the maps between
//!   consecutive ambient dimensions and their fibers.
//! - [`verify`]: randomized experiments producing JSON reports.

pub mod construct;
pub mod error;
pub mod gram;
pub mod lengths;
pub mod linalg;
pub mod polygon;
pub mod quotient;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use gram::GramForm;
pub use lengths::{classify_feasibility, EdgeLengths, FeasibilityClass};
pub use polygon::Polygon;
pub use quotient::{ModuliPoint, moduli_point, o_equivalent, so_equivalent};
pub use tolerance::ToleranceConfig;
