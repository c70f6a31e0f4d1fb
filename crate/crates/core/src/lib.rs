//! Outer billiards about quadratically convex hypersurfaces of the complex
//! hyperbolic plane.
//!
//! The exterior `U` of a hypersurface `N` is doubly foliated by the geodesic
//! rays `r -> γ_{Jν(p)}(r)`, `p ∈ N`, `r > 0` and `r < 0`. The billiard map
//! sends `γ_{Jν(p)}(-t)` to `γ_{Jν(p)}(t)`. This crate computes that map by
//! Newton inversion of the foliation, evaluates its differential in closed
//! form through Jacobi fields, and checks the geometric statements about it
//! (diffeomorphism, symplecticity, invariance of complex lines) against
//! independent numerical oracles.

// `!(x < y)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod billiard;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod hypersurface;
pub mod jacobi;
pub mod oracles;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
