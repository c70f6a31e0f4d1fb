//! Exact formulas for the complex hyperbolic plane of holomorphic sectional
//! curvature -4, in the hyperboloid model over C^{2,1}.
//!
//! Points are negative vectors of the hermitian form `<z,w> = conj(z1)w1 +
//! conj(z2)w2 - conj(z3)w3`, normalized to `<z,z> = -1` and taken modulo a
//! unit phase. `T_p` is the `<p,·>`-orthogonal complement of `p` with the
//! metric `Re<·,·>`; the complex structure `J` is multiplication by `i`.
//! In this normalization `cosh d(p,q) = |<p,q>|`, geodesics are
//! `cosh(t) p + sinh(t) u`, and transvections realize parallel transport.

mod ambient;
mod ball;
mod curvature;
mod isometry;
mod point;

pub use ambient::{basis, hermitian_form, AmbientVector, I};
pub use ball::{ball_velocity, from_ball, tangent_from_ball, to_ball, BallPoint};
pub use curvature::curvature;
pub use isometry::{reflect_complex_line, Isometry};
pub use point::{distance, exp, geodesic, log, parallel_transport, transport_to, Geodesic, Point, TangentVector};

pub(crate) use ambient::real;

/// Orthonormal frame `(e1, i e1, e2, i e2)` at the ball origin.
pub fn origin_frame() -> [TangentVector; 4] {
    let o = Point::origin();
    let e1 = basis(0);
    let e2 = basis(1);
    [
        o.project(&e1),
        o.project(&(e1 * I)),
        o.project(&e2),
        o.project(&(e2 * I)),
    ]
}

/// Gram matrix `<f_i, f_j>` of a list of tangent vectors.
pub fn gram<const N: usize>(frame: &[TangentVector; N]) -> [[f64; N]; N] {
    std::array::from_fn(|i| std::array::from_fn(|j| frame[i].dot(&frame[j])))
}
