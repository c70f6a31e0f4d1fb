//! Closed-form Jacobi fields along geodesics.
//!
//! Along a unit-speed geodesic the Jacobi equation decouples in a parallel
//! frame: the `γ'` component is affine, the `Jγ'` component solves
//! `f'' = 4f`, and components orthogonal to both solve `f'' = f`. Hence
//!
//! ```text
//! K(r) = (a + d r) γ'(r) + (c cosh 2r + (b/2) sinh 2r) Jγ'(r) + cosh(r) V(r) + sinh(r) W(r)
//! ```
//!
//! with `V, W` parallel along the geodesic. The `c` and `d` families complete
//! the representation to arbitrary initial data.

use crate::geometry::{Geodesic, TangentVector};
use crate::hypersurface::{AdaptedFrame, ShapeMatrix};

/// Initial data of a Jacobi field along a geodesic `γ` with `u = γ'(0)`:
/// `K(0) = a u + c Ju + v`, `K'(0) = d u + b Ju + w`, where `v, w` are
/// orthogonal to both `u` and `Ju`.
#[derive(Debug, Clone)]
pub struct JacobiData {
    pub a: f64,
    pub c: f64,
    pub b: f64,
    pub d: f64,
    pub v: TangentVector,
    pub w: TangentVector,
}

impl JacobiData {
    /// Largest component of `v` or `w` along `u` or `Ju`.
    pub fn orthogonality_defect(&self, u: &TangentVector) -> f64 {
        let ju = u.j();
        [self.v.dot(u), self.v.dot(&ju), self.w.dot(u), self.w.dot(&ju)]
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }

    /// `alpha * self + beta * other` (both along the same geodesic).
    pub fn combine(&self, alpha: f64, other: &JacobiData, beta: f64) -> JacobiData {
        JacobiData {
            a: alpha * self.a + beta * other.a,
            c: alpha * self.c + beta * other.c,
            b: alpha * self.b + beta * other.b,
            d: alpha * self.d + beta * other.d,
            v: self.v.scale(alpha) + other.v.scale(beta),
            w: self.w.scale(alpha) + other.w.scale(beta),
        }
    }
}

/// `K(r)` as a vector at `geo.point(r)`.
pub fn jacobi_eval(geo: &Geodesic, data: &JacobiData, r: f64) -> TangentVector {
    let vel = geo.velocity(r);
    let base = vel.base().clone();
    let vt = geo.transport(r, &data.v).at(&base);
    let wt = geo.transport(r, &data.w).at(&base);
    let along = data.a + data.d * r;
    let across = data.c * (2.0 * r).cosh() + 0.5 * data.b * (2.0 * r).sinh();
    vel.scale(along) + vel.j().scale(across) + vt.scale(r.cosh()) + wt.scale(r.sinh())
}

/// Covariant derivative `K'(r)`.
pub fn jacobi_derivative(geo: &Geodesic, data: &JacobiData, r: f64) -> TangentVector {
    let vel = geo.velocity(r);
    let base = vel.base().clone();
    let vt = geo.transport(r, &data.v).at(&base);
    let wt = geo.transport(r, &data.w).at(&base);
    let across = 2.0 * data.c * (2.0 * r).sinh() + data.b * (2.0 * r).cosh();
    vel.scale(data.d) + vel.j().scale(across) + vt.scale(r.sinh()) + wt.scale(r.cosh())
}

/// Splits `K(0)` and `K'(0)` into the components along `u`, `Ju` and the
/// orthogonal complement.
pub fn decompose_initial_data(k0: &TangentVector, k0dot: &TangentVector, u: &TangentVector) -> JacobiData {
    let u = u.at(k0.base());
    let ju = u.j();
    let a = k0.dot(&u);
    let c = k0.dot(&ju);
    let d = k0dot.dot(&u);
    let b = k0dot.dot(&ju);
    let v = k0.clone() - u.scale(a) - ju.scale(c);
    let w = k0dot.at(k0.base()) - u.scale(d) - ju.scale(b);
    JacobiData { a, c, b, d, v, w }
}

/// Shape operator `S_p` applied to `x ∈ T_pN`, using the matrix of `S_p` in the
/// ordered basis `(Jν, e, Je)`.
pub fn apply_shape(x: &TangentVector, shape: &ShapeMatrix, frame: &AdaptedFrame) -> TangentVector {
    let basis = frame.tangent_basis();
    let xi = x.coords(&basis);
    let a = shape.matrix();
    let s: Vec<f64> = (0..3).map(|i| (0..3).map(|j| a[(i, j)] * xi[j]).sum()).collect();
    TangentVector::combine(&basis, &s)
}

/// Initial data of the Jacobi field realizing `dF(x, 0)` along `γ_{Jν(p)}`:
/// `K(0) = x`, `K'(0) = -J S_p x`.
pub fn hypersurface_jacobi_data(x: &TangentVector, shape: &ShapeMatrix, frame: &AdaptedFrame) -> JacobiData {
    let k0dot = -apply_shape(x, shape, frame).j();
    decompose_initial_data(x, &k0dot, &frame.j_nu)
}
