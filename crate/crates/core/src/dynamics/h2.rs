//! Outer billiard about a circle in the hyperbolic plane of curvature -4,
//! modelled on the unit disc with `tanh d(0, z) = |z|`. Self-contained: no
//! use of the four-dimensional code.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Distance in the curvature -4 disc.
pub fn h2_distance(a: Complex64, b: Complex64) -> f64 {
    let m = (a - b) / (Complex64::new(1.0, 0.0) - a.conj() * b);
    m.norm().atanh()
}

/// Disc automorphism moving `c` to the origin.
fn to_origin(c: Complex64, z: Complex64) -> Complex64 {
    (z - c) / (Complex64::new(1.0, 0.0) - c.conj() * z)
}

fn from_origin(c: Complex64, z: Complex64) -> Complex64 {
    (z + c) / (Complex64::new(1.0, 0.0) + c.conj() * z)
}

/// Tangency angle at the center: the right triangle (center, tangency point, z)
/// has legs `R` and hypotenuse `d`; after rescaling to curvature -1 (lengths
/// double) `cos α = tanh 2R / tanh 2d`.
pub fn tangency_angle(radius: f64, d: f64) -> f64 {
    ((2.0 * radius).tanh() / (2.0 * d).tanh()).acos()
}

/// Image of `z` under the outer billiard about the circle of the given
/// radius centered at the origin. The tangent leaf runs clockwise, so the
/// image is `z` rotated by `-2α`.
pub fn h2_circle_billiard(radius: f64, z: Complex64) -> Result<Complex64> {
    let d = z.norm().atanh();
    if !(d > radius) {
        return Err(Error::InsideDisc { distance: d, radius });
    }
    let alpha = tangency_angle(radius, d);
    Ok(z * Complex64::from_polar(1.0, -2.0 * alpha))
}

/// Same, for a circle centered at `center`.
pub fn h2_circle_billiard_at(center: Complex64, radius: f64, z: Complex64) -> Result<Complex64> {
    Ok(from_origin(center, h2_circle_billiard(radius, to_origin(center, z))?))
}

/// Distance `d` at which the circle billiard is `k`-periodic with rotation
/// number `1/k`: `cos(π/k) = tanh 2R / tanh 2d`. `None` when no such orbit exists.
pub fn periodic_radius(radius: f64, k: usize) -> Option<f64> {
    if k < 3 {
        return None;
    }
    let v = (2.0 * radius).tanh() / (std::f64::consts::PI / k as f64).cos();
    (v < 1.0).then(|| 0.5 * v.atanh())
}

/// Inradius of an ideal triangle in the curvature -1 plane, from the
/// construction with vertices at the cube roots of unity in the Poincaré
/// disc: the side through `1` and `e^{2πi/3}` is the circle of center
/// `2 e^{iπ/3}` and radius `√3`, whose nearest point to the origin has
/// Euclidean modulus `2 - √3`.
pub fn ideal_triangle_inradius() -> f64 {
    let r = 2.0 - 3f64.sqrt();
    2.0 * r.atanh()
}

/// Largest radius of a circle in curvature -4 admitting 3-periodic orbits:
/// half the curvature -1 ideal-triangle inradius.
pub fn three_periodic_threshold() -> f64 {
    0.5 * ideal_triangle_inradius()
}
