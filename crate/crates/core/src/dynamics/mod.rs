//! Orbits of the billiard map, complex lines, the planar circle oracle,
//! periodic-orbit search and the symplectic area of triangles.

mod area;
mod h2;
mod periodic;

pub use area::{area_gradient, gauss_legendre, symplectic_area, symplectic_area_cone};
pub use h2::{
    h2_circle_billiard, h2_circle_billiard_at, h2_distance, ideal_triangle_inradius, periodic_radius, tangency_angle,
    three_periodic_threshold,
};
pub use periodic::{continue_periodic, find_periodic_orbit, find_periodic_orbit_on_line, sphere_seed, PeriodicOrbit};

use crate::billiard::{billiard_inverse_step, billiard_step, Tangency};
use crate::error::Error;
use crate::geometry::{hermitian_form, real, AmbientVector, Isometry, Point, TangentVector};
use crate::hypersurface::Scene;

/// The complex line through `anchor` tangent to `span_C{direction}`.
#[derive(Debug, Clone)]
pub struct ComplexLine {
    anchor: Point,
    direction: TangentVector,
    polar: AmbientVector,
}

impl ComplexLine {
    pub fn new(anchor: &Point, direction: &TangentVector) -> Self {
        let u = direction.at(anchor).normalized();
        // unit vector Hermitian-orthogonal to the anchor and u
        let p = anchor.rep();
        let candidates = (0..3).map(|k| {
            let x = crate::geometry::basis(k);
            let x = x - p * (hermitian_form(p, &x) / hermitian_form(p, p));
            x - u.vec() * hermitian_form(u.vec(), &x)
        });
        let n = candidates
            .max_by(|a, b| hermitian_form(a, a).re.total_cmp(&hermitian_form(b, b).re))
            .expect("three candidates");
        let n = n * real(1.0 / hermitian_form(&n, &n).re.sqrt());
        Self { anchor: anchor.clone(), direction: u, polar: n }
    }

    /// The line through two distinct points.
    pub fn through(p: &Point, q: &Point) -> Option<Self> {
        let v = p.log(q);
        (v.norm() > 0.0).then(|| Self::new(p, &v))
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn direction(&self) -> &TangentVector {
        &self.direction
    }

    /// Polar vector `n`, `<n, n> = 1`, Hermitian-orthogonal to the line.
    pub fn polar(&self) -> &AmbientVector {
        &self.polar
    }

    pub fn reflection(&self) -> Isometry {
        Isometry::complex_reflection(&self.polar)
    }

    pub fn reflect(&self, q: &Point) -> Point {
        self.reflection().apply(q)
    }

    /// Point of the line at `exp(anchor, a u + b Ju)`.
    pub fn point(&self, a: f64, b: f64) -> Point {
        self.anchor.exp(&(self.direction.scale(a) + self.direction.j().scale(b)))
    }
}

/// `d(q, L) = d(q, ρ_L q) / 2`, with `ρ_L` the reflection fixing `L`.
pub fn complex_line_distance(q: &Point, line: &ComplexLine) -> f64 {
    0.5 * q.distance(&line.reflect(q))
}

/// A forward or backward orbit with its tangencies.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub points: Vec<Point>,
    /// `tangencies[i]` links `points[i]` and `points[i + 1]`.
    pub tangencies: Vec<Tangency>,
    pub residuals: Vec<f64>,
    /// Set when the orbit stopped early; `points` holds what was computed.
    pub stopped: Option<Error>,
}

impl Orbit {
    pub fn is_complete(&self) -> bool {
        self.stopped.is_none()
    }

    pub fn last(&self) -> &Point {
        self.points.last().expect("orbit has its start point")
    }
}

fn run(q0: &Point, n: usize, mut step: impl FnMut(&Point) -> crate::Result<crate::billiard::Step>) -> Orbit {
    let mut orbit = Orbit { points: vec![q0.clone()], tangencies: Vec::new(), residuals: Vec::new(), stopped: None };
    for _ in 0..n {
        match step(orbit.last()) {
            Ok(s) => {
                orbit.points.push(s.image);
                orbit.tangencies.push(s.tangency);
                orbit.residuals.push(s.residual);
            }
            Err(e) => {
                orbit.stopped = Some(e);
                break;
            }
        }
    }
    orbit
}

/// `q0, B q0, ..., B^n q0`, stopping at the first failure.
pub fn iterate(scene: &Scene, q0: &Point, n: usize) -> Orbit {
    run(q0, n, |q| billiard_step(scene, q))
}

/// `q0, B^{-1} q0, ..., B^{-n} q0`.
pub fn iterate_inverse(scene: &Scene, q0: &Point, n: usize) -> Orbit {
    run(q0, n, |q| billiard_inverse_step(scene, q))
}

#[cfg(test)]
mod tests;
