//! Compact hypersurfaces that are star-shaped about a center: geodesic
//! spheres in closed form and radial graphs over the unit sphere of the
//! center's tangent space.
//!
//! A direction `x ∈ S^3` names the unit vector `U(x) = sum x_k f_k` in the
//! scene's center frame `f = (e1, i e1, e2, i e2)` (transported from the ball
//! origin), and the surface point is `exp(center, ρ(x) U(x))`.

mod direction;
mod frame;

pub use direction::Direction;
pub use frame::{AdaptedFrame, ShapeMatrix};

use nalgebra::{Matrix3, Matrix4x3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{basis, real, from_ball, origin_frame, transport_to, BallPoint, Geodesic, Point, TangentVector};
use crate::tolerances::Tolerances;

/// Degree-two perturbation `ρ(x) = R (1 + epsilon q(x))` with
/// `q(x) = sum_m coeffs[m] x_i x_j` over the pairs `i <= j` in lexicographic
/// order `(00, 01, 02, 03, 11, 12, 13, 22, 23, 33)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub epsilon: f64,
    pub coeffs: [f64; 10],
}

const PAIRS: [(usize, usize); 10] = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];

impl Perturbation {
    pub fn none() -> Self {
        Self { epsilon: 0.0, coeffs: [0.0; 10] }
    }

    fn q(&self, x: &[f64; 4]) -> f64 {
        PAIRS.iter().zip(&self.coeffs).map(|(&(i, j), c)| c * x[i] * x[j]).sum()
    }

    fn grad_q(&self, x: &[f64; 4]) -> [f64; 4] {
        let mut g = [0.0; 4];
        for (&(i, j), c) in PAIRS.iter().zip(&self.coeffs) {
            g[i] += c * x[j];
            g[j] += c * x[i];
        }
        g
    }
}

/// Scene file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SceneSpec {
    Sphere { center: BallPoint, radius: f64 },
    RadialGraph { center: BallPoint, base_radius: f64, perturbation: Perturbation },
}

impl SceneSpec {
    pub fn sphere(center: BallPoint, radius: f64) -> Self {
        SceneSpec::Sphere { center, radius }
    }

    pub fn center(&self) -> BallPoint {
        match self {
            SceneSpec::Sphere { center, .. } | SceneSpec::RadialGraph { center, .. } => *center,
        }
    }
}

/// Everything the billiard needs at one surface point.
#[derive(Debug, Clone)]
pub struct SurfaceData {
    pub direction: Direction,
    pub point: Point,
    /// `dP` along the three tangent directions of the chart.
    pub tangents: [TangentVector; 3],
    pub frame: AdaptedFrame,
    pub shape: ShapeMatrix,
}

/// A validated hypersurface.
#[derive(Debug, Clone)]
pub struct Scene {
    spec: SceneSpec,
    center: Point,
    center_frame: [TangentVector; 4],
    tol: Tolerances,
}

impl Scene {
    pub fn new(spec: SceneSpec) -> Result<Self> {
        Self::with_tolerances(spec, Tolerances::default())
    }

    /// Validates the spec and runs the load-time convexity check.
    pub fn with_tolerances(spec: SceneSpec, tol: Tolerances) -> Result<Self> {
        let center = from_ball(&spec.center())?;
        match &spec {
            SceneSpec::Sphere { radius, .. } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidScene(format!("radius must be positive, got {radius}")));
                }
            }
            SceneSpec::RadialGraph { base_radius, perturbation, .. } => {
                if !(base_radius.is_finite() && *base_radius > 0.0) {
                    return Err(Error::InvalidScene(format!("base_radius must be positive, got {base_radius}")));
                }
                if !perturbation.epsilon.is_finite() || perturbation.coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidScene("perturbation must be finite".into()));
                }
            }
        }
        let center_frame = origin_frame().map(|f| transport_to(&f, &center));
        let scene = Scene { spec, center, center_frame, tol };
        scene.validate()?;
        Ok(scene)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SceneSpec = serde_json::from_str(text).map_err(|e| Error::InvalidScene(e.to_string()))?;
        Self::new(spec)
    }

    fn validate(&self) -> Result<()> {
        if let SceneSpec::RadialGraph { .. } = self.spec {
            let samples = Direction::quasi_uniform(self.tol.convexity_samples);
            if let Some(bad) = samples.iter().map(|x| self.radius_at(x)).find(|r| !(*r > 0.0)) {
                return Err(Error::InvalidScene(format!("radial function is not positive (value {bad})")));
            }
            let min = self.min_sampled_eigenvalue(&samples)?;
            if min <= self.tol.convexity_min_eig {
                return Err(Error::ConvexityViolation { eigenvalue: min });
            }
        }
        Ok(())
    }

    /// Smallest shape-operator eigenvalue over the given directions.
    pub fn min_sampled_eigenvalue(&self, samples: &[Direction]) -> Result<f64> {
        let mut min = f64::INFINITY;
        for x in samples {
            let frame = self.adapted_frame(x)?;
            min = min.min(self.shape_matrix(x, &frame)?.min_eigenvalue());
        }
        Ok(min)
    }

    pub fn spec(&self) -> &SceneSpec {
        &self.spec
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    /// Orthonormal frame `(e1, i e1, e2, i e2)` transported from the ball origin to the center.
    pub fn center_frame(&self) -> &[TangentVector; 4] {
        &self.center_frame
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn set_tolerances(&mut self, tol: Tolerances) {
        self.tol = tol;
    }

    /// Radius for spheres, `None` for radial graphs.
    pub fn sphere_radius(&self) -> Option<f64> {
        match self.spec {
            SceneSpec::Sphere { radius, .. } => Some(radius),
            SceneSpec::RadialGraph { .. } => None,
        }
    }

    /// The center frame transported to `q` along the geodesic from the center.
    pub fn frame_at(&self, q: &Point) -> [TangentVector; 4] {
        self.center_frame.clone().map(|f| transport_to(&f, q))
    }

    pub fn radius_at(&self, x: &Direction) -> f64 {
        match &self.spec {
            SceneSpec::Sphere { radius, .. } => *radius,
            SceneSpec::RadialGraph { base_radius, perturbation, .. } => {
                base_radius * (1.0 + perturbation.epsilon * perturbation.q(&x.coords()))
            }
        }
    }

    /// Derivatives of `ρ` along the tangent frame of `x`.
    fn radius_derivatives(&self, x: &Direction) -> [f64; 3] {
        match &self.spec {
            SceneSpec::Sphere { .. } => [0.0; 3],
            SceneSpec::RadialGraph { base_radius, perturbation, .. } => {
                let g = perturbation.grad_q(&x.coords());
                let s = base_radius * perturbation.epsilon;
                x.tangent_coords(g).map(|c| s * c)
            }
        }
    }

    /// `U(x)` at the center.
    pub fn unit_vector(&self, x: &Direction) -> TangentVector {
        TangentVector::combine(&self.center_frame, &x.coords())
    }

    fn radial_geodesic(&self, x: &Direction) -> Geodesic {
        Geodesic::new(&self.center, &self.unit_vector(x))
    }

    pub fn surface_point(&self, x: &Direction) -> Point {
        self.radial_geodesic(x).point(self.radius_at(x))
    }

    /// Derivatives of the chart `x -> surface_point(x)` along the tangent frame of `x`.
    pub fn chart_tangents(&self, x: &Direction) -> [TangentVector; 3] {
        let rho = self.radius_at(x);
        let drho = self.radius_derivatives(x);
        let c = self.center.rep();
        let u = self.unit_vector(x);
        let radial = c * real(rho.sinh()) + u.vec() * real(rho.cosh());
        let p = self.surface_point(x);
        let t = x.tangent_basis();
        std::array::from_fn(|k| {
            let ut = TangentVector::combine(&self.center_frame, &t[k]);
            let v = radial * real(drho[k]) + ut.vec() * real(rho.sinh());
            p.project(&v)
        })
    }

    /// Unit normal pointing to the side of the center.
    pub fn inward_normal(&self, x: &Direction) -> Result<TangentVector> {
        let geo = self.radial_geodesic(x);
        let rho = self.radius_at(x);
        let outward = geo.velocity(rho);
        if self.sphere_radius().is_some() {
            return Ok(-outward);
        }
        let p = outward.base().clone();
        let tangents = self.chart_tangents(x);
        let frame = self.frame_at(&p);
        let m = Matrix4x3::from_fn(|i, k| frame[i].dot(&tangents[k]));
        let sv = m.singular_values();
        let condition = sv.max() / sv.min();
        if !(condition <= 1e8) {
            return Err(Error::DegenerateChart { condition });
        }
        // generalized cross product of the three columns
        let minor = |skip: usize| {
            let rows: Vec<usize> = (0..4).filter(|&r| r != skip).collect();
            Matrix3::from_fn(|i, k| m[(rows[i], k)]).determinant()
        };
        let n: Vec<f64> = (0..4).map(|i| if i % 2 == 0 { minor(i) } else { -minor(i) }).collect();
        let nu = TangentVector::combine(&frame, &n).normalized();
        Ok(if nu.dot(&outward) > 0.0 { -nu } else { nu })
    }

    /// `(ν, Jν, e, Je)` with `e` the Gram-Schmidt projection of the ambient
    /// `e2` direction against `ν, Jν`, falling back to `e1` when that
    /// projection is shorter than `1e-6`.
    pub fn adapted_frame(&self, x: &Direction) -> Result<AdaptedFrame> {
        let nu = self.inward_normal(x)?;
        Ok(adapted_frame_for(&nu))
    }

    /// Shape matrix in the given adapted frame: closed form for spheres,
    /// central differences of the transported normal for radial graphs.
    pub fn shape_matrix(&self, x: &Direction, frame: &AdaptedFrame) -> Result<ShapeMatrix> {
        if let Some(r) = self.sphere_radius() {
            return Ok(ShapeMatrix::sphere(r));
        }
        let h = self.tol.h_shape;
        let p = &frame.p;
        let tangents = self.chart_tangents(x);
        let basis3 = frame.tangent_basis();
        let mut dp = Matrix3::zeros();
        let mut snu = Matrix3::zeros();
        for k in 0..3 {
            let mut delta = [0.0; 3];
            delta[k] = h;
            let plus = transport_to(&self.inward_normal(&x.moved(delta))?, p);
            delta[k] = -h;
            let minus = transport_to(&self.inward_normal(&x.moved(delta))?, p);
            let dnu = (plus - minus).scale(-0.5 / h);
            let tk = tangents[k].coords(&basis3);
            let sk = dnu.coords(&basis3);
            for i in 0..3 {
                dp[(i, k)] = tk[i];
                snu[(i, k)] = sk[i];
            }
        }
        let inv = dp.try_inverse().ok_or(Error::DegenerateChart { condition: f64::INFINITY })?;
        Ok(ShapeMatrix::symmetrized(snu * inv))
    }

    /// Point, tangents, adapted frame and shape matrix at `x`.
    pub fn local(&self, x: &Direction) -> Result<SurfaceData> {
        let frame = self.adapted_frame(x)?;
        let shape = self.shape_matrix(x, &frame)?;
        Ok(SurfaceData { direction: *x, point: frame.p.clone(), tangents: self.chart_tangents(x), frame, shape })
    }

    /// Direction of `q` seen from the center and its distance, or `None` at the center.
    pub fn direction_of(&self, q: &Point) -> Option<(Direction, f64)> {
        let v = self.center.log(q);
        let d = v.norm();
        if d == 0.0 {
            return None;
        }
        Direction::new(v.coords(&self.center_frame)).map(|x| (x, d))
    }

    /// Whether `q` lies in the exterior; `OnSurface` within the surface gap.
    pub fn is_exterior(&self, q: &Point) -> Result<bool> {
        let Some((x, d)) = self.direction_of(q) else {
            return Ok(false);
        };
        let gap = d - self.radius_at(&x);
        if gap.abs() <= self.tol.surface_gap {
            return Err(Error::OnSurface { gap });
        }
        Ok(gap > 0.0)
    }

    /// Sampled `(min, max)` of `d(q, ·)` over the surface.
    pub fn distance_bounds(&self, q: &Point, samples: &[Direction]) -> (f64, f64) {
        samples.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), x| {
            let d = q.distance(&self.surface_point(x));
            (lo.min(d), hi.max(d))
        })
    }
}

/// Adapted frame for a given unit normal (see [`Scene::adapted_frame`]).
pub fn adapted_frame_for(nu: &TangentVector) -> AdaptedFrame {
    let p = nu.base().clone();
    let jnu = nu.j();
    let strip = |r: TangentVector| r.clone() - nu.scale(nu.dot(&r)) - jnu.scale(jnu.dot(&r));
    let mut e = strip(p.project(&basis(1)));
    if e.norm() < 1e-6 {
        e = strip(p.project(&basis(0)));
    }
    // second pass removes the rounding left by the first
    AdaptedFrame::new(nu.clone(), strip(e.normalized()).normalized())
}

#[cfg(test)]
mod tests;
