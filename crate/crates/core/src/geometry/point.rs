use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::ambient::{hermitian_form, real, AmbientVector, I};
use super::isometry::Isometry;
use crate::error::{Error, Result};
use crate::tolerances::LOG_DEGENERATE;

/// A point of the complex hyperbolic plane, stored as a representative
/// `z` with `<z,z> = -1`. Representatives differing by a unit phase are the
/// same point; every geometric query here is phase-invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    rep: AmbientVector,
}

impl Point {
    pub fn from_ambient(z: AmbientVector) -> Result<Self> {
        let n = hermitian_form(&z, &z).re;
        if !(n < 0.0) || !n.is_finite() {
            return Err(Error::NotTimelike { value: n });
        }
        Ok(Self { rep: z * real(1.0 / (-n).sqrt()) })
    }

    /// Renormalizes a representative that is known to be close to the hyperboloid.
    pub(crate) fn renormalized(z: AmbientVector) -> Self {
        let n = hermitian_form(&z, &z).re;
        debug_assert!(n < 0.0, "renormalize {n} {z:?}");
        Self { rep: z * real(1.0 / (-n).sqrt()) }
    }

    /// The ball-model origin, represented by `(0, 0, 1)`.
    pub fn origin() -> Self {
        Self { rep: super::ambient::basis(2) }
    }

    pub fn rep(&self) -> &AmbientVector {
        &self.rep
    }

    /// `|<z,z> + 1|` relative to the Euclidean size `|z|^2` of the representative.
    pub fn normalization_defect(&self) -> f64 {
        (hermitian_form(&self.rep, &self.rep).re + 1.0).abs() / self.rep.norm_squared()
    }

    /// Representative whose largest-modulus component is real and positive.
    pub fn canonical(&self) -> Self {
        let k = (0..3)
            .max_by(|&a, &b| self.rep[a].norm().total_cmp(&self.rep[b].norm()))
            .unwrap_or(2);
        let phase = self.rep[k].conj() / self.rep[k].norm();
        Self { rep: self.rep * phase }
    }

    /// Unit phase `mu` with `other.rep = mu * self.rep` (both representing one point).
    pub fn phase_to(&self, other: &Point) -> Complex64 {
        let mu = -hermitian_form(&self.rep, &other.rep);
        mu / mu.norm()
    }

    /// `sinh^2 d = <w,w> / -<q,q>` with `w` the part of `q` orthogonal to `p`;
    /// scale-invariant, so exactly symmetric up to rounding.
    pub fn distance(&self, other: &Point) -> f64 {
        let w = self.horizontal_part(&other.rep);
        let qq = -hermitian_form(&other.rep, &other.rep).re;
        (hermitian_form(&w, &w).re / qq).max(0.0).sqrt().asinh()
    }

    /// Equality up to a distance tolerance.
    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// Component of `z` orthogonal to this point: `z - (<p,z> / <p,p>) p`.
    fn horizontal_part(&self, z: &AmbientVector) -> AmbientVector {
        let pp = hermitian_form(&self.rep, &self.rep).re;
        z - self.rep * (hermitian_form(&self.rep, z) / pp)
    }

    /// Horizontal projection of an ambient vector onto `T_p`.
    pub fn project(&self, z: &AmbientVector) -> TangentVector {
        TangentVector { base: self.clone(), vec: self.horizontal_part(z) }
    }

    pub fn zero_vector(&self) -> TangentVector {
        TangentVector { base: self.clone(), vec: AmbientVector::zeros() }
    }

    /// Riemannian exponential map; `v` may be based at any representative of this point.
    pub fn exp(&self, v: &TangentVector) -> Point {
        let v = v.at(self);
        let n = v.norm();
        if n == 0.0 {
            return self.clone();
        }
        Point::renormalized(self.rep * real(n.cosh()) + v.vec * real(n.sinh() / n))
    }

    /// Inverse of [`Point::exp`]. Returns the zero vector for coincident points.
    pub fn log(&self, q: &Point) -> TangentVector {
        let c = hermitian_form(&self.rep, &q.rep);
        if c.norm() == 0.0 {
            return self.zero_vector();
        }
        // align q so that <p, q'> is real negative
        let aligned = q.rep * (-c.conj() / c.norm());
        let w = self.horizontal_part(&aligned);
        let s = hermitian_form(&w, &w).re.max(0.0).sqrt();
        let d = s.asinh();
        if d <= LOG_DEGENERATE {
            return self.zero_vector();
        }
        TangentVector { base: self.clone(), vec: w * real(d / s) }
    }
}

/// A tangent vector, stored as an ambient vector horizontal at a fixed
/// representative of its base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: Point,
    vec: AmbientVector,
}

impl TangentVector {
    /// Builds a tangent vector, projecting `vec` horizontally at `base`.
    pub fn new(base: &Point, vec: AmbientVector) -> Self {
        base.project(&vec)
    }

    pub(crate) fn from_parts(base: Point, vec: AmbientVector) -> Self {
        Self { base, vec }
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn vec(&self) -> &AmbientVector {
        &self.vec
    }

    /// `|<base, vec>|`, zero for a valid tangent vector.
    pub fn horizontality_defect(&self) -> f64 {
        hermitian_form(&self.base.rep, &self.vec).norm()
    }

    /// The same vector expressed at another representative of the same base point.
    pub fn at(&self, base: &Point) -> TangentVector {
        if base.rep == self.base.rep {
            return self.clone();
        }
        let mu = self.base.phase_to(base);
        TangentVector { base: base.clone(), vec: self.vec * mu }
    }

    /// Riemannian inner product `Re <x, y>`.
    pub fn dot(&self, other: &TangentVector) -> f64 {
        let other = other.at(&self.base);
        hermitian_form(&self.vec, &other.vec).re
    }

    /// Kahler form `omega(x, y) = <J x, y> = Im <x, y>`.
    pub fn omega(&self, other: &TangentVector) -> f64 {
        let other = other.at(&self.base);
        hermitian_form(&self.vec, &other.vec).im
    }

    pub fn norm_sqr(&self) -> f64 {
        hermitian_form(&self.vec, &self.vec).re.max(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> TangentVector {
        let n = self.norm();
        self.scale(1.0 / n)
    }

    /// Complex structure: multiplication by `i`.
    pub fn j(&self) -> TangentVector {
        TangentVector { base: self.base.clone(), vec: self.vec * I }
    }

    pub fn scale(&self, s: f64) -> TangentVector {
        TangentVector { base: self.base.clone(), vec: self.vec * Complex64::new(s, 0.0) }
    }

    pub fn is_finite(&self) -> bool {
        self.vec.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Components against a list of (orthonormal) vectors at the same point.
    pub fn coords<const N: usize>(&self, frame: &[TangentVector; N]) -> [f64; N] {
        std::array::from_fn(|k| frame[k].dot(self))
    }

    /// Linear combination `sum c_k frame_k`.
    pub fn combine(frame: &[TangentVector], coeffs: &[f64]) -> TangentVector {
        let base = frame[0].base.clone();
        let mut vec = AmbientVector::zeros();
        for (f, &c) in frame.iter().zip(coeffs) {
            vec += f.at(&base).vec * Complex64::new(c, 0.0);
        }
        TangentVector { base, vec }
    }
}

impl Add for TangentVector {
    type Output = TangentVector;
    fn add(self, rhs: TangentVector) -> TangentVector {
        let rhs = rhs.at(&self.base);
        TangentVector { vec: self.vec + rhs.vec, base: self.base }
    }
}

impl Sub for TangentVector {
    type Output = TangentVector;
    fn sub(self, rhs: TangentVector) -> TangentVector {
        let rhs = rhs.at(&self.base);
        TangentVector { vec: self.vec - rhs.vec, base: self.base }
    }
}

impl Neg for TangentVector {
    type Output = TangentVector;
    fn neg(self) -> TangentVector {
        TangentVector { vec: -self.vec, base: self.base }
    }
}

impl Mul<f64> for TangentVector {
    type Output = TangentVector;
    fn mul(self, s: f64) -> TangentVector {
        self.scale(s)
    }
}

/// Unit-speed geodesic `t -> cosh(t) p + sinh(t) u`.
#[derive(Debug, Clone)]
pub struct Geodesic {
    start: Point,
    dir: TangentVector,
}

impl Geodesic {
    /// `dir` is normalized; it must be nonzero.
    pub fn new(start: &Point, dir: &TangentVector) -> Self {
        let dir = dir.at(start).normalized();
        Self { start: start.clone(), dir }
    }

    /// Geodesic from `p` towards `q`, with the distance between them.
    pub fn between(p: &Point, q: &Point) -> Option<(Geodesic, f64)> {
        let v = p.log(q);
        let d = v.norm();
        (d > 0.0).then(|| (Geodesic { start: p.clone(), dir: v.scale(1.0 / d) }, d))
    }

    pub fn start(&self) -> &Point {
        &self.start
    }

    pub fn direction(&self) -> &TangentVector {
        &self.dir
    }

    pub fn point(&self, t: f64) -> Point {
        Point::renormalized(self.start.rep * real(t.cosh()) + self.dir.vec * real(t.sinh()))
    }

    pub fn velocity(&self, t: f64) -> TangentVector {
        TangentVector {
            base: self.point(t),
            vec: self.start.rep * real(t.sinh()) + self.dir.vec * real(t.cosh()),
        }
    }

    pub fn transvection(&self, t: f64) -> Isometry {
        Isometry::transvection(&self.start, &self.dir, t)
    }

    /// Parallel transport of `x` (based at the start) to `point(t)`.
    pub fn transport(&self, t: f64, x: &TangentVector) -> TangentVector {
        let x = x.at(&self.start);
        let moved = self.transvection(t).apply_vector(&x);
        TangentVector { base: self.point(t), vec: moved.vec }
    }
}

/// Exponential map (free-function form).
pub fn exp(p: &Point, v: &TangentVector) -> Point {
    p.exp(v)
}

pub fn log(p: &Point, q: &Point) -> TangentVector {
    p.log(q)
}

pub fn distance(p: &Point, q: &Point) -> f64 {
    p.distance(q)
}

/// Point at parameter `t` on the geodesic through `p` with unit velocity `u`.
pub fn geodesic(p: &Point, u: &TangentVector, t: f64) -> Point {
    Geodesic::new(p, u).point(t)
}

/// Parallel transport along `t -> geodesic(p, u, t)`.
pub fn parallel_transport(p: &Point, u: &TangentVector, t: f64, x: &TangentVector) -> TangentVector {
    Geodesic::new(p, u).transport(t, x)
}

/// Parallel transport along the geodesic segment from `x`'s base point to `q`,
/// expressed at `q`'s own representative.
pub fn transport_to(x: &TangentVector, q: &Point) -> TangentVector {
    match Geodesic::between(x.base(), q) {
        Some((geo, d)) => geo.transport(d, x).at(q),
        None => x.at(q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ball::{from_ball, BallPoint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng) -> Point {
        loop {
            let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-0.8..0.8));
            let b = BallPoint::from_coords(c);
            if b.norm_sqr() > 0.8 {
                continue;
            }
            if let Ok(p) = from_ball(&b) {
                let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
                return Point { rep: p.rep * phase };
            }
        }
    }

    fn random_tangent(rng: &mut ChaCha8Rng, p: &Point) -> TangentVector {
        let z = AmbientVector::from_fn(|_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        p.project(&z)
    }

    #[test]
    fn construction_normalizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = random_point(&mut rng);
            assert!(p.normalization_defect() <= 1e-12);
            let v = random_tangent(&mut rng, &p);
            assert!(v.horizontality_defect() <= 1e-12);
        }
        assert!(Point::from_ambient(super::super::ambient::basis(0)).is_err());
    }

    #[test]
    fn distance_basic_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let q = random_point(&mut rng);
            assert_eq!(p.distance(&p), 0.0);
            assert!((p.distance(&q) - q.distance(&p)).abs() <= 1e-12);
            let phased = Point { rep: q.rep * Complex64::from_polar(1.0, 1.1) };
            assert!((p.distance(&q) - p.distance(&phased)).abs() <= 1e-12);
            assert!(q.approx_eq(&phased, 1e-9));
        }
    }

    #[test]
    fn exp_is_unit_speed() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = random_point(&mut rng);
            let u = random_tangent(&mut rng, &p).normalized();
            let geo = Geodesic::new(&p, &u);
            assert!(geo.point(0.0).approx_eq(&p, 1e-15));
            for k in 0..=10 {
                let t = 0.5 * k as f64;
                let q = geo.point(t);
                assert!(q.normalization_defect() <= 1e-15);
                assert!((p.distance(&q) - t).abs() <= 1e-10, "t={t} d={}", p.distance(&q));
                assert!((geo.velocity(t).norm() - 1.0).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn log_inverts_exp() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let v = random_tangent(&mut rng, &p);
            let v = v.scale(rng.gen_range(0.0..3.0) / v.norm());
            let q = p.exp(&v);
            let back = p.log(&q);
            assert!((back.clone() - v.clone()).norm() <= 1e-10);
            assert!((back.norm() - p.distance(&q)).abs() <= 1e-12);
            // q with a different representative
            let q2 = Point { rep: q.rep * Complex64::from_polar(1.0, -0.4) };
            assert!(p.exp(&p.log(&q2)).approx_eq(&q2, 1e-10));
        }
        let p = random_point(&mut rng);
        assert_eq!(p.log(&p).norm(), 0.0);
    }

    #[test]
    fn canonical_gauge_is_phase_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let p = random_point(&mut rng);
        let q = Point { rep: p.rep * Complex64::from_polar(1.0, 2.0) };
        let (a, b) = (p.canonical(), q.canonical());
        assert!((a.rep - b.rep).norm() <= 1e-14);
    }

    #[test]
    fn rebasing_preserves_geometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let p = random_point(&mut rng);
        let x = random_tangent(&mut rng, &p);
        let y = random_tangent(&mut rng, &p);
        let p2 = Point { rep: p.rep * Complex64::from_polar(1.0, 0.7) };
        let x2 = x.at(&p2);
        assert!(x2.horizontality_defect() <= 1e-14);
        assert!((x2.dot(&y) - x.dot(&y)).abs() <= 1e-14);
        assert!((x2.omega(&y) - x.omega(&y)).abs() <= 1e-14);
        // omega(x, y) = <Jx, y>
        assert!((x.omega(&y) - x.j().dot(&y)).abs() <= 1e-14);
    }
}
