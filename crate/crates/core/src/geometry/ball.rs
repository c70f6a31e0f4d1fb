//! Unit-ball chart `B = {(z, w) : |z|^2 + |w|^2 < 1}` used for input and output.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ambient::AmbientVector;
use super::point::{Point, TangentVector};
use crate::error::{Error, Result};

/// Ball-model coordinates. Serializes as `[Re z, Im z, Re w, Im w]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct BallPoint {
    pub z: Complex64,
    pub w: Complex64,
}

impl BallPoint {
    pub fn new(z: Complex64, w: Complex64) -> Self {
        Self { z, w }
    }

    pub fn from_coords(c: [f64; 4]) -> Self {
        Self { z: Complex64::new(c[0], c[1]), w: Complex64::new(c[2], c[3]) }
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.z.re, self.z.im, self.w.re, self.w.im]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.z.norm_sqr() + self.w.norm_sqr()
    }
}

impl From<[f64; 4]> for BallPoint {
    fn from(c: [f64; 4]) -> Self {
        BallPoint::from_coords(c)
    }
}

impl From<BallPoint> for [f64; 4] {
    fn from(b: BallPoint) -> Self {
        b.coords()
    }
}

/// `(z, w) -> (z, w, 1) / sqrt(1 - |z|^2 - |w|^2)`.
pub fn from_ball(b: &BallPoint) -> Result<Point> {
    let n = b.norm_sqr();
    if !(n < 1.0 - 1e-12) || !n.is_finite() {
        return Err(Error::BallBoundary { norm_sqr: n });
    }
    let s = 1.0 / (1.0 - n).sqrt();
    Point::from_ambient(AmbientVector::new(b.z * s, b.w * s, Complex64::new(s, 0.0)))
}

pub fn to_ball(p: &Point) -> BallPoint {
    let z = p.rep();
    BallPoint { z: z[0] / z[2], w: z[1] / z[2] }
}

/// Differential of [`to_ball`]: ball-coordinate velocity of a tangent vector.
pub fn ball_velocity(v: &TangentVector) -> [Complex64; 2] {
    let p = v.base().rep();
    let x = v.vec();
    let p3 = p[2];
    [(x[0] * p3 - p[0] * x[2]) / (p3 * p3), (x[1] * p3 - p[1] * x[2]) / (p3 * p3)]
}

/// Tangent vector at `from_ball(b)` whose ball-coordinate velocity is `dv`.
pub fn tangent_from_ball(b: &BallPoint, dv: [Complex64; 2]) -> Result<TangentVector> {
    let p = from_ball(b)?;
    let n = b.norm_sqr();
    let s = 1.0 / (1.0 - n).sqrt();
    // d/ds of (b + s dv, 1) / sqrt(1 - |b + s dv|^2)
    let dn = 2.0 * (b.z.conj() * dv[0] + b.w.conj() * dv[1]).re;
    let ds = 0.5 * s * s * s * dn;
    let raw = AmbientVector::new(
        dv[0] * s + b.z * ds,
        dv[1] * s + b.w * ds,
        Complex64::new(ds, 0.0),
    );
    Ok(p.project(&raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ambient::hermitian_form;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_ball(rng: &mut ChaCha8Rng) -> BallPoint {
        loop {
            let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let b = BallPoint::from_coords(c);
            if b.norm_sqr() < 0.98 {
                return b;
            }
        }
    }

    #[test]
    fn origin_maps_to_e3() {
        let p = from_ball(&BallPoint::from_coords([0.0; 4])).unwrap();
        assert_eq!(*p.rep(), AmbientVector::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let b = random_ball(&mut rng);
            let p = from_ball(&b).unwrap();
            assert!((hermitian_form(p.rep(), p.rep()).re + 1.0).abs() <= 1e-12);
            let back = to_ball(&p);
            assert!((back.z - b.z).norm() <= 1e-12 && (back.w - b.w).norm() <= 1e-12);
        }
    }

    #[test]
    fn boundary_rejected() {
        assert!(matches!(
            from_ball(&BallPoint::from_coords([0.6, 0.0, 0.8, 0.0])),
            Err(Error::BallBoundary { .. })
        ));
        assert!(from_ball(&BallPoint::from_coords([2.0, 0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn half_radius_distance() {
        let o = from_ball(&BallPoint::from_coords([0.0; 4])).unwrap();
        let q = from_ball(&BallPoint::from_coords([0.5, 0.0, 0.0, 0.0])).unwrap();
        let expected = (1.0 / 0.75f64.sqrt()).acosh();
        assert!((o.distance(&q) - expected).abs() <= 1e-14);
        assert!((expected - 0.549_306_144_334_054_8).abs() <= 1e-12);
    }

    #[test]
    fn velocity_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let b = random_ball(&mut rng);
            let dv = [
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ];
            let v = tangent_from_ball(&b, dv).unwrap();
            let back = ball_velocity(&v);
            assert!((back[0] - dv[0]).norm() <= 1e-11 && (back[1] - dv[1]).norm() <= 1e-11);
        }
    }

    #[test]
    fn serializes_as_four_floats() {
        let b = BallPoint::from_coords([0.1, -0.2, 0.3, 0.0]);
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, "[0.1,-0.2,0.3,0.0]");
        let back: BallPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
    }
}
