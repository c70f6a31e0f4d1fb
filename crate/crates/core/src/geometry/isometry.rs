use nalgebra::Matrix3;
use num_complex::Complex64;

use super::ambient::{hermitian_form, AmbientVector};
use super::point::{Point, TangentVector};
use crate::error::{Error, Result};

/// Holomorphic isometry, as a 3x3 complex matrix `M` with `M* eta M = eta`,
/// `eta = diag(1, 1, -1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    m: Matrix3<Complex64>,
}

fn eta() -> Matrix3<Complex64> {
    Matrix3::from_diagonal(&nalgebra::Vector3::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ))
}

impl Isometry {
    pub fn identity() -> Self {
        Self { m: Matrix3::identity() }
    }

    pub fn from_matrix(m: Matrix3<Complex64>) -> Result<Self> {
        let iso = Self { m };
        let defect = iso.defect();
        if defect > 1e-10 {
            return Err(Error::InvalidScene(format!("matrix is not an isometry (defect {defect:.3e})")));
        }
        Ok(iso)
    }

    pub fn matrix(&self) -> &Matrix3<Complex64> {
        &self.m
    }

    /// `max |M* eta M - eta|`.
    pub fn defect(&self) -> f64 {
        (self.m.adjoint() * eta() * self.m - eta()).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry { m: self.m * other.m }
    }

    pub fn inverse(&self) -> Isometry {
        Isometry { m: eta() * self.m.adjoint() * eta() }
    }

    pub fn apply(&self, p: &Point) -> Point {
        Point::renormalized(self.m * p.rep())
    }

    pub fn apply_vector(&self, v: &TangentVector) -> TangentVector {
        TangentVector::from_parts(self.apply(v.base()), self.m * v.vec())
    }

    /// One-parameter transvection along the geodesic through `p` with unit
    /// velocity `u`: hyperbolic rotation on `span_C{p, u}`, identity on its
    /// orthogonal complement.
    pub fn transvection(p: &Point, u: &TangentVector, t: f64) -> Isometry {
        let u = u.at(p);
        let (pv, uv) = (p.rep(), u.vec());
        let (c, s) = (t.cosh(), t.sinh());
        // x = alpha p + beta u + w, alpha = -<p,x>, beta = <u,x>
        let pa = pv * Complex64::new(c - 1.0, 0.0) + uv * Complex64::new(s, 0.0);
        let ub = pv * Complex64::new(s, 0.0) + uv * Complex64::new(c - 1.0, 0.0);
        let mut m = Matrix3::identity();
        for k in 0..3 {
            let x = super::ambient::basis(k);
            let alpha = -hermitian_form(pv, &x);
            let beta = hermitian_form(uv, &x);
            let col = x + pa * alpha + ub * beta;
            m.set_column(k, &col);
        }
        Isometry { m }
    }

    /// Transvection carrying `p` to `q` along the geodesic joining them.
    pub fn translation(p: &Point, q: &Point) -> Isometry {
        let v = p.log(q);
        let d = v.norm();
        if d == 0.0 {
            return Isometry::identity();
        }
        Isometry::transvection(p, &v.scale(1.0 / d), d)
    }

    /// Reflection in the complex line polar to `n` (`<n,n> = 1`):
    /// `x -> x - 2 <n,x> n`. It fixes the line pointwise and is an involution.
    pub fn complex_reflection(n: &AmbientVector) -> Isometry {
        let nn = hermitian_form(n, n).re;
        let n = n * Complex64::new(1.0 / nn.sqrt(), 0.0);
        let mut m = Matrix3::identity();
        for k in 0..3 {
            let x = super::ambient::basis(k);
            let col = x - n * (Complex64::new(2.0, 0.0) * hermitian_form(&n, &x));
            m.set_column(k, &col);
        }
        Isometry { m }
    }

    /// The reflection `(z, w) -> (z, -w)` in the complex line `w = 0`.
    pub fn standard_reflection() -> Isometry {
        Isometry::complex_reflection(&super::ambient::basis(1))
    }
}

/// Reflection in the complex line `C x {0}` of the ball model.
pub fn reflect_complex_line(q: &Point) -> Point {
    Isometry::standard_reflection().apply(q)
}
