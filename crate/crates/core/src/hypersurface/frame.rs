use nalgebra::Matrix3;

use crate::geometry::{Point, TangentVector};

/// Orthonormal frame `(ν, Jν, e, Je)` at a point of a hypersurface, with `ν`
/// the inward unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedFrame {
    pub p: Point,
    pub nu: TangentVector,
    pub j_nu: TangentVector,
    pub e: TangentVector,
    pub j_e: TangentVector,
}

impl AdaptedFrame {
    /// `nu` unit, `e` unit and orthogonal to `nu` and `J nu`.
    pub fn new(nu: TangentVector, e: TangentVector) -> Self {
        let p = nu.base().clone();
        let e = e.at(&p);
        Self { j_nu: nu.j(), j_e: e.j(), p, nu, e }
    }

    /// `(ν, Jν, e, Je)`.
    pub fn vectors(&self) -> [TangentVector; 4] {
        [self.nu.clone(), self.j_nu.clone(), self.e.clone(), self.j_e.clone()]
    }

    /// Basis `(Jν, e, Je)` of `T_pN`, the order used by [`ShapeMatrix`].
    pub fn tangent_basis(&self) -> [TangentVector; 3] {
        [self.j_nu.clone(), self.e.clone(), self.j_e.clone()]
    }

    /// `max |G - I|` for the Gram matrix of the four vectors.
    pub fn gram_defect(&self) -> f64 {
        let g = crate::geometry::gram(&self.vectors());
        let mut worst: f64 = 0.0;
        for (i, row) in g.iter().enumerate() {
            for (j, &gij) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gij - want).abs());
            }
        }
        worst
    }
}

/// Matrix of the shape operator `S_p = -∇ν` in the basis `(Jν, e, Je)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeMatrix {
    a: Matrix3<f64>,
}

impl ShapeMatrix {
    pub fn new(a: Matrix3<f64>) -> Self {
        Self { a }
    }

    /// Symmetric part of `a`.
    pub fn symmetrized(a: Matrix3<f64>) -> Self {
        Self { a: (a + a.transpose()) * 0.5 }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.a
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[(i, j)]
    }

    pub fn det(&self) -> f64 {
        self.a.determinant()
    }

    pub fn asymmetry(&self) -> f64 {
        (self.a - self.a.transpose()).abs().max()
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let sym = (self.a + self.a.transpose()) * 0.5;
        let ev = sym.symmetric_eigenvalues();
        let mut v = [ev[0], ev[1], ev[2]];
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Closed form for a geodesic sphere of radius `r`: `diag(2 coth 2r, coth r, coth r)`.
    pub fn sphere(r: f64) -> Self {
        let coth = |x: f64| 1.0 / x.tanh();
        Self { a: Matrix3::from_diagonal(&nalgebra::Vector3::new(2.0 * coth(2.0 * r), coth(r), coth(r))) }
    }
}
