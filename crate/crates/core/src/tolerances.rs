//! Numerical steps and thresholds, kept in one place so that every reported
//! number can be reproduced from the defaults below.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hessian-of-distance step for the ball-model metric oracle.
pub const H_METRIC: f64 = 1e-3;
/// Outer step used when differentiating oracle metrics and Christoffel symbols.
pub const H_CHRISTOFFEL: f64 = 1e-4;
/// Base step of Richardson-refined finite-difference Jacobians.
pub const H_JACOBIAN: f64 = 1e-5;
/// Relative/absolute tolerance of the adaptive ODE oracle.
pub const ODE_TOL: f64 = 1e-12;
/// Two points are the same when their distance is below this.
pub const POINT_EQ: f64 = 1e-9;
/// Below this norm a log vector is treated as zero.
pub const LOG_DEGENERATE: f64 = 1e-12;
/// Allowed drift of `<z,z> = -1` after construction.
pub const NORMALIZATION: f64 = 1e-12;

/// Runtime-adjustable tolerances carried by a scene.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Smallest admissible leaf parameter t.
    pub t_min: f64,
    /// Newton stops once the residual norm is below this.
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// Number of multistart seeds for the foliation inversion.
    pub multistart: usize,
    /// Converged starts must agree to this (uniqueness check).
    pub uniqueness: f64,
    /// Finite-difference step for the radial-graph shape operator.
    pub h_shape: f64,
    /// Smallest admissible shape-operator eigenvalue.
    pub convexity_min_eig: f64,
    /// Number of sample directions for the load-time convexity check.
    pub convexity_samples: usize,
    /// Exterior test margin.
    pub surface_gap: f64,
    /// A periodic orbit is accepted when d(B^k q, q) is below this.
    pub periodic_residual: f64,
    pub periodic_max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            t_min: 1e-6,
            newton_tol: 1e-11,
            newton_max_iter: 50,
            multistart: 20,
            uniqueness: 1e-7,
            h_shape: 1e-4,
            convexity_min_eig: 1e-8,
            convexity_samples: 200,
            surface_gap: 1e-10,
            periodic_residual: 1e-10,
            periodic_max_iter: 40,
        }
    }
}

impl Tolerances {
    /// Override a single value by its field name, as used by `--tol-override KEY=VAL`.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let as_count = |v: f64| -> Result<usize> {
            if v.is_finite() && v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::InvalidScene(format!("{key} must be a positive integer")))
            }
        };
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::InvalidScene(format!("{key} must be positive and finite")));
        }
        match key {
            "t_min" => self.t_min = value,
            "newton_tol" => self.newton_tol = value,
            "newton_max_iter" => self.newton_max_iter = as_count(value)?,
            "multistart" => self.multistart = as_count(value)?,
            "uniqueness" => self.uniqueness = value,
            "h_shape" => self.h_shape = value,
            "convexity_min_eig" => self.convexity_min_eig = value,
            "convexity_samples" => self.convexity_samples = as_count(value)?,
            "surface_gap" => self.surface_gap = value,
            "periodic_residual" => self.periodic_residual = value,
            "periodic_max_iter" => self.periodic_max_iter = as_count(value)?,
            _ => return Err(Error::UnknownTolerance(key.to_string())),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_by_name() {
        let mut tol = Tolerances::default();
        tol.set("t_min", 1e-4).unwrap();
        tol.set("multistart", 8.0).unwrap();
        assert_eq!(tol.t_min, 1e-4);
        assert_eq!(tol.multistart, 8);
        assert!(matches!(tol.set("nope", 1.0), Err(Error::UnknownTolerance(_))));
        assert!(tol.set("multistart", 2.5).is_err());
        assert!(tol.set("t_min", -1.0).is_err());
    }
}
