use num_complex::Complex64;

use super::kahler_christoffel;
use crate::error::{Error, Result};
use crate::geometry::{ball_velocity, tangent_from_ball, to_ball, BallPoint, Point, TangentVector};
use crate::tolerances::ODE_TOL;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: ODE_TOL, atol: ODE_TOL, max_steps: 200_000 }
    }
}

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive Dormand–Prince integration of `y' = f(t, y)` from `t0` to `t1`.
pub fn dopri5<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: OdeOptions,
) -> Result<[f64; N]> {
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * (span.abs() * 1e-3).max(1e-6).min(span.abs());
    for _ in 0..opts.max_steps {
        if (t1 - t) * dir <= 0.0 {
            return Ok(y);
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let mut k = [[0.0; N]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                for i in 0..N {
                    ys[i] += h * A[s][j] * kj[i];
                }
            }
            k[s] = f(t + C[s] * h, &ys);
        }
        let mut y5 = y;
        let mut err: f64 = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for s in 0..7 {
                y5[i] += h * B5[s] * k[s][i];
                e += h * (B5[s] - B4[s]) * k[s][i];
            }
            let scale = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
            err = err.max((e / scale).abs());
        }
        if !err.is_finite() {
            return Err(Error::StepFailure(format!("non-finite error estimate at t = {t}")));
        }
        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() < 1e-14 * t1.abs().max(1.0) {
            return Err(Error::StepFailure(format!("step size underflow at t = {t}")));
        }
    }
    Err(Error::StepFailure(format!("more than {} steps", opts.max_steps)))
}

fn pack(z: &[Complex64; 2]) -> [f64; 4] {
    [z[0].re, z[0].im, z[1].re, z[1].im]
}

fn unpack(y: &[f64], at: usize) -> [Complex64; 2] {
    [Complex64::new(y[at], y[at + 1]), Complex64::new(y[at + 2], y[at + 3])]
}

/// Geodesic and parallel-transport equations in ball coordinates:
/// `z'' = -Γ(z', z')`, `X' = -Γ(z', X)`.
fn rhs(y: &[f64; 12]) -> [f64; 12] {
    let z = unpack(y, 0);
    let v = unpack(y, 4);
    let x = unpack(y, 8);
    let acc = kahler_christoffel(&z, &v, &v);
    let dx = kahler_christoffel(&z, &v, &x);
    let mut out = [0.0; 12];
    out[..4].copy_from_slice(&pack(&v));
    out[4..8].copy_from_slice(&pack(&[-acc[0], -acc[1]]));
    out[8..].copy_from_slice(&pack(&[-dx[0], -dx[1]]));
    out
}

fn integrate(p: &Point, u: &TangentVector, x: &TangentVector, t: f64, opts: OdeOptions) -> Result<(BallPoint, [f64; 12])> {
    let b = to_ball(p);
    let mut y0 = [0.0; 12];
    y0[..4].copy_from_slice(&b.coords());
    y0[4..8].copy_from_slice(&pack(&ball_velocity(&u.at(p))));
    y0[8..].copy_from_slice(&pack(&ball_velocity(&x.at(p))));
    let y = dopri5(|_, y| rhs(y), 0.0, y0, t, opts)?;
    Ok((BallPoint::from_coords([y[0], y[1], y[2], y[3]]), y))
}

/// End point of the geodesic `exp_p(t u)` by integrating the geodesic equation.
pub fn ode_geodesic(p: &Point, u: &TangentVector, t: f64) -> Result<Point> {
    let zero = p.zero_vector();
    let (b, _) = integrate(p, u, &zero, t, OdeOptions::default())?;
    crate::geometry::from_ball(&b)
}

/// Parallel transport of `x` along `s -> exp_p(s u)`, `s ∈ [0, t]`, by
/// integrating the transport equation alongside the geodesic.
pub fn ode_parallel_transport(p: &Point, u: &TangentVector, t: f64, x: &TangentVector) -> Result<TangentVector> {
    let (b, y) = integrate(p, u, x, t, OdeOptions::default())?;
    tangent_from_ball(&b, unpack(&y, 8))
}
