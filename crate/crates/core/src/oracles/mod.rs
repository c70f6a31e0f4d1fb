//! Brute-force reference computations for the tests. Nothing here calls the
//! closed-form curvature, transport or Jacobi code; the metric is recovered
//! from the ball-model distance alone.

mod jacobian;
mod ode;

pub use jacobian::{fd_jacobian, fd_jacobian_params, fd_jacobian_params_step};
pub use ode::{dopri5, ode_geodesic, ode_parallel_transport, OdeOptions};

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::tolerances::{H_CHRISTOFFEL, H_METRIC};

/// Real ball coordinates `(Re z, Im z, Re w, Im w)`.
pub type Coords = [f64; 4];

fn split(c: &Coords) -> [Complex64; 2] {
    [Complex64::new(c[0], c[1]), Complex64::new(c[2], c[3])]
}

fn add(a: &Coords, b: &Coords, s: f64) -> Coords {
    std::array::from_fn(|i| a[i] + s * b[i])
}

/// Distance from `p` to `p + delta` in the ball model, from
/// `cosh^2 d = |1 - <p,q>|^2 / ((1 - |p|^2)(1 - |q|^2))` rewritten as
/// `sinh^2 d = (|p - q|^2 - |p1 q2 - p2 q1|^2) / ((1 - |p|^2)(1 - |q|^2))`,
/// which has no cancellation for small offsets.
pub fn ball_distance_offset(p: &Coords, delta: &Coords) -> f64 {
    let q = add(p, delta, 1.0);
    let [p1, p2] = split(p);
    let [d1, d2] = split(delta);
    let cross = p1 * d2 - p2 * d1;
    let dd: f64 = delta.iter().map(|x| x * x).sum();
    let np: f64 = p.iter().map(|x| x * x).sum();
    let nq: f64 = q.iter().map(|x| x * x).sum();
    let s2 = (dd - cross.norm_sqr()) / ((1.0 - np) * (1.0 - nq));
    s2.max(0.0).sqrt().asinh()
}

pub fn ball_distance(p: &Coords, q: &Coords) -> f64 {
    ball_distance_offset(p, &std::array::from_fn(|i| q[i] - p[i]))
}

/// Metric at `p` as the Hessian of `d(p, p + δ)^2 / 2` at `δ = 0`, by central
/// second differences with step `h`.
fn hessian_metric(p: &Coords, h: f64) -> Matrix4<f64> {
    let f = |delta: Coords| 0.5 * ball_distance_offset(p, &delta).powi(2);
    let e = |i: usize, s: f64| -> Coords { std::array::from_fn(|k| if k == i { s } else { 0.0 }) };
    let mut g = Matrix4::zeros();
    for i in 0..4 {
        g[(i, i)] = (f(e(i, h)) + f(e(i, -h))) / (h * h);
        for j in 0..i {
            let pp = f(add(&e(i, h), &e(j, h), 1.0));
            let pm = f(add(&e(i, h), &e(j, -h), 1.0));
            let mp = f(add(&e(i, -h), &e(j, h), 1.0));
            let mm = f(add(&e(i, -h), &e(j, -h), 1.0));
            g[(i, j)] = (pp - pm - mp + mm) / (4.0 * h * h);
            g[(j, i)] = g[(i, j)];
        }
    }
    g
}

/// Ball-model metric from the distance function alone (Richardson-refined
/// Hessian of `d^2 / 2`, base step [`H_METRIC`]).
pub fn fd_metric(p: &Coords) -> Matrix4<f64> {
    let coarse = hessian_metric(p, H_METRIC);
    let fine = hessian_metric(p, 0.5 * H_METRIC);
    (fine * 4.0 - coarse) / 3.0
}

/// Metric, its first derivatives and Christoffel symbols at a ball point.
#[derive(Debug, Clone)]
pub struct ChartJet {
    pub point: Coords,
    pub metric: Matrix4<f64>,
    /// `dmetric[i] = ∂_i g`.
    pub dmetric: [Matrix4<f64>; 4],
    /// `christoffel[l][j][k] = Γ^l_{jk}`.
    pub christoffel: [[[f64; 4]; 4]; 4],
}

fn unit(i: usize) -> Coords {
    std::array::from_fn(|k| if k == i { 1.0 } else { 0.0 })
}

pub fn chart_jet(p: &Coords) -> ChartJet {
    let h = H_CHRISTOFFEL;
    let central = |i: usize, h: f64| (fd_metric(&add(p, &unit(i), h)) - fd_metric(&add(p, &unit(i), -h))) / (2.0 * h);
    let dmetric: [Matrix4<f64>; 4] = std::array::from_fn(|i| (central(i, 0.5 * h) * 4.0 - central(i, h)) / 3.0);
    let metric = fd_metric(p);
    let inv = metric.try_inverse().expect("metric is positive definite");
    let mut christoffel = [[[0.0; 4]; 4]; 4];
    for l in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                christoffel[l][j][k] = (0..4)
                    .map(|m| 0.5 * inv[(l, m)] * (dmetric[j][(m, k)] + dmetric[k][(m, j)] - dmetric[m][(j, k)]))
                    .sum();
            }
        }
    }
    ChartJet { point: *p, metric, dmetric, christoffel }
}

/// `riemann[l][i][j][k] = (R(∂_i, ∂_j) ∂_k)^l` from finite differences of the
/// Christoffel symbols, `R(X,Y) = ∇_X∇_Y - ∇_Y∇_X - ∇_[X,Y]`.
pub fn fd_riemann(p: &Coords) -> (ChartJet, [[[[f64; 4]; 4]; 4]; 4]) {
    let h = H_CHRISTOFFEL;
    let jet = chart_jet(p);
    let dgamma: Vec<[[[f64; 4]; 4]; 4]> = (0..4)
        .map(|i| {
            let plus = chart_jet(&add(p, &unit(i), h)).christoffel;
            let minus = chart_jet(&add(p, &unit(i), -h)).christoffel;
            std::array::from_fn(|l| std::array::from_fn(|j| std::array::from_fn(|k| (plus[l][j][k] - minus[l][j][k]) / (2.0 * h))))
        })
        .collect();
    let g = &jet.christoffel;
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for l in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let mut v = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                    for m in 0..4 {
                        v += g[l][i][m] * g[m][j][k] - g[l][j][m] * g[m][i][k];
                    }
                    r[l][i][j][k] = v;
                }
            }
        }
    }
    (jet, r)
}

/// Complex structure of the ball chart: multiplication by `i` on `(z, w)`.
pub fn ball_j(u: &Coords) -> Coords {
    [-u[1], u[0], -u[3], u[2]]
}

fn inner(g: &Matrix4<f64>, a: &Coords, b: &Coords) -> f64 {
    (0..4).map(|i| (0..4).map(|j| a[i] * g[(i, j)] * b[j]).sum::<f64>()).sum()
}

/// `(<R(Ju,u)u, Ju>, <R(v,u)u, v>)` computed from the distance-derived metric
/// only. `u` and `v` are normalized in that metric and `v` is made orthogonal
/// to `u` and `Ju` first.
pub fn fd_curvature_anchor(p: &Coords, u: &Coords, v: &Coords) -> (f64, f64) {
    let (jet, r) = fd_riemann(p);
    let g = &jet.metric;
    let normalize = |a: Coords| {
        let n = inner(g, &a, &a).sqrt();
        a.map(|x| x / n)
    };
    let u = normalize(*u);
    let ju = ball_j(&u);
    let mut v = *v;
    for b in [u, ju] {
        let c = inner(g, &v, &b) / inner(g, &b, &b);
        v = add(&v, &b, -c);
    }
    let v = normalize(v);
    let form = |x: &Coords, y: &Coords, z: &Coords, w: &Coords| {
        let mut out = [0.0; 4];
        for (l, o) in out.iter_mut().enumerate() {
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        *o += r[l][i][j][k] * x[i] * y[j] * z[k];
                    }
                }
            }
        }
        inner(g, &out, w)
    };
    (form(&ju, &u, &u, &ju), form(&v, &u, &u, &v))
}

/// Holomorphic Christoffel symbols of the ball's Kähler metric contracted
/// with `a` and `b`: `Γ(a, b)_k = ((z̄·a) b_k + (z̄·b) a_k) / (1 - |z|^2)`.
pub fn kahler_christoffel(z: &[Complex64; 2], a: &[Complex64; 2], b: &[Complex64; 2]) -> [Complex64; 2] {
    let n = 1.0 - z[0].norm_sqr() - z[1].norm_sqr();
    let za = z[0].conj() * a[0] + z[1].conj() * a[1];
    let zb = z[0].conj() * b[0] + z[1].conj() * b[1];
    [(za * b[0] + zb * a[0]) / n, (za * b[1] + zb * a[1]) / n]
}
