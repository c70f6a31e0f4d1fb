//! The foliation map `F(p, r) = γ_{Jν(p)}(r)`, its inversion, and the outer
//! billiard map `B(F(p, -t)) = F(p, t)`.
//!
//! Matrices below use the basis `B_t = τ_0^t(ν, Jν, e, Je)` of the tangent
//! space at `F(p, t)` and the basis `C_t = (∂_t, Jν, e, Je)` of `T_{(p,t)}(N × R)`.

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::geometry::{transport_to, Geodesic, Point, TangentVector};
use crate::hypersurface::{AdaptedFrame, Direction, Scene, ShapeMatrix, SurfaceData};
use crate::jacobi::{hypersurface_jacobi_data, jacobi_eval};

/// A leaf of the foliation through an exterior point: the surface point
/// with chart direction `direction` and the leaf parameter `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangency {
    pub direction: Direction,
    pub t: f64,
}

/// Which half of the leaf: `Forward` is `F(p, t)`, `Backward` is `F(p, -t)`, `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Forward,
    Backward,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Forward => 1.0,
            Branch::Backward => -1.0,
        }
    }
}

/// The leaf geodesic `r -> γ_{Jν(p)}(r)` through the surface point at `x`.
pub fn leaf(scene: &Scene, x: &Direction) -> Result<Geodesic> {
    let nu = scene.inward_normal(x)?;
    Ok(Geodesic::new(nu.base(), &nu.j()))
}

pub fn map_f(scene: &Scene, x: &Direction, r: f64) -> Result<Point> {
    Ok(leaf(scene, x)?.point(r))
}

/// `B_t`: the adapted frame transported along the leaf to parameter `t`.
pub fn basis_bt(frame: &AdaptedFrame, t: f64) -> [TangentVector; 4] {
    let geo = Geodesic::new(&frame.p, &frame.j_nu);
    frame.vectors().map(|v| geo.transport(t, &v))
}

/// Matrix of `dF` at `(p, t)` from `C_t` to `B_t`.
pub fn dt_matrix(a: &ShapeMatrix, t: f64) -> Matrix4<f64> {
    let (c, s) = (t.cosh(), t.sinh());
    let a = |i: usize, j: usize| a.get(i, j);
    Matrix4::new(
        0.0, a(0, 0) * c * s, a(0, 1) * c * s, a(0, 2) * c * s,
        1.0, 1.0, 0.0, 0.0,
        0.0, a(0, 2) * s, c + a(1, 2) * s, a(2, 2) * s,
        0.0, -a(0, 1) * s, -a(1, 1) * s, c - a(1, 2) * s,
    )
}

/// `det D_t = -cosh t sinh t (cosh^2 t A11 + sinh^2 t det A)`.
pub fn dt_det(a: &ShapeMatrix, t: f64) -> f64 {
    let (c, s) = (t.cosh(), t.sinh());
    -c * s * (c * c * a.get(0, 0) + s * s * a.det())
}

/// `diag(j, j)` with `j = [[0, -1], [1, 0]]`. Its entries are `Ω_ik = ω(b_k, b_i)`
/// for `ω(X, Y) = <JX, Y>` and `b` any of the bases `B_t`.
pub fn omega() -> Matrix4<f64> {
    Matrix4::new(
        0.0, -1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, 1.0, 0.0,
    )
}

/// `diag(-1, 1, 1, 1)`, the matrix of `(p, -t) -> (p, t)`.
pub fn g_matrix() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

/// Matrix of `dB` at `F(p, -t)` from `B_{-t}` to `B_t`: `D_t G D_{-t}^{-1}`.
pub fn ht_matrix(a: &ShapeMatrix, t: f64) -> Result<Matrix4<f64>> {
    let dm = dt_matrix(a, -t);
    let det = dm.determinant();
    if !(det.abs() >= 1e-12) {
        return Err(Error::SingularDt { det });
    }
    let inv = dm.try_inverse().ok_or(Error::SingularDt { det })?;
    Ok(dt_matrix(a, t) * g_matrix() * inv)
}

/// `max |H^T Ω H - Ω|`.
pub fn symplectic_defect(h: &Matrix4<f64>) -> f64 {
    (h.transpose() * omega() * h - omega()).abs().max()
}

/// Closed forms `(E21, E31, E41, E32, E42, E43)` of `E(δt) = D_{δt}^T Ω D_{δt}`.
pub fn e_entries(a: &ShapeMatrix, t: f64, delta: f64) -> [f64; 6] {
    let (c, s) = (t.cosh(), t.sinh());
    let a = |i: usize, j: usize| a.get(i, j);
    [
        -delta * a(0, 0) * c * s,
        -delta * a(0, 1) * c * s,
        -delta * a(0, 2) * c * s,
        (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) * s * s,
        (a(0, 1) * a(2, 2) - a(0, 2) * a(1, 2)) * s * s,
        (a(1, 1) * a(2, 2) - a(1, 2) * a(1, 2)) * s * s + c * c,
    ]
}

/// Skew-symmetric `E(δt)` rebuilt from [`e_entries`].
pub fn e_matrix(a: &ShapeMatrix, t: f64, delta: f64) -> Matrix4<f64> {
    let e = e_entries(a, t, delta);
    let lower = [(1, 0), (2, 0), (3, 0), (2, 1), (3, 1), (3, 2)];
    let mut m = Matrix4::zeros();
    for (&(i, j), v) in lower.iter().zip(e) {
        m[(i, j)] = v;
        m[(j, i)] = -v;
    }
    m
}

/// Outcome of a foliation inversion.
#[derive(Debug, Clone)]
pub struct Inversion {
    pub tangency: Tangency,
    /// `|log_q F(p, ±t)|` at the returned solution.
    pub residual: f64,
    /// Number of multistart seeds that converged.
    pub converged_starts: usize,
    /// Largest disagreement `d(p_i, p_j) + |t_i - t_j|` among converged seeds.
    pub spread: f64,
}

/// How many multistart seeds to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Search {
    /// Stop at the first converged seed.
    FirstHit,
    /// Run every seed and report their agreement.
    Exhaustive,
}

/// Leaf parameters beyond this are rejected during Newton; far out the
/// hyperboloid coordinates lose `<z,z> = -1` to cancellation.
const T_MAX: f64 = 20.0;

struct Solver<'a> {
    scene: &'a Scene,
    q: Point,
    frame_q: [TangentVector; 4],
    sigma: f64,
}

impl Solver<'_> {
    fn residual(&self, x: &Direction, t: f64) -> Result<Vector4<f64>> {
        let p = map_f(self.scene, x, self.sigma * t)?;
        Ok(Vector4::from(self.q.log(&p).coords(&self.frame_q)))
    }

    fn jacobian(&self, local: &SurfaceData, t: f64) -> Matrix4<f64> {
        let geo = Geodesic::new(&local.point, &local.frame.j_nu);
        let r = self.sigma * t;
        let mut m = Matrix4::zeros();
        for k in 0..3 {
            let data = hypersurface_jacobi_data(&local.tangents[k], &local.shape, &local.frame);
            let col = transport_to(&jacobi_eval(&geo, &data, r), &self.q).coords(&self.frame_q);
            m.set_column(k, &Vector4::from(col));
        }
        let vel = transport_to(&geo.velocity(r).scale(self.sigma), &self.q).coords(&self.frame_q);
        m.set_column(3, &Vector4::from(vel));
        m
    }

    /// Damped Newton from `(x, t)`. Returns the solution and its residual norm.
    fn newton(&self, mut x: Direction, mut t: f64) -> Option<(Tangency, f64)> {
        let tol = self.scene.tolerances();
        let mut r = self.residual(&x, t).ok()?;
        let mut polish = 0;
        for _ in 0..tol.newton_max_iter {
            let rn = r.norm();
            if rn <= tol.newton_tol {
                polish += 1;
                if polish > 2 {
                    break;
                }
            }
            let local = self.scene.local(&x).ok()?;
            let jac = self.jacobian(&local, t);
            let mut step = jac.lu().solve(&(-r))?;
            if !step.iter().all(|v| v.is_finite()) {
                break;
            }
            let len = step.fixed_rows::<3>(0).norm();
            if len > 0.5 {
                step *= 0.5 / len;
            }
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let xn = x.moved([lambda * step[0], lambda * step[1], lambda * step[2]]);
                let mut tn = t + lambda * step[3];
                if tn <= 0.0 {
                    tn = 0.5 * t;
                }
                if !(tn <= T_MAX) {
                    lambda *= 0.5;
                    continue;
                }
                if let Ok(rt) = self.residual(&xn, tn) {
                    if rt.norm() < rn || (rn <= tol.newton_tol && rt.norm() <= rn) {
                        x = xn;
                        t = tn;
                        r = rt;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        let rn = r.norm();
        (rn <= tol.newton_tol).then_some((Tangency { direction: x, t }, rn))
    }
}

fn solver<'a>(scene: &'a Scene, q: &Point, branch: Branch) -> Result<Solver<'a>> {
    if !scene.is_exterior(q)? {
        return Err(Error::NotExterior);
    }
    Ok(Solver { scene, q: q.clone(), frame_q: scene.frame_at(q), sigma: branch.sign() })
}

fn finish(scene: &Scene, inv: Inversion) -> Result<Inversion> {
    let t_min = scene.tolerances().t_min;
    if inv.tangency.t < t_min {
        return Err(Error::TooCloseToSurface { t: inv.tangency.t, t_min });
    }
    Ok(inv)
}

/// Finds the unique `(p, t)`, `t > 0`, with `F(p, ±t) = q` by multistart Newton.
pub fn invert_f_report(scene: &Scene, q: &Point, branch: Branch, search: Search) -> Result<Inversion> {
    let s = solver(scene, q, branch)?;
    // seeds ordered by how well the leaf at the seed points towards q
    let mut seeds: Vec<(f64, Direction, f64)> = Direction::quasi_uniform(scene.tolerances().multistart)
        .into_iter()
        .filter_map(|x| {
            let geo = leaf(scene, &x).ok()?;
            let v = geo.start().log(q);
            let d = v.norm();
            let score = -s.sigma * v.dot(geo.direction()) / d.max(1e-300);
            Some((score, x, d))
        })
        .collect();
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut found: Vec<(Tangency, f64)> = Vec::new();
    for (_, x, d) in seeds {
        if let Some(sol) = s.newton(x, d) {
            found.push(sol);
            if search == Search::FirstHit {
                break;
            }
        }
    }
    let Some(best) = found.iter().min_by(|a, b| a.1.total_cmp(&b.1)).cloned() else {
        return Err(Error::NoConvergence { residual: f64::NAN });
    };
    let points: Vec<Point> = found.iter().map(|(tg, _)| scene.surface_point(&tg.direction)).collect();
    let mut spread: f64 = 0.0;
    for i in 0..found.len() {
        for j in 0..i {
            spread = spread.max(points[i].distance(&points[j]) + (found[i].0.t - found[j].0.t).abs());
        }
    }
    finish(scene, Inversion { tangency: best.0, residual: best.1, converged_starts: found.len(), spread })
}

/// Newton from a nearby tangency, falling back to multistart.
pub fn invert_f_near(scene: &Scene, q: &Point, branch: Branch, guess: &Tangency) -> Result<Inversion> {
    let s = solver(scene, q, branch)?;
    match s.newton(guess.direction, guess.t) {
        Some((tangency, residual)) => finish(scene, Inversion { tangency, residual, converged_starts: 1, spread: 0.0 }),
        None => invert_f_report(scene, q, branch, Search::FirstHit),
    }
}

pub fn invert_f(scene: &Scene, q: &Point, branch: Branch) -> Result<Tangency> {
    Ok(invert_f_report(scene, q, branch, Search::FirstHit)?.tangency)
}

/// One application of the billiard map with its tangency.
#[derive(Debug, Clone)]
pub struct Step {
    pub image: Point,
    pub tangency: Tangency,
    pub residual: f64,
}

fn step_with(scene: &Scene, inv: Inversion, sign: f64) -> Result<Step> {
    let image = map_f(scene, &inv.tangency.direction, sign * inv.tangency.t)?;
    Ok(Step { image, tangency: inv.tangency, residual: inv.residual })
}

/// `B(q)`: find `(p, t)` with `q = F(p, -t)` and return `F(p, t)`.
pub fn billiard_step(scene: &Scene, q: &Point) -> Result<Step> {
    step_with(scene, invert_f_report(scene, q, Branch::Backward, Search::FirstHit)?, 1.0)
}

/// `B^{-1}(q)`: find `(p, t)` with `q = F(p, t)` and return `F(p, -t)`.
pub fn billiard_inverse_step(scene: &Scene, q: &Point) -> Result<Step> {
    step_with(scene, invert_f_report(scene, q, Branch::Forward, Search::FirstHit)?, -1.0)
}

/// [`billiard_step`] seeded with a nearby tangency.
pub fn billiard_step_near(scene: &Scene, q: &Point, guess: &Tangency) -> Result<Step> {
    step_with(scene, invert_f_near(scene, q, Branch::Backward, guess)?, 1.0)
}

pub fn billiard_map(scene: &Scene, q: &Point) -> Result<Point> {
    Ok(billiard_step(scene, q)?.image)
}

pub fn billiard_inverse(scene: &Scene, q: &Point) -> Result<Point> {
    Ok(billiard_inverse_step(scene, q)?.image)
}
