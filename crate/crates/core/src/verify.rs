//! Quantitative checks with their tolerances, shared by the acceptance tests
//! and the `verify` command. Each function returns one result per check;
//! a check passes when its value is within tolerance (NaN never passes).

use nalgebra::{Matrix3, Matrix4, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::billiard::{
    basis_bt, billiard_step_near, dt_det, dt_matrix, e_matrix, g_matrix, ht_matrix, invert_f_report, map_f, omega,
    symplectic_defect, Branch, Search,
};
use crate::dynamics::{
    complex_line_distance, find_periodic_orbit, h2_circle_billiard, h2_distance, iterate, periodic_radius,
    sphere_seed, symplectic_area, symplectic_area_cone, three_periodic_threshold, ComplexLine,
};
use crate::error::Result;
use crate::geometry::{
    curvature, from_ball, parallel_transport, to_ball, transport_to, BallPoint, Geodesic, Point, TangentVector,
};
use crate::hypersurface::{Direction, Scene, SceneSpec};
use crate::jacobi::{decompose_initial_data, hypersurface_jacobi_data, jacobi_eval, JacobiData};
use crate::oracles::{ball_distance, fd_curvature_anchor, fd_jacobian, fd_jacobian_params, ode_parallel_transport};

/// One verified quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    /// Passes when `value <= tolerance`.
    pub fn at_most(check: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { check: check.into(), value, tolerance, pass: value <= tolerance }
    }

    /// Passes when `value >= tolerance`.
    pub fn at_least(check: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { check: check.into(), value, tolerance, pass: value >= tolerance }
    }

    fn failed(check: impl Into<String>, tolerance: f64) -> Self {
        Self { check: check.into(), value: f64::NAN, tolerance, pass: false }
    }
}

/// Tolerance loosened to `relax` (0 keeps it strict).
fn tol(strict: f64, relax: f64) -> f64 {
    strict.max(relax)
}

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
}

fn random_coords(rng: &mut ChaCha8Rng, r: f64) -> [f64; 4] {
    loop {
        let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-r..r));
        if c.iter().map(|x| x * x).sum::<f64>() < r * r {
            return c;
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, r: f64) -> Point {
    from_ball(&BallPoint::from_coords(random_coords(rng, r))).expect("inside the ball")
}

fn random_tangent(rng: &mut ChaCha8Rng, p: &Point) -> TangentVector {
    p.project(&Vector3::from_fn(|_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
}

fn random_direction(rng: &mut ChaCha8Rng) -> Direction {
    loop {
        if let Some(x) = Direction::new(std::array::from_fn(|_| rng.gen_range(-1.0..1.0))) {
            return x;
        }
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so that it fails the check
    values.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

/// Sectional curvatures from the finite-difference metric oracle at 20
/// random points and planes, and the closed-form tensor at the same points.
pub fn curvature_anchors(seed: u64) -> Vec<CheckResult> {
    let mut rng = rng(seed, 1);
    let mut fd = 0.0f64;
    let mut exact = 0.0f64;
    for _ in 0..20 {
        let c = random_coords(&mut rng, 0.6);
        let u = random_coords(&mut rng, 1.0);
        let v = random_coords(&mut rng, 1.0);
        let (hol, real) = fd_curvature_anchor(&c, &u, &v);
        fd = max_of([fd, (hol + 4.0).abs(), (real + 1.0).abs()]);

        let p = from_ball(&BallPoint::from_coords(c)).expect("inside the ball");
        let u = random_tangent(&mut rng, &p).normalized();
        let raw = random_tangent(&mut rng, &p);
        let v = (raw.clone() - u.scale(u.dot(&raw)) - u.j().scale(u.j().dot(&raw))).normalized();
        let hol = curvature(&u.j(), &u, &u).dot(&u.j());
        let real = curvature(&v, &u, &u).dot(&v);
        exact = max_of([exact, (hol + 4.0).abs(), (real + 1.0).abs()]);
    }
    vec![
        CheckResult::at_most("curvature.fd_anchors", fd, 1e-4),
        CheckResult::at_most("curvature.closed_form", exact, 1e-12),
    ]
}

/// `d(p, exp_p(t u)) = t` on `[0, 5]`, and the ball distance formula
/// against the hyperboloid on 100 random pairs.
pub fn distance_exp(seed: u64) -> Vec<CheckResult> {
    let mut rng = rng(seed, 2);
    let mut exp_err = 0.0f64;
    for _ in 0..20 {
        let p = random_point(&mut rng, 0.6);
        let u = random_tangent(&mut rng, &p).normalized();
        for i in 0..=20 {
            let t = 0.25 * i as f64;
            exp_err = max_of([exp_err, (p.distance(&p.exp(&u.scale(t))) - t).abs()]);
        }
    }
    let mut ball_err = 0.0f64;
    for _ in 0..100 {
        let a = random_coords(&mut rng, 0.8);
        let b = random_coords(&mut rng, 0.8);
        let pa = from_ball(&BallPoint::from_coords(a)).expect("inside the ball");
        let pb = from_ball(&BallPoint::from_coords(b)).expect("inside the ball");
        ball_err = max_of([ball_err, (ball_distance(&a, &b) - pa.distance(&pb)).abs()]);
    }
    vec![
        CheckResult::at_most("distance.exp_consistency", exp_err, 1e-10),
        CheckResult::at_most("distance.ball_vs_hyperboloid", ball_err, 1e-12),
    ]
}

/// Closed-form parallel transport against the ODE oracle on `[0, 3]`, and
/// its isometry and `J`-commutation.
pub fn parallel_transport_checks(seed: u64) -> Vec<CheckResult> {
    let mut rng = rng(seed, 3);
    let mut ode = 0.0f64;
    let mut iso = 0.0f64;
    let mut jcomm = 0.0f64;
    for _ in 0..10 {
        let p = random_point(&mut rng, 0.5);
        let u = random_tangent(&mut rng, &p).normalized();
        let x = random_tangent(&mut rng, &p);
        let y = random_tangent(&mut rng, &p);
        for i in 0..=6 {
            let t = 0.5 * i as f64;
            let tx = parallel_transport(&p, &u, t, &x);
            let ty = parallel_transport(&p, &u, t, &y);
            ode = match ode_parallel_transport(&p, &u, t, &x) {
                Ok(v) => max_of([ode, (v - tx.clone()).norm()]),
                Err(_) => f64::NAN,
            };
            iso = max_of([iso, (tx.dot(&ty) - x.dot(&y)).abs(), (tx.omega(&ty) - x.omega(&y)).abs()]);
            let tjx = parallel_transport(&p, &u, t, &x.j());
            jcomm = max_of([jcomm, (tjx - tx.j()).norm()]);
        }
    }
    vec![
        CheckResult::at_most("transport.ode_oracle", ode, 1e-8),
        CheckResult::at_most("transport.isometry", iso, 1e-12),
        CheckResult::at_most("transport.j_commutation", jcomm, 1e-12),
    ]
}

/// `K'' + R(K, γ')γ'` by second differences transported back along the geodesic.
fn jacobi_residual(geo: &Geodesic, data: &JacobiData, r: f64) -> f64 {
    let at = geo.point(r);
    let pulled = |s: f64| transport_to(&jacobi_eval(geo, data, r + s), &at);
    let k0 = pulled(0.0);
    let second = |h: f64| (pulled(h) + pulled(-h) - k0.scale(2.0)).scale(1.0 / (h * h));
    let h = 1e-2;
    let d2 = (second(h / 2.0).scale(4.0) - second(h)).scale(1.0 / 3.0);
    let vel = geo.velocity(r).at(k0.base());
    (d2 + curvature(&k0, &vel, &vel)).norm()
}

/// Step sizes for the convergence-order estimate of the variation of `F`.
const ORDER_STEPS: [f64; 4] = [0.04, 0.02, 0.01, 0.005];

/// Jacobi equation residual of the closed form, and the order of
/// convergence of central differences of `s -> F(x(s), r)` to the Jacobi
/// field with the hypersurface initial data.
pub fn jacobi_fields(scene: &Scene, seed: u64) -> Vec<CheckResult> {
    let mut rng = rng(seed, 4);
    let mut residual = 0.0f64;
    for _ in 0..20 {
        let p = random_point(&mut rng, 0.4);
        let geo = Geodesic::new(&p, &random_tangent(&mut rng, &p));
        let data = decompose_initial_data(&random_tangent(&mut rng, &p), &random_tangent(&mut rng, &p), geo.direction());
        residual = max_of([residual, jacobi_residual(&geo, &data, rng.gen_range(-3.0..3.0))]);
    }

    let mut order_dev = 0.0f64;
    for _ in 0..6 {
        let x = random_direction(&mut rng);
        let k = rng.gen_range(0..3);
        let r = rng.gen_range(0.3..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let dev = (|| -> Result<f64> {
            let local = scene.local(&x)?;
            let geo = Geodesic::new(&local.point, &local.frame.j_nu);
            let data = hypersurface_jacobi_data(&local.tangents[k], &local.shape, &local.frame);
            let base = map_f(scene, &x, r)?;
            let exact = jacobi_eval(&geo, &data, r).at(&base);
            let mut errors = Vec::new();
            for h in ORDER_STEPS {
                let mut d = [0.0; 3];
                d[k] = h;
                let plus = base.log(&map_f(scene, &x.moved(d), r)?);
                d[k] = -h;
                let minus = base.log(&map_f(scene, &x.moved(d), r)?);
                errors.push(((plus - minus).scale(0.5 / h) - exact.clone()).norm());
            }
            // least-squares slope of log e against log h
            let n = errors.len() as f64;
            let lx: Vec<f64> = ORDER_STEPS.iter().map(|h| h.ln()).collect();
            let ly: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
            let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
            let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
            let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
            Ok((cov / var - 2.0).abs())
        })()
        .unwrap_or(f64::NAN);
        order_dev = max_of([order_dev, dev]);
    }
    vec![
        CheckResult::at_most("jacobi.equation_residual", residual, 1e-6),
        CheckResult::at_most("jacobi.fd_order_deviation", order_dev, 0.2),
    ]
}

const DT_TIMES: [f64; 4] = [0.05, 0.5, 1.5, 3.0];

/// Finite-difference Jacobian of `(t, y) -> F(y, t)` at `(x, t)` from
/// `C_t = (∂t, Jν, e, Je)` to `B_t`.
pub fn fd_dt_matrix(scene: &Scene, x: &Direction, t: f64) -> Result<Matrix4<f64>> {
    let local = scene.local(x)?;
    let basis = local.frame.tangent_basis();
    let m = Matrix3::from_fn(|j, k| basis[j].dot(&local.tangents[k]));
    let minv = m.try_inverse().ok_or(crate::Error::DegenerateChart { condition: f64::INFINITY })?;
    let f = |s: [f64; 4]| {
        let d = minv * Vector3::new(s[1], s[2], s[3]);
        map_f(scene, &x.moved([d[0], d[1], d[2]]), t + s[0])
    };
    let base = map_f(scene, x, t)?;
    let frame = basis_bt(&local.frame, t).map(|v| v.at(&base));
    fd_jacobian_params(&f, &base, &frame)
}

/// `D_t` against the finite-difference Jacobian of `F` and the closed-form
/// determinant, for `t ∈ [0.05, 3]`.
pub fn dt_checks(scene: &Scene, seed: u64, relax: f64) -> Vec<CheckResult> {
    let mut rng = rng(seed, 5);
    let mut fd = 0.0f64;
    let mut det = 0.0f64;
    for _ in 0..6 {
        let x = random_direction(&mut rng);
        let Ok(local) = scene.local(&x) else {
            fd = f64::NAN;
            continue;
        };
        for t in DT_TIMES {
            let d = dt_matrix(&local.shape, t);
            fd = match fd_dt_matrix(scene, &x, t) {
                Ok(m) => max_of([fd, (m - d).abs().max() / d.abs().max()]),
                Err(_) => f64::NAN,
            };
            let num = d.determinant();
            det = max_of([det, ((dt_det(&local.shape, t) - num) / num).abs()]);
        }
    }
    vec![
        CheckResult::at_most("dt.fd_relative", fd, tol(1e-6, relax)),
        CheckResult::at_most("dt.determinant_relative", det, tol(1e-8, relax)),
    ]
}

/// Inversion of the foliation on random samples `q = F(x, ±t)`, with every
/// multistart seed run to check that all converged starts agree.
pub fn round_trip(scene: &Scene, seed: u64, samples: usize, relax: f64) -> Vec<CheckResult> {
    let mut rng = rng(seed, 6);
    let mut recovery = 0.0f64;
    let mut spread = 0.0f64;
    for i in 0..samples {
        let x = random_direction(&mut rng);
        let t = rng.gen_range(0.05..3.0);
        let branch = if i % 2 == 0 { Branch::Forward } else { Branch::Backward };
        let res = (|| -> Result<(f64, f64)> {
            let q = map_f(scene, &x, branch.sign() * t)?;
            let inv = invert_f_report(scene, &q, branch, Search::Exhaustive)?;
            let p = scene.surface_point(&x);
            let found = scene.surface_point(&inv.tangency.direction);
            Ok((p.distance(&found) + (inv.tangency.t - t).abs(), inv.spread))
        })();
        match res {
            Ok((r, s)) => {
                recovery = max_of([recovery, r]);
                spread = max_of([spread, s]);
            }
            Err(_) => recovery = f64::NAN,
        }
    }
    vec![
        CheckResult::at_most("inversion.round_trip", recovery, tol(1e-9, relax)),
        CheckResult::at_most("inversion.uniqueness_spread", spread, tol(1e-7, relax)),
    ]
}

/// Finite-difference `dB` at `q = F(x, -t)` from `B_{-t}` to `B_t`.
pub fn fd_billiard_differential(scene: &Scene, x: &Direction, t: f64) -> Result<Matrix4<f64>> {
    let local = scene.local(x)?;
    let q = map_f(scene, x, -t)?;
    let image = map_f(scene, x, t)?;
    let frame_in = basis_bt(&local.frame, -t).map(|v| v.at(&q));
    let frame_out = basis_bt(&local.frame, t).map(|v| v.at(&image));
    let guess = crate::billiard::Tangency { direction: *x, t };
    fd_jacobian(|p| Ok(billiard_step_near(scene, p, &guess)?.image), &q, &frame_in, &frame_out)
}

const SYMPLECTIC_TIMES: [f64; 3] = [0.2, 1.0, 2.0];

/// Symplecticity of `H_t` (closed form and finite differences), the closed
/// forms of `E(±t)`, and `G E(t) G = E(-t)`.
pub fn symplectic_checks(scene: &Scene, seed: u64, relax: f64) -> Vec<CheckResult> {
    let mut rng = rng(seed, 7);
    let g = g_matrix();
    let mut analytic = 0.0f64;
    let mut fd = 0.0f64;
    let mut fd_vs = 0.0f64;
    let mut e_err = 0.0f64;
    let mut geg = 0.0f64;
    for _ in 0..4 {
        let x = random_direction(&mut rng);
        let Ok(local) = scene.local(&x) else {
            analytic = f64::NAN;
            continue;
        };
        let a = &local.shape;
        for t in SYMPLECTIC_TIMES {
            match ht_matrix(a, t) {
                Ok(h) => {
                    analytic = max_of([analytic, symplectic_defect(&h)]);
                    match fd_billiard_differential(scene, &x, t) {
                        Ok(m) => {
                            fd = max_of([fd, symplectic_defect(&m)]);
                            fd_vs = max_of([fd_vs, (m - h).abs().max() / h.abs().max()]);
                        }
                        Err(_) => fd = f64::NAN,
                    }
                }
                Err(_) => analytic = f64::NAN,
            }
            for delta in [1.0, -1.0] {
                let d = dt_matrix(a, delta * t);
                let num = d.transpose() * omega() * d;
                e_err = max_of([e_err, (num - e_matrix(a, t, delta)).abs().max() / num.abs().max().max(1.0)]);
            }
            geg = max_of([geg, (g * e_matrix(a, t, 1.0) * g - e_matrix(a, t, -1.0)).abs().max()]);
        }
    }
    vec![
        CheckResult::at_most("symplectic.analytic_defect", analytic, tol(1e-10, relax)),
        CheckResult::at_most("symplectic.fd_defect", fd, tol(1e-6, relax)),
        CheckResult::at_most("symplectic.fd_vs_analytic", fd_vs, tol(1e-6, relax)),
        CheckResult::at_most("symplectic.e_closed_forms", e_err, tol(1e-10, relax)),
        CheckResult::at_most("symplectic.g_e_g", geg, tol(1e-12, relax)),
    ]
}

/// Disc coordinate of a point of a complex line through its anchor, in the
/// model where `tanh d(0, z) = |z|`.
pub fn disc_coordinate(line: &ComplexLine, q: &Point) -> Complex64 {
    let v = line.anchor().log(q);
    let u = line.direction();
    let (a, b) = (v.dot(u), v.dot(&u.j()));
    Complex64::from_polar(a.hypot(b).tanh(), b.atan2(a))
}

/// For a sphere: an orbit started on a complex line through the center stays
/// on it and agrees with the planar circle billiard.
pub fn line_invariance(scene: &Scene, steps: usize) -> Vec<CheckResult> {
    let Some(radius) = scene.sphere_radius() else {
        return Vec::new();
    };
    let x = Direction::new([0.3, -0.5, 0.7, 0.2]).expect("nonzero");
    let line = ComplexLine::new(scene.center(), &scene.unit_vector(&x));
    let q0 = line.point(radius + 0.25, 0.1);
    let orbit = iterate(scene, &q0, steps);
    if !orbit.is_complete() {
        return vec![CheckResult::failed("line.distance", 1e-8), CheckResult::failed("line.disc_oracle", 1e-8)];
    }
    let mut dist = 0.0f64;
    let mut oracle = 0.0f64;
    let mut z = disc_coordinate(&line, &q0);
    for q in &orbit.points {
        dist = max_of([dist, complex_line_distance(q, &line)]);
        oracle = max_of([oracle, h2_distance(z, disc_coordinate(&line, q))]);
        z = match h2_circle_billiard(radius, z) {
            Ok(w) => w,
            Err(_) => return vec![CheckResult::failed("line.disc_oracle", 1e-8)],
        };
    }
    vec![CheckResult::at_most("line.distance", dist, 1e-8), CheckResult::at_most("line.disc_oracle", oracle, 1e-8)]
}

/// For a sphere below the threshold radius: a 3-periodic orbit found by the
/// search sits at the radius predicted by the planar construction.
pub fn three_periodic(scene: &Scene) -> Vec<CheckResult> {
    let threshold = three_periodic_threshold();
    let mut out = vec![CheckResult::at_most("periodic.threshold", ((2.0 * threshold).tanh() - 0.5).abs(), 1e-12)];
    let Some(radius) = scene.sphere_radius() else {
        return out;
    };
    if radius >= threshold {
        return out;
    }
    let x = Direction::new([0.2, 0.1, -0.6, 0.4]).expect("nonzero");
    let Some(seed) = sphere_seed(scene, 3, &x) else {
        out.push(CheckResult::failed("periodic.residual", 1e-10));
        return out;
    };
    // start off the predicted radius and off the complex line
    let nudged = scene.center().exp(
        &(scene.unit_vector(&x).scale(periodic_radius(radius, 3).unwrap_or(0.5) + 0.02)
            + scene.center_frame()[1].scale(0.02)),
    );
    match find_periodic_orbit(scene, 3, &[nudged, seed]) {
        Ok(orbit) => {
            let rel = max_of(orbit.points.iter().map(|q| {
                let d = scene.center().distance(q);
                ((2.0 * d).tanh() - 2.0 * (2.0 * radius).tanh()).abs()
            }));
            out.push(CheckResult::at_most("periodic.residual", orbit.residual, 1e-10));
            out.push(CheckResult::at_most("periodic.radius_relation", rel, 1e-8));
        }
        Err(_) => {
            out.push(CheckResult::failed("periodic.residual", 1e-10));
            out.push(CheckResult::failed("periodic.radius_relation", 1e-8));
        }
    }
    out
}

/// Symplectic area: independence of the cone apex, vanishing on degenerate
/// triangles, and additivity under a cevian split.
pub fn area_checks(seed: u64) -> Vec<CheckResult> {
    let mut rng = rng(seed, 10);
    let mut filling = 0.0f64;
    let mut degenerate = 0.0f64;
    let mut cevian = 0.0f64;
    for _ in 0..5 {
        let p1 = random_point(&mut rng, 0.6);
        let p2 = random_point(&mut rng, 0.6);
        let p3 = random_point(&mut rng, 0.6);
        let a = symplectic_area(&p1, &p2, &p3);
        filling = max_of([filling, (a - symplectic_area_cone(&p2, &p3, &p1)).abs()]);
        let (edge, len) = Geodesic::between(&p1, &p2).expect("distinct points");
        let beyond = edge.point(rng.gen_range(1.1..1.8) * len);
        degenerate = max_of([degenerate, symplectic_area(&p1, &p2, &beyond).abs()]);
        let m = edge.point(rng.gen_range(0.2..0.8) * len);
        let split = symplectic_area(&p1, &m, &p3) + symplectic_area(&m, &p2, &p3);
        cevian = max_of([cevian, (a - split).abs()]);
    }
    vec![
        CheckResult::at_most("area.filling_independence", filling, 1e-6),
        CheckResult::at_most("area.degenerate", degenerate, 1e-8),
        CheckResult::at_most("area.cevian_additivity", cevian, 1e-6),
    ]
}

/// Smallest shape-operator eigenvalue over a sample of the hypersurface.
pub fn convexity(scene: &Scene) -> Vec<CheckResult> {
    let samples = Direction::quasi_uniform(scene.tolerances().convexity_samples);
    let min = scene.min_sampled_eigenvalue(&samples).unwrap_or(f64::NAN);
    vec![CheckResult::at_least("convexity.min_eigenvalue", min, scene.tolerances().convexity_min_eig)]
}

/// Relaxed tolerance for scenes whose shape operator comes from finite differences.
pub const PERTURBED_TOLERANCE: f64 = 1e-5;

fn relax_for(scene: &Scene) -> f64 {
    match scene.spec() {
        SceneSpec::Sphere { .. } => 0.0,
        SceneSpec::RadialGraph { .. } => PERTURBED_TOLERANCE,
    }
}

/// Every check that applies to `scene`; the scene-independent ones are
/// included so that the report is self-contained.
pub fn suite(scene: &Scene, seed: u64) -> Vec<CheckResult> {
    let relax = relax_for(scene);
    let mut out = Vec::new();
    out.extend(curvature_anchors(seed));
    out.extend(distance_exp(seed));
    out.extend(parallel_transport_checks(seed));
    out.extend(jacobi_fields(scene, seed));
    out.extend(dt_checks(scene, seed, relax));
    out.extend(round_trip(scene, seed, 100, relax));
    out.extend(symplectic_checks(scene, seed, relax));
    out.extend(line_invariance(scene, 200));
    out.extend(three_periodic(scene));
    out.extend(area_checks(seed));
    if relax > 0.0 {
        out.extend(convexity(scene));
    }
    out
}

/// Ball coordinates, for reports.
pub fn ball_coords(p: &Point) -> [f64; 4] {
    to_ball(p).coords()
}
