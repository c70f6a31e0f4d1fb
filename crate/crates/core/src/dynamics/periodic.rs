use nalgebra::{DMatrix, DVector};

use super::{periodic_radius, ComplexLine};
use crate::billiard::{billiard_step, billiard_step_near, Step, Tangency};
use crate::error::{Error, Result};
use crate::geometry::{transport_to, Point, TangentVector};
use crate::hypersurface::{Direction, Scene, SceneSpec};

const FD_STEP: f64 = 1e-6;
/// Seeds whose orbit wanders further than this from the center are abandoned.
const ESCAPE: f64 = 6.0;
/// Longest Gauss–Newton step.
const MAX_STEP: f64 = 0.5;
/// Relative cutoff of the pseudo-inverse.
const SVD_CUTOFF: f64 = 1e-7;

/// A periodic orbit `q, Bq, ..., B^{k-1} q` with `d(B^k q, q) = residual`.
#[derive(Debug, Clone)]
pub struct PeriodicOrbit {
    pub period: usize,
    pub points: Vec<Point>,
    pub tangencies: Vec<Tangency>,
    pub residual: f64,
    pub iterations: usize,
}

/// Seed for spheres (and the base sphere of a radial graph): the point at
/// the distance where the planar circle billiard has a `k`-periodic orbit,
/// in direction `x` from the center.
pub fn sphere_seed(scene: &Scene, k: usize, x: &Direction) -> Option<Point> {
    let radius = match scene.spec() {
        SceneSpec::Sphere { radius, .. } => *radius,
        SceneSpec::RadialGraph { base_radius, .. } => *base_radius,
    };
    let d = periodic_radius(radius, k)?;
    Some(scene.center().exp(&scene.unit_vector(x).scale(d)))
}

fn power(scene: &Scene, q: &Point, k: usize, guesses: Option<&[Tangency]>) -> Result<(Vec<Point>, Vec<Tangency>)> {
    let mut points = vec![q.clone()];
    let mut tangencies = Vec::with_capacity(k);
    for i in 0..k {
        let last = points.last().expect("nonempty");
        let step: Step = match guesses {
            Some(g) => billiard_step_near(scene, last, &g[i])?,
            None => billiard_step(scene, last)?,
        };
        points.push(step.image);
        tangencies.push(step.tangency);
    }
    Ok((points, tangencies))
}

/// Search space: the whole plane, or one complex line.
struct Chart<'a> {
    line: Option<&'a ComplexLine>,
}

impl Chart<'_> {
    fn dim(&self) -> usize {
        if self.line.is_some() {
            2
        } else {
            4
        }
    }

    fn tangents(&self, scene: &Scene, q: &Point) -> Vec<TangentVector> {
        match self.line {
            Some(line) => {
                let u = transport_to(line.direction(), q).normalized();
                vec![u.clone(), u.j()]
            }
            None => scene.frame_at(q).to_vec(),
        }
    }
}

struct Attempt {
    orbit: Option<PeriodicOrbit>,
    best: f64,
}

fn newton(scene: &Scene, k: usize, seed: &Point, chart: &Chart) -> Attempt {
    let tol = scene.tolerances();
    let mut q = seed.clone();
    let mut best = f64::INFINITY;
    let Ok((mut pts, mut tg)) = power(scene, &q, k, None) else {
        return Attempt { orbit: None, best };
    };
    for iter in 0..=tol.periodic_max_iter {
        let res = q.distance(&pts[k]);
        best = best.min(res);
        if res <= tol.periodic_residual {
            pts.truncate(k);
            return Attempt {
                orbit: Some(PeriodicOrbit { period: k, points: pts, tangencies: tg, residual: res, iterations: iter }),
                best,
            };
        }
        if iter == tol.periodic_max_iter || pts.iter().any(|p| scene.center().distance(p) > ESCAPE) {
            break;
        }
        let frame = scene.frame_at(&q);
        let basis = chart.tangents(scene, &q);
        let n = chart.dim();
        // r(s) = log_q B^k(q_s) - s, in the frame at q
        let residual = |s: &[f64]| -> Result<DVector<f64>> {
            let v = TangentVector::combine(&basis, s);
            let qs = q.exp(&v);
            let (p, _) = power(scene, &qs, k, Some(&tg))?;
            let w = q.log(&p[k]) - v;
            Ok(DVector::from_column_slice(&w.coords(&frame)))
        };
        let Ok(r0) = residual(&vec![0.0; n]) else { break };
        let mut jac = DMatrix::zeros(4, n);
        let mut ok = true;
        for i in 0..n {
            let mut s = vec![0.0; n];
            s[i] = FD_STEP;
            let plus = residual(&s);
            s[i] = -FD_STEP;
            let minus = residual(&s);
            match (plus, minus) {
                (Ok(a), Ok(b)) => jac.set_column(i, &((a - b) / (2.0 * FD_STEP))),
                _ => ok = false,
            }
        }
        if !ok {
            break;
        }
        let svd = jac.svd(true, true);
        let cutoff = SVD_CUTOFF * svd.singular_values.max();
        let Ok(mut step) = svd.solve(&(-&r0), cutoff) else { break };
        if !step.iter().all(|v| v.is_finite()) {
            break;
        }
        let len = step.norm();
        if len > MAX_STEP {
            step *= MAX_STEP / len;
        }
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..20 {
            let s: Vec<f64> = step.iter().map(|x| lambda * x).collect();
            let qn = q.exp(&TangentVector::combine(&basis, &s));
            if scene.center().distance(&qn) > ESCAPE {
                lambda *= 0.5;
                continue;
            }
            if let Ok((pn, tn)) = power(scene, &qn, k, Some(&tg)) {
                if qn.distance(&pn[k]) < res {
                    q = qn;
                    pts = pn;
                    tg = tn;
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
    Attempt { orbit: None, best }
}

fn search(scene: &Scene, k: usize, seeds: &[Point], chart: Chart) -> Result<PeriodicOrbit> {
    if k < 2 {
        return Err(Error::InvalidPeriod(k));
    }
    let mut best = f64::INFINITY;
    for seed in seeds {
        let attempt = newton(scene, k, seed, &chart);
        if let Some(orbit) = attempt.orbit {
            return Ok(orbit);
        }
        best = best.min(attempt.best);
    }
    Err(Error::NotFound { period: k, residual: best })
}

/// Gauss–Newton on `q -> log_q B^k(q)` from each seed in turn, with a
/// finite-difference Jacobian and a pseudo-inverse step (the fixed-point set
/// of a sphere is not isolated). Returns the first orbit whose residual
/// distance drops below the scene's `periodic_residual`.
pub fn find_periodic_orbit(scene: &Scene, k: usize, seeds: &[Point]) -> Result<PeriodicOrbit> {
    search(scene, k, seeds, Chart { line: None })
}

/// Same search with `q` restricted to a complex line.
pub fn find_periodic_orbit_on_line(scene: &Scene, k: usize, line: &ComplexLine, seeds: &[Point]) -> Result<PeriodicOrbit> {
    search(scene, k, seeds, Chart { line: Some(line) })
}

/// Follows a periodic orbit through a family of scenes, seeding each search
/// with the previous orbit's first point.
pub fn continue_periodic(scenes: &[Scene], start: &PeriodicOrbit) -> Result<Vec<PeriodicOrbit>> {
    let mut out = Vec::with_capacity(scenes.len());
    let mut seed = start.points[0].clone();
    for scene in scenes {
        let orbit = find_periodic_orbit(scene, start.period, std::slice::from_ref(&seed))?;
        seed = orbit.points[0].clone();
        out.push(orbit);
    }
    Ok(out)
}
