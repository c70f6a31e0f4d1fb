use serde::Serialize;

use ch2_billiards::dynamics::{
    continue_periodic, find_periodic_orbit_on_line, periodic_radius, ComplexLine, PeriodicOrbit,
};
use ch2_billiards::geometry::Point;
use ch2_billiards::hypersurface::{Direction, Perturbation, Scene, SceneSpec};
use ch2_billiards::verify::ball_coords;
use ch2_billiards::Error;

use crate::{Failure, EXIT_NOT_FOUND, EXIT_OK};

/// Continuation steps from the unperturbed sphere to the target scene.
const CONTINUATION_STEPS: usize = 8;

#[derive(Serialize)]
pub struct PeriodicReport {
    pub version: &'static str,
    pub period: usize,
    pub found: bool,
    /// Ball coordinates of `q, Bq, ..., B^{k-1} q`.
    pub points: Vec<[f64; 4]>,
    /// `d(B^k q, q)`, or the best value reached when nothing was found.
    pub residual: f64,
    pub scene: SceneSpec,
    pub prediction: Option<Prediction>,
}

/// Planar circle-billiard prediction for spheres: `tanh 2d = tanh 2R / cos(π/k)`.
#[derive(Serialize)]
pub struct Prediction {
    pub sphere_radius: f64,
    /// `None` when the relation has no solution.
    pub distance: Option<f64>,
    /// Distances of the found orbit points to the center.
    pub orbit_distances: Vec<f64>,
    /// `max |tanh 2d - tanh 2R / cos(π/k)|` over the orbit.
    pub relation_error: Option<f64>,
}

fn seeds_on(line: &ComplexLine, radius: f64, k: usize) -> Vec<Point> {
    let mut out: Vec<Point> = periodic_radius(radius, k).map(|d| line.point(d, 0.0)).into_iter().collect();
    out.extend([0.2, 0.7, 1.7].iter().map(|s| line.point(radius + s, 0.0)));
    out
}

fn base_radius(spec: &SceneSpec) -> f64 {
    match spec {
        SceneSpec::Sphere { radius, .. } => *radius,
        SceneSpec::RadialGraph { base_radius, .. } => *base_radius,
    }
}

fn with_epsilon(scene: &Scene, epsilon: f64) -> Result<Scene, Failure> {
    let SceneSpec::RadialGraph { center, base_radius, perturbation } = scene.spec().clone() else {
        unreachable!("only radial graphs are continued");
    };
    let spec = SceneSpec::RadialGraph { center, base_radius, perturbation: Perturbation { epsilon, ..perturbation } };
    Scene::with_tolerances(spec, *scene.tolerances()).map_err(|e| Failure::input(format!("continuation at ε = {epsilon}: {e}")))
}

/// The orbit, or the best residual reached when none was found.
fn search(scene: &Scene, k: usize, start: Option<&Point>) -> Result<Result<PeriodicOrbit, f64>, Failure> {
    let x = start
        .and_then(|q| scene.direction_of(q))
        .map(|(x, _)| x)
        .unwrap_or_else(|| Direction::new([1.0, 0.0, 0.0, 0.0]).expect("nonzero"));
    let line = ComplexLine::new(scene.center(), &scene.unit_vector(&x));
    let mut seeds: Vec<Point> = start.into_iter().cloned().collect();
    seeds.extend(seeds_on(&line, base_radius(scene.spec()), k));
    let result = match scene.spec() {
        // orbits of spheres stay on the complex line through the center
        SceneSpec::Sphere { .. } => find_periodic_orbit_on_line(scene, k, &line, &seeds),
        SceneSpec::RadialGraph { perturbation, .. } => {
            let base = with_epsilon(scene, 0.0)?;
            let first = find_periodic_orbit_on_line(&base, k, &line, &seeds);
            match first {
                Ok(orbit) => {
                    let family = (1..=CONTINUATION_STEPS)
                        .map(|i| with_epsilon(scene, perturbation.epsilon * i as f64 / CONTINUATION_STEPS as f64))
                        .collect::<Result<Vec<_>, _>>()?;
                    continue_periodic(&family, &orbit).map(|mut v| v.pop().unwrap_or(orbit))
                }
                Err(e) => Err(e),
            }
        }
    };
    match result {
        Ok(orbit) => Ok(Ok(orbit)),
        Err(Error::NotFound { residual, .. }) => Ok(Err(residual)),
        Err(other) => Err(Failure::input(other)),
    }
}

pub fn run(scene: &Scene, k: usize, start: Option<&Point>) -> Result<(PeriodicReport, u8), Failure> {
    let (orbit, residual) = match search(scene, k, start)? {
        Ok(orbit) => {
            let r = orbit.residual;
            (Some(orbit), r)
        }
        Err(best) => (None, best),
    };
    let prediction = scene.sphere_radius().map(|r| {
        let distances: Vec<f64> =
            orbit.iter().flat_map(|o| o.points.iter().map(|q| scene.center().distance(q))).collect();
        let target = (2.0 * r).tanh() / (std::f64::consts::PI / k as f64).cos();
        let relation_error = orbit
            .as_ref()
            .map(|_| distances.iter().map(|d| ((2.0 * d).tanh() - target).abs()).fold(0.0, f64::max));
        Prediction { sphere_radius: r, distance: periodic_radius(r, k), orbit_distances: distances, relation_error }
    });
    let found = orbit.is_some();
    let report = PeriodicReport {
        version: env!("CARGO_PKG_VERSION"),
        period: k,
        found,
        points: orbit.map(|o| o.points.iter().map(ball_coords).collect()).unwrap_or_default(),
        residual,
        scene: scene.spec().clone(),
        prediction,
    };
    if !found {
        eprintln!("no orbit of period {k} found");
    }
    Ok((report, if found { EXIT_OK } else { EXIT_NOT_FOUND }))
}
