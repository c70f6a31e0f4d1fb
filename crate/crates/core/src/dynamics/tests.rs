use super::*;
use crate::geometry::BallPoint;
use crate::hypersurface::{Direction, SceneSpec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn sphere(r: f64) -> Scene {
    Scene::new(SceneSpec::sphere(BallPoint::from_coords([0.1, 0.05, -0.1, 0.2]), r)).unwrap()
}

fn central_line(scene: &Scene, x: &Direction) -> ComplexLine {
    ComplexLine::new(scene.center(), &scene.unit_vector(x))
}

/// Disc coordinate of a point of a complex line through its anchor.
fn disc_coord(line: &ComplexLine, q: &Point) -> Complex64 {
    let v = line.anchor().log(q);
    let u = line.direction();
    let (a, b) = (v.dot(u), v.dot(&u.j()));
    let r = a.hypot(b);
    Complex64::from_polar(r.tanh(), b.atan2(a))
}

fn random_point(rng: &mut ChaCha8Rng) -> Point {
    loop {
        let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-0.6..0.6));
        if let Ok(p) = crate::geometry::from_ball(&BallPoint::from_coords(c)) {
            return p;
        }
    }
}

#[test]
fn line_points_and_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    for _ in 0..10 {
        let p = random_point(&mut rng);
        let q = random_point(&mut rng);
        let line = ComplexLine::through(&p, &q).unwrap();
        assert!(complex_line_distance(&p, &line) <= 1e-12);
        assert!(complex_line_distance(&q, &line) <= 1e-12);
        assert!(complex_line_distance(&line.point(0.3, -0.7), &line) <= 1e-12);
        let off = random_point(&mut rng);
        let d = complex_line_distance(&off, &line);
        assert!((complex_line_distance(&line.reflect(&off), &line) - d).abs() <= 1e-12);

        // brute-force minimisation over the parametrised line
        let f = |a: f64, b: f64| off.distance(&line.point(a, b));
        let (mut a, mut b, mut h) = (0.0, 0.0, 1.0);
        let mut best = f(a, b);
        while h > 1e-9 {
            let mut moved = false;
            for (da, db) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
                let v = f(a + da, b + db);
                if v < best {
                    best = v;
                    a += da;
                    b += db;
                    moved = true;
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        assert!((best - d).abs() <= 1e-6, "{best} vs {d}");
    }
}

#[test]
fn sphere_orbit_stays_on_line_and_matches_disc() {
    let r = 0.2;
    let scene = sphere(r);
    let x = Direction::new([0.3, -0.5, 0.7, 0.2]).unwrap();
    let line = central_line(&scene, &x);
    let q0 = line.point(0.45, 0.2);
    let orbit = iterate(&scene, &q0, 200);
    assert!(orbit.is_complete(), "{:?}", orbit.stopped);
    let mut z = disc_coord(&line, &q0);
    for (i, q) in orbit.points.iter().enumerate() {
        assert!(complex_line_distance(q, &line) <= 1e-8, "step {i}");
        let w = disc_coord(&line, q);
        assert!(h2_distance(z, w) <= 1e-8, "step {i}: {z} vs {w}");
        z = h2_circle_billiard(r, z).unwrap();
    }
}

#[test]
fn forward_then_backward() {
    let scene = Scene::new(SceneSpec::RadialGraph {
        center: BallPoint::from_coords([0.0, 0.1, 0.1, 0.0]),
        base_radius: 0.3,
        perturbation: crate::hypersurface::Perturbation {
            epsilon: 0.05,
            coeffs: [1.0, 0.0, 0.0, 0.5, 0.0, 0.3, 0.0, -1.0, 0.0, 0.0],
        },
    })
    .unwrap();
    let x = Direction::new([0.1, 0.4, -0.3, 0.8]).unwrap();
    let q0 = scene.center().exp(&scene.unit_vector(&x).scale(0.9));
    assert_eq!(iterate(&scene, &q0, 0).points.len(), 1);
    let fwd = iterate(&scene, &q0, 20);
    assert!(fwd.is_complete());
    let back = iterate_inverse(&scene, fwd.last(), 20);
    assert!(back.is_complete());
    assert!(back.last().distance(&q0) <= 1e-7);
    for (i, q) in back.points.iter().enumerate() {
        assert!(q.distance(&fwd.points[20 - i]) <= 1e-7);
    }
}

#[test]
fn orbit_stops_inside() {
    let scene = sphere(0.3);
    let orbit = iterate(&scene, scene.center(), 5);
    assert!(matches!(orbit.stopped, Some(Error::NotExterior)));
    assert_eq!(orbit.points.len(), 1);
}

#[test]
fn three_periodic_sphere() {
    let r = 0.2;
    let scene = sphere(r);
    let x = Direction::new([0.2, 0.1, -0.6, 0.4]).unwrap();
    let seed = sphere_seed(&scene, 3, &x).unwrap();
    // start off the orbit radius and off the complex line
    let off = scene.center().exp(&(scene.unit_vector(&x).scale(0.62) + scene.center_frame()[1].scale(0.03)));
    let orbit = find_periodic_orbit(&scene, 3, &[off, seed]).unwrap();
    assert!(orbit.residual <= 1e-10);
    let d_star = periodic_radius(r, 3).unwrap();
    for q in &orbit.points {
        let d = scene.center().distance(q);
        assert!(((2.0 * d).tanh() - 2.0 * (2.0 * r).tanh()).abs() <= 1e-8);
        assert!((d - d_star).abs() <= 1e-8);
    }
    // the orbit lies in one complex line through the center
    let line = ComplexLine::through(scene.center(), &orbit.points[0]).unwrap();
    for q in &orbit.points {
        assert!(complex_line_distance(q, &line) <= 1e-8);
    }

    // cyclic relabelling gives the same point set
    let again = find_periodic_orbit(&scene, 3, &[orbit.points[1].clone()]).unwrap();
    for q in &again.points {
        let nearest = orbit.points.iter().map(|p| p.distance(q)).fold(f64::INFINITY, f64::min);
        assert!(nearest <= 1e-9);
    }
}

#[test]
fn no_three_periodic_above_threshold() {
    let r = 0.3;
    assert!(r > three_periodic_threshold());
    let scene = sphere(r);
    let x = Direction::new([1.0, 0.0, 0.0, 0.0]).unwrap();
    let line = central_line(&scene, &x);
    let seeds: Vec<Point> = [0.5, 1.0, 2.0].iter().map(|&d| line.point(d, 0.0)).collect();
    let err = find_periodic_orbit_on_line(&scene, 3, &line, &seeds).unwrap_err();
    assert!(matches!(err, Error::NotFound { period: 3, .. }), "{err:?}");
}

#[test]
fn no_two_periodic_and_period_checked() {
    let scene = sphere(0.2);
    let x = Direction::new([0.0, 1.0, 0.0, 0.0]).unwrap();
    let line = central_line(&scene, &x);
    let seeds: Vec<Point> = [0.4, 1.5].iter().map(|&d| line.point(d, 0.0)).collect();
    assert!(matches!(find_periodic_orbit(&scene, 2, &seeds), Err(Error::NotFound { period: 2, .. })));
    assert!(matches!(find_periodic_orbit(&scene, 1, &seeds), Err(Error::InvalidPeriod(1))));
}

#[test]
fn gauss_legendre_rule() {
    let rule = gauss_legendre(32);
    let total: f64 = rule.iter().map(|w| w.1).sum();
    assert!((total - 1.0).abs() <= 1e-14);
    for k in 0..40 {
        let q: f64 = rule.iter().map(|(x, w)| w * x.powi(k)).sum();
        assert!((q - 1.0 / (k + 1) as f64).abs() <= 1e-14, "degree {k}");
    }
}

/// Interior angle at `a` of the geodesic triangle `a b c`.
fn angle(a: &Point, b: &Point, c: &Point) -> f64 {
    let u = a.log(b).normalized();
    let v = a.log(c).normalized();
    u.dot(&v).clamp(-1.0, 1.0).acos()
}

#[test]
fn area_in_a_complex_line() {
    // on a complex line ω is the area form, and Gauss–Bonnet at curvature -4
    // gives area (π - angle sum) / 4
    let mut rng = ChaCha8Rng::seed_from_u64(211);
    for _ in 0..5 {
        let anchor = random_point(&mut rng);
        let u = crate::geometry::origin_frame()[2].at(&anchor);
        let u = anchor.project(u.vec()).normalized();
        let line = ComplexLine::new(&anchor, &u);
        let p: Vec<Point> =
            (0..3).map(|_| line.point(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8))).collect();
        let area = symplectic_area(&p[0], &p[1], &p[2]);
        let sum = angle(&p[0], &p[1], &p[2]) + angle(&p[1], &p[2], &p[0]) + angle(&p[2], &p[0], &p[1]);
        let want = (PI - sum) / 4.0;
        // orientation from the disc coordinates
        let z: Vec<Complex64> = p.iter().map(|q| disc_coord(&line, q)).collect();
        let orient = ((z[1] - z[0]).conj() * (z[2] - z[0])).im.signum();
        assert!((area - orient * want).abs() <= 1e-8, "{area} vs {}", orient * want);
    }
}

#[test]
fn area_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(223);
    for _ in 0..5 {
        let p1 = random_point(&mut rng);
        let p2 = random_point(&mut rng);
        let p3 = random_point(&mut rng);
        let a = symplectic_area(&p1, &p2, &p3);
        assert!((a - symplectic_area_cone(&p2, &p3, &p1)).abs() <= 1e-6);
        assert!((a - symplectic_area_cone(&p3, &p1, &p2)).abs() <= 1e-6);
        assert!((a + symplectic_area(&p1, &p3, &p2)).abs() <= 1e-12);

        let (edge, len) = crate::geometry::Geodesic::between(&p1, &p2).unwrap();
        let m = edge.point(0.37 * len);
        let split = symplectic_area(&p1, &m, &p3) + symplectic_area(&m, &p2, &p3);
        assert!((a - split).abs() <= 1e-6);

        let beyond = edge.point(1.4 * len);
        assert!(symplectic_area(&p1, &p2, &beyond).abs() <= 1e-8);
        assert!(symplectic_area(&p1, &m, &p2).abs() <= 1e-8);
    }
}

#[test]
fn totally_real_triangle_has_no_area() {
    // the real points of the ball span a Lagrangian plane
    let p: Vec<Point> = [[0.3, 0.0, 0.1, 0.0], [-0.2, 0.0, 0.4, 0.0], [0.1, 0.0, -0.5, 0.0]]
        .iter()
        .map(|c| crate::geometry::from_ball(&BallPoint::from_coords(*c)).unwrap())
        .collect();
    assert!(symplectic_area(&p[0], &p[1], &p[2]).abs() <= 1e-10);
}

#[test]
fn area_gradient_matches_difference() {
    let scene = sphere(0.3);
    let x = [
        Direction::new([1.0, 0.0, 0.0, 0.0]).unwrap(),
        Direction::new([0.0, 1.0, 0.2, 0.0]).unwrap(),
        Direction::new([0.0, 0.3, 1.0, 0.5]).unwrap(),
    ];
    let g = area_gradient(&scene, &x, 1e-4);
    let area = |d: &[Direction; 3]| {
        let p = d.map(|y| scene.surface_point(&y));
        symplectic_area(&p[0], &p[1], &p[2])
    };
    let h = 1e-3;
    let mut moved = x;
    moved[1] = x[1].moved([0.0, h, 0.0]);
    assert!(((area(&moved) - area(&x)) / h - g[4]).abs() <= 1e-2 * g[4].abs().max(1e-3));
}

#[test]
fn symmetric_graph_preserves_its_line() {
    // q even in (x2, x3): the scene is invariant under the reflection fixing
    // the complex line spanned by the first center direction
    let scene = Scene::new(SceneSpec::RadialGraph {
        center: BallPoint::from_coords([0.1, 0.05, -0.1, 0.2]),
        base_radius: 0.3,
        perturbation: crate::hypersurface::Perturbation {
            epsilon: 0.05,
            coeffs: [1.0, 0.5, 0.0, 0.0, -0.3, 0.0, 0.0, 0.4, 0.2, -0.1],
        },
    })
    .unwrap();
    let x = Direction::new([1.0, 0.0, 0.0, 0.0]).unwrap();
    let line = central_line(&scene, &x);
    let orbit = iterate(&scene, &line.point(0.5, 0.3), 30);
    assert!(orbit.is_complete());
    for q in &orbit.points {
        assert!(complex_line_distance(q, &line) <= 1e-8);
    }
}
