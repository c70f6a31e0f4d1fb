use super::*;
use crate::geometry::BallPoint;

const SHIPPED: [f64; 10] = [1.0, 0.0, 0.0, 0.5, 0.0, 0.3, 0.0, -1.0, 0.0, 0.0];

fn center() -> BallPoint {
    BallPoint::from_coords([0.1, -0.05, 0.2, 0.1])
}

fn sphere(r: f64) -> Scene {
    Scene::new(SceneSpec::sphere(center(), r)).unwrap()
}

fn graph(r: f64, epsilon: f64, coeffs: [f64; 10]) -> Result<Scene> {
    Scene::new(SceneSpec::RadialGraph { center: center(), base_radius: r, perturbation: Perturbation { epsilon, coeffs } })
}

fn probes() -> Vec<Direction> {
    Direction::quasi_uniform(25)
}

#[test]
fn surface_points_sit_at_the_radial_function() {
    let s = sphere(0.4);
    let flat = graph(0.4, 0.0, SHIPPED).unwrap();
    let bumpy = graph(0.4, 0.05, SHIPPED).unwrap();
    for x in probes() {
        assert!((s.center().distance(&s.surface_point(&x)) - 0.4).abs() <= 1e-12);
        assert!(flat.surface_point(&x).approx_eq(&s.surface_point(&x), 1e-12));
        let d = bumpy.center().distance(&bumpy.surface_point(&x));
        assert!((d - bumpy.radius_at(&x)).abs() <= 1e-12);
    }
}

#[test]
fn chart_tangents_match_differences() {
    let g = graph(0.5, 0.05, SHIPPED).unwrap();
    let h = 1e-5;
    for x in probes() {
        let p = g.surface_point(&x);
        let t = g.chart_tangents(&x);
        for k in 0..3 {
            let mut d = [0.0; 3];
            d[k] = h;
            let plus = p.log(&g.surface_point(&x.moved(d)));
            d[k] = -h;
            let minus = p.log(&g.surface_point(&x.moved(d)));
            let fd = (plus - minus).scale(0.5 / h);
            assert!((fd - t[k].clone()).norm() <= 1e-8, "tangent {k}");
        }
    }
}

#[test]
fn normals() {
    let s = sphere(0.3);
    let g = graph(0.3, 0.05, SHIPPED).unwrap();
    for x in probes() {
        let nu = s.inward_normal(&x).unwrap();
        let radial = Geodesic::new(s.center(), &s.unit_vector(&x)).velocity(0.3);
        assert!((nu.dot(&radial) + 1.0).abs() <= 1e-12);

        let nu_g = g.inward_normal(&x).unwrap();
        assert!((nu_g.norm() - 1.0).abs() <= 1e-12);
        for t in g.chart_tangents(&x) {
            assert!(nu_g.dot(&t).abs() <= 1e-10);
        }
        // O(epsilon) tilt away from the sphere normal at the same direction
        let sphere_nu = -Geodesic::new(g.center(), &g.unit_vector(&x)).velocity(g.radius_at(&x));
        let tilt = (nu_g.clone() - sphere_nu).norm();
        assert!(tilt <= 4.0 * 0.05, "tilt {tilt}");
    }
}

#[test]
fn adapted_frames_are_orthonormal_and_deterministic() {
    let g = graph(0.3, 0.05, SHIPPED).unwrap();
    for x in probes() {
        let f = g.adapted_frame(&x).unwrap();
        assert!(f.gram_defect() <= 1e-10);
        assert_eq!(f.j_nu, f.nu.j());
        assert_eq!(f.j_e, f.e.j());
        assert_eq!(f, g.adapted_frame(&x).unwrap());
    }
    // on the complex line w = 0 the e2 reference is already orthogonal to ν, Jν
    let s = Scene::new(SceneSpec::sphere(BallPoint::from_coords([0.0; 4]), 0.2)).unwrap();
    let f = s.adapted_frame(&Direction::new([1.0, 0.0, 0.0, 0.0]).unwrap()).unwrap();
    assert!(f.gram_defect() <= 1e-14);
}

#[test]
fn sphere_shape_closed_form_matches_differences() {
    for r in [0.2, 0.5, 1.2] {
        let s = sphere(r);
        let flat = graph(r, 0.0, [0.0; 10]).unwrap();
        for x in Direction::quasi_uniform(8) {
            let closed = s.shape_matrix(&x, &s.adapted_frame(&x).unwrap()).unwrap();
            let fd = flat.shape_matrix(&x, &flat.adapted_frame(&x).unwrap()).unwrap();
            let err = (closed.matrix() - fd.matrix()).abs().max();
            assert!(err <= 1e-6, "r = {r}: {err}");
            let ev = closed.eigenvalues();
            assert!(ev.iter().all(|&e| e > 1.0));
            let coth = 1.0 / r.tanh();
            assert!((ev[0] - coth).abs() <= 1e-12 && (ev[2] - 2.0 / (2.0 * r).tanh()).abs() <= 1e-12);
        }
    }
}

#[test]
fn sphere_shape_is_frame_independent() {
    // rotating e within the J-invariant complement leaves the matrix unchanged
    let s = sphere(0.6);
    let x = Direction::new([0.2, 0.4, -0.3, 0.8]).unwrap();
    let f = s.adapted_frame(&x).unwrap();
    let flat = graph(0.6, 0.0, [0.0; 10]).unwrap();
    for theta in [0.3, 1.1, 2.5] {
        let e = f.e.scale(f64::cos(theta)) + f.j_e.scale(f64::sin(theta));
        let rotated = AdaptedFrame::new(f.nu.clone(), e);
        let a = flat.shape_matrix(&x, &rotated).unwrap();
        assert!((a.matrix() - ShapeMatrix::sphere(0.6).matrix()).abs().max() <= 1e-6);
    }
}

#[test]
fn perturbation_is_first_order() {
    let x = Direction::new([0.5, -0.1, 0.3, 0.8]).unwrap();
    let base = graph(0.4, 0.0, SHIPPED).unwrap();
    let a0 = *base.shape_matrix(&x, &base.adapted_frame(&x).unwrap()).unwrap().matrix();
    let dev = |eps: f64| {
        let g = graph(0.4, eps, SHIPPED).unwrap();
        let a = *g.shape_matrix(&x, &g.adapted_frame(&x).unwrap()).unwrap().matrix();
        (a - a0).abs().max()
    };
    let ratio = dev(0.02) / dev(0.01);
    assert!((ratio - 2.0).abs() < 0.1, "ratio {ratio}");
}

#[test]
fn exterior_test() {
    let s = Scene::new(SceneSpec::sphere(BallPoint::from_coords([0.0; 4]), 0.3)).unwrap();
    assert!(!s.is_exterior(s.center()).unwrap());
    let u = Direction::new([0.3, 0.1, 0.5, -0.2]).unwrap();
    let far = Geodesic::new(s.center(), &s.unit_vector(&u)).point(1.0);
    assert!(s.is_exterior(&far).unwrap());
    let on = s.surface_point(&u);
    assert!(matches!(s.is_exterior(&on), Err(Error::OnSurface { .. })));

    let g = graph(0.3, 0.05, SHIPPED).unwrap();
    for x in probes() {
        let geo = Geodesic::new(g.center(), &g.unit_vector(&x));
        let rho = g.radius_at(&x);
        assert!(!g.is_exterior(&geo.point(rho - 1e-3)).unwrap());
        assert!(g.is_exterior(&geo.point(rho + 1e-3)).unwrap());
    }
}

#[test]
fn validation_errors() {
    assert!(matches!(Scene::new(SceneSpec::sphere(center(), -0.1)), Err(Error::InvalidScene(_))));
    assert!(matches!(
        Scene::new(SceneSpec::sphere(BallPoint::from_coords([0.8, 0.0, 0.7, 0.0]), 0.1)),
        Err(Error::BallBoundary { .. })
    ));
    let mut saddle = [0.0; 10];
    saddle[0] = 1.0;
    saddle[7] = -1.0;
    assert!(matches!(graph(0.3, 0.5, saddle), Err(Error::ConvexityViolation { .. })));
    let g = graph(0.3, 0.05, SHIPPED).unwrap();
    assert!(g.min_sampled_eigenvalue(&Direction::quasi_uniform(200)).unwrap() > 1.0);
}

#[test]
fn scene_json() {
    let text = r#"{"kind":"sphere","center":[0.0,0.0,0.0,0.0],"radius":0.2}"#;
    let s = Scene::from_json(text).unwrap();
    assert_eq!(s.sphere_radius(), Some(0.2));
    let text = r#"{"kind":"radial_graph","center":[0.1,0.0,0.0,0.0],"base_radius":0.3,
        "perturbation":{"epsilon":0.05,"coeffs":[1,0,0,0.5,0,0.3,0,-1,0,0]}}"#;
    let g = Scene::from_json(text).unwrap();
    let back: SceneSpec = serde_json::from_str(&serde_json::to_string(g.spec()).unwrap()).unwrap();
    assert_eq!(&back, g.spec());
    assert!(matches!(Scene::from_json(r#"{"kind":"cube"}"#), Err(Error::InvalidScene(_))));
}
