use std::fmt::Write;

use num_complex::Complex64;

use ch2_billiards::dynamics::{complex_line_distance, ComplexLine, Orbit};
use ch2_billiards::geometry::TangentVector;
use ch2_billiards::hypersurface::{Direction, Scene};
use ch2_billiards::verify::{ball_coords, disc_coordinate};

const PANEL: f64 = 400.0;
const SCALE: f64 = 180.0;
const LINE_TOL: f64 = 1e-8;
const OUTLINE_SAMPLES: usize = 240;

struct Panel {
    title: String,
    outline: Vec<Complex64>,
    points: Vec<Complex64>,
}

fn angle(k: usize) -> f64 {
    std::f64::consts::TAU * k as f64 / OUTLINE_SAMPLES as f64
}

/// Orbit on the complex line through the center of the scene when it stays
/// there, otherwise the (x, y) and (u, v) ball-coordinate projections.
pub fn plot_orbit(scene: &Scene, orbit: &Orbit) -> String {
    let line = ComplexLine::through(scene.center(), &orbit.points[0]);
    let panels = match line {
        Some(line) if orbit.points.iter().all(|q| complex_line_distance(q, &line) <= LINE_TOL) => {
            vec![line_panel(scene, &line, orbit)]
        }
        _ => projection_panels(scene, orbit),
    };
    render(&panels)
}

fn line_panel(scene: &Scene, line: &ComplexLine, orbit: &Orbit) -> Panel {
    let u = line.direction();
    let outline = (0..OUTLINE_SAMPLES)
        .filter_map(|k| {
            let v: TangentVector = u.scale(angle(k).cos()) + u.j().scale(angle(k).sin());
            let x = Direction::new(v.coords(scene.center_frame()))?;
            Some(disc_coordinate(line, &scene.surface_point(&x)))
        })
        .collect();
    let points = orbit.points.iter().map(|q| disc_coordinate(line, q)).collect();
    Panel { title: "complex line through the center".into(), outline, points }
}

fn projection_panels(scene: &Scene, orbit: &Orbit) -> Vec<Panel> {
    [(0, "ball coordinates (x, y)"), (2, "ball coordinates (u, v)")]
        .into_iter()
        .map(|(i, title)| {
            let outline = (0..OUTLINE_SAMPLES)
                .filter_map(|k| {
                    let mut d = [0.0; 4];
                    d[i] = angle(k).cos();
                    d[i + 1] = angle(k).sin();
                    let c = ball_coords(&scene.surface_point(&Direction::new(d)?));
                    Some(Complex64::new(c[i], c[i + 1]))
                })
                .collect();
            let points = orbit
                .points
                .iter()
                .map(|q| {
                    let c = ball_coords(q);
                    Complex64::new(c[i], c[i + 1])
                })
                .collect();
            Panel { title: title.into(), outline, points }
        })
        .collect()
}

fn render(panels: &[Panel]) -> String {
    let width = PANEL * panels.len() as f64;
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{h}" viewBox="0 0 {width} {h}">"#,
        h = PANEL + 30.0
    )
    .unwrap();
    for (n, panel) in panels.iter().enumerate() {
        let cx = PANEL * (n as f64 + 0.5);
        let cy = PANEL * 0.5 + 30.0;
        let at = |z: Complex64| (cx + SCALE * z.re, cy - SCALE * z.im);
        writeln!(s, r#"<text x="{cx}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#, panel.title)
            .unwrap();
        writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="{SCALE}" fill="none" stroke="black"/>"#).unwrap();
        let outline: Vec<String> = panel
            .outline
            .iter()
            .map(|&z| {
                let (x, y) = at(z);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        writeln!(s, r##"<polygon points="{}" fill="#dde6f0" stroke="#335577"/>"##, outline.join(" ")).unwrap();
        for &z in &panel.points {
            let (x, y) = at(z);
            writeln!(s, r##"<circle cx="{x:.3}" cy="{y:.3}" r="2" fill="#b03020"/>"##).unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}
