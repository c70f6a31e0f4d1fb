use crate::geometry::{Geodesic, Point, TangentVector};
use crate::hypersurface::{Direction, Scene};

const NODES: usize = 32;

/// Gauss–Legendre nodes and weights on `[0, 1]`, roots found by Newton on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out
}

/// `∂_s Δ` at parameter `τ` on the segment from `apex` to `c(s)`: the Jacobi
/// field vanishing at the apex with end value `w` (a vector at `c(s)`).
fn boundary_jacobi(geo: &Geodesic, len: f64, w: &TangentVector, tau: f64) -> TangentVector {
    let end = geo.velocity(len);
    let w = w.at(end.base());
    let a = w.dot(&end);
    let b = w.dot(&end.j());
    let perp = w.clone() - end.scale(a) - end.j().scale(b);
    let r = tau * len;
    let vel = geo.velocity(r);
    // transport the orthogonal part back from the end to parameter r
    let back = Geodesic::new(end.base(), &end.scale(-1.0)).transport(len - r, &perp).at(vel.base());
    vel.scale(a * tau) + vel.j().scale(b * (2.0 * r).sinh() / (2.0 * len).sinh()) + back.scale(r.sinh() / len.sinh())
}

/// `∫ ω` over the geodesic cone from `apex` over the edge `a -> b`,
/// `Δ(s, τ) = γ_{apex -> c(s)}(τ)`, integrated as `∫∫ ω(∂_τ Δ, ∂_s Δ)`
/// with a 32 x 32 Gauss–Legendre rule.
pub fn symplectic_area_cone(apex: &Point, a: &Point, b: &Point) -> f64 {
    let Some((edge, edge_len)) = Geodesic::between(a, b) else {
        return 0.0;
    };
    let rule = gauss_legendre(NODES);
    let mut total = 0.0;
    for &(s, ws) in &rule {
        let c = edge.point(s * edge_len);
        let dc = edge.velocity(s * edge_len).scale(edge_len);
        let Some((ray, len)) = Geodesic::between(apex, &c) else {
            continue;
        };
        if len < 1e-14 {
            continue;
        }
        for &(tau, wt) in &rule {
            let dtau = ray.velocity(tau * len).scale(len);
            let ds = boundary_jacobi(&ray, len, &dc, tau);
            total += ws * wt * dtau.omega(&ds);
        }
    }
    total
}

/// Symplectic area `∫_Δ ω` of the triangle `p1 p2 p3`, filled by the cone from `p1`.
/// Positive when the triangle winds positively with respect to `J`.
pub fn symplectic_area(p1: &Point, p2: &Point, p3: &Point) -> f64 {
    symplectic_area_cone(p1, p2, p3)
}

/// Central-difference gradient of `(x1, x2, x3) -> A(p(x1), p(x2), p(x3))` over
/// `N x N x N`, in the tangent frames of the three chart directions.
/// Experiment tooling only.
pub fn area_gradient(scene: &Scene, x: &[Direction; 3], h: f64) -> [f64; 9] {
    let area = |d: &[Direction; 3]| {
        let p = d.map(|x| scene.surface_point(&x));
        symplectic_area(&p[0], &p[1], &p[2])
    };
    std::array::from_fn(|m| {
        let (i, k) = (m / 3, m % 3);
        let mut delta = [0.0; 3];
        delta[k] = h;
        let mut plus = *x;
        plus[i] = x[i].moved(delta);
        delta[k] = -h;
        let mut minus = *x;
        minus[i] = x[i].moved(delta);
        (area(&plus) - area(&minus)) / (2.0 * h)
    })
}
