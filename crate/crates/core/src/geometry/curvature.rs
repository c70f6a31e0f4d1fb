use super::point::TangentVector;

/// Riemann tensor `R(X,Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_[X,Y] Z` of the complex
/// space form of holomorphic curvature -4:
///
/// `R(X,Y)Z = -( <Y,Z>X - <X,Z>Y + <JY,Z>JX - <JX,Z>JY + 2<X,JY>JZ )`.
///
/// With this sign, `<R(Ju,u)u,Ju> = -4` and `<R(v,u)u,v> = -1` for unit `u`
/// and unit `v` orthogonal to `u` and `Ju`.
pub fn curvature(x: &TangentVector, y: &TangentVector, z: &TangentVector) -> TangentVector {
    let base = x.base();
    let (y, z) = (y.at(base), z.at(base));
    let (jx, jy, jz) = (x.j(), y.j(), z.j());
    let sum = x.scale(y.dot(&z)) - y.scale(x.dot(&z)) + jx.scale(jy.dot(&z)) - jy.scale(jx.dot(&z))
        + jz.scale(2.0 * x.dot(&jy));
    -sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ball::{from_ball, BallPoint};
    use crate::geometry::Point;
    use nalgebra::Vector3;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, p: &Point) -> TangentVector {
        p.project(&Vector3::from_fn(|_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
    }

    fn setup(seed: u64) -> (ChaCha8Rng, Point) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-0.4..0.4));
        let p = from_ball(&BallPoint::from_coords(c)).unwrap();
        (rng, p)
    }

    #[test]
    fn anchors() {
        let (mut rng, p) = setup(31);
        for _ in 0..50 {
            let u = random_vec(&mut rng, &p).normalized();
            let raw = random_vec(&mut rng, &p);
            let v = (raw.clone() - u.scale(u.dot(&raw)) - u.j().scale(u.j().dot(&raw))).normalized();
            let hol = curvature(&u.j(), &u, &u).dot(&u.j());
            let real = curvature(&v, &u, &u).dot(&v);
            assert!((hol + 4.0).abs() <= 1e-12, "{hol}");
            assert!((real + 1.0).abs() <= 1e-12, "{real}");
            let along = curvature(&u.j(), &u, &u) - u.j().scale(-4.0);
            assert!(along.norm() <= 1e-12);
        }
    }

    #[test]
    fn algebraic_symmetries() {
        let (mut rng, p) = setup(37);
        for _ in 0..50 {
            let [x, y, z, w] = std::array::from_fn(|_| random_vec(&mut rng, &p));
            assert!(curvature(&x, &x, &z).norm() <= 1e-12);
            let swapped = curvature(&x, &y, &z) + curvature(&y, &x, &z);
            assert!(swapped.norm() <= 1e-12);
            // pair symmetry <R(X,Y)Z,W> = <R(Z,W)X,Y>
            let a = curvature(&x, &y, &z).dot(&w);
            let b = curvature(&z, &w, &x).dot(&y);
            assert!((a - b).abs() <= 1e-12);
            // first Bianchi identity
            let bianchi = curvature(&x, &y, &z) + curvature(&y, &z, &x) + curvature(&z, &x, &y);
            assert!(bianchi.norm() <= 1e-12);
            // J-invariance: R(X,Y)JZ = J R(X,Y)Z
            let lhs = curvature(&x, &y, &z.j());
            let rhs = curvature(&x, &y, &z).j();
            assert!((lhs - rhs).norm() <= 1e-12);
            // trilinearity in X
            let lin = curvature(&(x.clone() * 2.0 + w.clone()), &y, &z) - curvature(&x, &y, &z) * 2.0 - curvature(&w, &y, &z);
            assert!(lin.norm() <= 1e-11);
        }
    }
}
