use serde::{Deserialize, Serialize};

/// A point of the unit sphere `S^3 ⊂ R^4`, used as the chart direction of a
/// star-shaped hypersurface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction([f64; 4]);

impl Direction {
    /// Normalizes `x`; returns `None` for a (numerically) zero vector.
    pub fn new(x: [f64; 4]) -> Option<Self> {
        let n = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        (n > 1e-300 && n.is_finite()).then(|| Direction(x.map(|c| c / n)))
    }

    pub fn coords(&self) -> [f64; 4] {
        self.0
    }

    /// Orthonormal tangent frame at `x`: right multiplication of the
    /// quaternion `x` by `i`, `j`, `k`. This is a global parallelization of
    /// `S^3`, so there are no chart poles.
    pub fn tangent_basis(&self) -> [[f64; 4]; 3] {
        let [a, b, c, d] = self.0;
        [[-b, a, d, -c], [-c, -d, a, b], [-d, c, -b, a]]
    }

    /// `normalize(x + sum delta_k T_k)`.
    pub fn moved(&self, delta: [f64; 3]) -> Direction {
        let t = self.tangent_basis();
        let mut y = self.0;
        for (k, tk) in t.iter().enumerate() {
            for i in 0..4 {
                y[i] += delta[k] * tk[i];
            }
        }
        Direction::new(y).unwrap_or(*self)
    }

    /// Components of a vector of `R^4` along the tangent frame.
    pub fn tangent_coords(&self, y: [f64; 4]) -> [f64; 3] {
        self.tangent_basis().map(|t| (0..4).map(|i| t[i] * y[i]).sum())
    }

    /// Great-circle angle to another direction.
    pub fn angle(&self, other: &Direction) -> f64 {
        let chord: f64 = (0..4).map(|i| (self.0[i] - other.0[i]).powi(2)).sum::<f64>().sqrt();
        2.0 * (0.5 * chord).min(1.0).asin()
    }

    /// Super-Fibonacci spiral: `n` well spread deterministic points on `S^3`.
    pub fn quasi_uniform(n: usize) -> Vec<Direction> {
        const PHI: f64 = std::f64::consts::SQRT_2;
        const PSI: f64 = 1.533_751_168_755_204_3;
        let tau = std::f64::consts::TAU;
        (0..n)
            .map(|i| {
                let s = i as f64 + 0.5;
                let r = (s / n as f64).sqrt();
                let big = (1.0 - s / n as f64).sqrt();
                let alpha = tau * s / PHI;
                let beta = tau * s / PSI;
                Direction([r * alpha.sin(), r * alpha.cos(), big * beta.sin(), big * beta.cos()])
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangent_frame_is_orthonormal_and_orthogonal() {
        for x in Direction::quasi_uniform(50) {
            let t = x.tangent_basis();
            let all = [x.coords(), t[0], t[1], t[2]];
            for i in 0..4 {
                for j in 0..4 {
                    let g: f64 = (0..4).map(|k| all[i][k] * all[j][k]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g - want).abs() <= 1e-15);
                }
            }
        }
    }

    #[test]
    fn quasi_uniform_points_are_spread() {
        let pts = Direction::quasi_uniform(200);
        let mut worst: f64 = 0.0;
        for probe in Direction::quasi_uniform(997) {
            let near = pts.iter().map(|p| p.angle(&probe)).fold(f64::INFINITY, f64::min);
            worst = worst.max(near);
        }
        // covering radius of 200 points on S^3 is around 0.4 rad
        assert!(worst < 0.6, "covering radius {worst}");
    }

    #[test]
    fn moved_and_coords_agree_to_first_order() {
        let x = Direction::new([0.3, -0.5, 0.2, 0.7]).unwrap();
        let y = x.moved([1e-6, -2e-6, 3e-6]);
        let diff: [f64; 4] = std::array::from_fn(|i| y.coords()[i] - x.coords()[i]);
        let c = x.tangent_coords(diff);
        assert!((c[0] - 1e-6).abs() < 1e-11 && (c[1] + 2e-6).abs() < 1e-11 && (c[2] - 3e-6).abs() < 1e-11);
        assert!((x.angle(&y) - 14f64.sqrt() * 1e-6).abs() < 1e-11);
    }
}
