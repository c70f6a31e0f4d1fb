use nalgebra::Vector3;
use num_complex::Complex64;

/// A vector of C^{2,1}.
pub type AmbientVector = Vector3<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Hermitian form of signature (2,1), conjugate-linear in the first slot:
/// `<a,b> = conj(a1) b1 + conj(a2) b2 - conj(a3) b3`.
#[inline]
pub fn hermitian_form(a: &AmbientVector, b: &AmbientVector) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1] - a[2].conj() * b[2]
}

/// Standard basis vector `e_k` (k in 0..3).
pub fn basis(k: usize) -> AmbientVector {
    let mut v = AmbientVector::zeros();
    v[k] = Complex64::new(1.0, 0.0);
    v
}

#[inline]
pub(crate) fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vector(rng: &mut ChaCha8Rng) -> AmbientVector {
        AmbientVector::from_fn(|_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn signature_anchor() {
        assert_eq!(hermitian_form(&basis(0), &basis(0)), Complex64::new(1.0, 0.0));
        assert_eq!(hermitian_form(&basis(1), &basis(1)), Complex64::new(1.0, 0.0));
        assert_eq!(hermitian_form(&basis(2), &basis(2)), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn hermitian_symmetry_and_sesquilinearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = random_vector(&mut rng);
            let b = random_vector(&mut rng);
            let lam = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            assert!((hermitian_form(&a, &b) - hermitian_form(&b, &a).conj()).norm() <= 1e-15);
            let lhs = hermitian_form(&(a * lam), &b);
            assert!((lhs - lam.conj() * hermitian_form(&a, &b)).norm() <= 1e-14);
            let rhs = hermitian_form(&a, &(b * lam));
            assert!((rhs - lam * hermitian_form(&a, &b)).norm() <= 1e-14);
        }
    }
}
