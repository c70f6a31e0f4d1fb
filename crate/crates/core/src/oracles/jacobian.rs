use nalgebra::{Matrix4, Vector4};

use crate::error::Result;
use crate::geometry::{Point, TangentVector};
use crate::tolerances::H_JACOBIAN;

/// Central-difference Jacobian with step `h` of `s -> coords of log_{base}(f(s))`
/// in `frame`, at `s = 0`.
pub fn fd_jacobian_params_step(
    f: &impl Fn([f64; 4]) -> Result<Point>,
    base: &Point,
    frame: &[TangentVector; 4],
    h: f64,
) -> Result<Matrix4<f64>> {
    let mut m = Matrix4::zeros();
    for i in 0..4 {
        let mut s = [0.0; 4];
        s[i] = h;
        let plus = base.log(&f(s)?).coords(frame);
        s[i] = -h;
        let minus = base.log(&f(s)?).coords(frame);
        let col = Vector4::from(std::array::from_fn::<f64, 4, _>(|k| (plus[k] - minus[k]) / (2.0 * h)));
        m.set_column(i, &col);
    }
    Ok(m)
}

/// Richardson-refined version of [`fd_jacobian_params_step`] with base step [`H_JACOBIAN`].
pub fn fd_jacobian_params(
    f: &impl Fn([f64; 4]) -> Result<Point>,
    base: &Point,
    frame: &[TangentVector; 4],
) -> Result<Matrix4<f64>> {
    let coarse = fd_jacobian_params_step(f, base, frame, H_JACOBIAN)?;
    let fine = fd_jacobian_params_step(f, base, frame, 0.5 * H_JACOBIAN)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}

/// Jacobian of a point map at `q` from `frame_in` (at `q`) to `frame_out`
/// (at `map(q)`), moving along `exp_q(s e_i)`.
pub fn fd_jacobian(
    map: impl Fn(&Point) -> Result<Point>,
    q: &Point,
    frame_in: &[TangentVector; 4],
    frame_out: &[TangentVector; 4],
) -> Result<Matrix4<f64>> {
    let base = frame_out[0].base().clone();
    let f = |s: [f64; 4]| map(&q.exp(&TangentVector::combine(frame_in, &s)));
    fd_jacobian_params(&f, &base, frame_out)
}
