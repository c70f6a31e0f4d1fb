use std::fmt::Write;

use ch2_billiards::dynamics::Orbit;
use ch2_billiards::verify::ball_coords;

/// `step,x,y,u,v,t,residual`. Row `i > 0` carries the leaf parameter and
/// inversion residual of the step that produced point `i`; row 0 leaves
/// them empty. A trailing `# incomplete` line marks an orbit that stopped early.
pub fn to_csv(orbit: &Orbit) -> String {
    let mut s = String::from("step,x,y,u,v,t,residual\n");
    for (i, p) in orbit.points.iter().enumerate() {
        let c = ball_coords(p);
        write!(s, "{i},{:.16e},{:.16e},{:.16e},{:.16e}", c[0], c[1], c[2], c[3]).unwrap();
        if i == 0 {
            s.push_str(",,\n");
        } else {
            writeln!(s, ",{:.16e},{:.16e}", orbit.tangencies[i - 1].t, orbit.residuals[i - 1]).unwrap();
        }
    }
    if let Some(e) = &orbit.stopped {
        writeln!(s, "# incomplete: {e}").unwrap();
    }
    s
}
