//! Central-difference and Taylor-remainder orders of V and K along the
//! family φ_t = identity + t·cos(2θ)·p on the unit circle.

use layerpot::geometry::{directions, make_circle, Diffeo};
use layerpot::operators::Kind;
use layerpot::shape::shape_fd_study;

fn main() -> layerpot::Result<()> {
    let c = make_circle(1.0, [0.0, 0.0])?;
    let h = directions::radial_cos(&c, 2);
    for kind in [Kind::V, Kind::K] {
        let rep = shape_fd_study(kind, &Diffeo::identity(&c), &h, &[1e-2, 5e-3, 2.5e-3], 64)?;
        println!("{kind}");
        for (t, d) in rep.t.iter().zip(&rep.diff_norms) {
            println!("  t = {t:.4}  |D_t - D_ref| = {d:.3e}");
        }
        println!(
            "  central-difference order {:.3}",
            rep.fd_slope.unwrap_or(f64::NAN)
        );
        for (m, s) in rep.taylor_slopes.iter().enumerate() {
            println!(
                "  Taylor order {} remainder slope {:.3}",
                m + 1,
                s.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
