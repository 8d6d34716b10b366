//! Idempotency of the discrete Calderón projector under refinement.

use layerpot::geometry::{make_circle, Curve, Diffeo};
use layerpot::shape::calderon;

fn main() -> layerpot::Result<()> {
    let curves = [
        ("circle", make_circle(1.0, [0.0, 0.0])?),
        ("ellipse", Curve::ellipse(2.0, 1.0)?),
        ("kite", Curve::kite()),
    ];
    println!(
        "{:<8} {:>5} {:>12} {:>12}",
        "curve", "N", "|C²-C|", "|(I-C)²-(I-C)|"
    );
    for (name, c) in &curves {
        let phi = Diffeo::identity(c);
        for n in [64, 128, 256] {
            let cal = calderon(&phi, n)?;
            println!(
                "{name:<8} {n:>5} {:>12.3e} {:>12.3e}",
                cal.idempotency_residual(),
                cal.complement_residual()
            );
        }
    }
    Ok(())
}
