//! Block formulas on a perforated domain against direct assembly on the
//! two-component boundary.

use layerpot::geometry::{make_circle, Curve, Density};
use layerpot::operators::Kind;
use layerpot::perforated::{assemble_block, assemble_direct, PerforatedConfig};

fn main() -> layerpot::Result<()> {
    let outer = Curve::ellipse(2.0, 1.0)?;
    let inner = make_circle(0.5, [0.2, 0.0])?;
    let base = PerforatedConfig::new(&outer, &inner, 128, 64, 0.1)?;
    println!("epsilon_max = {:.6}", base.eps_bound());
    for eps in [0.1, -0.1, 0.05, -0.05] {
        let cfg = base.with_eps(eps)?;
        let mut line = format!("ε = {eps:+.2}");
        for kind in Kind::ALL {
            let d = assemble_block(kind, &cfg)?.max_abs_diff(&assemble_direct(kind, &cfg)?);
            let worst = d.iter().flatten().fold(0.0f64, |a, v| a.max(*v));
            line += &format!("  {kind}: {worst:.1e}");
        }
        println!("{line}");
    }

    // the single layer sees the hole as |ε| V_i − (|ε| log|ε| / 2π) ∫ θ
    let cfg = base.with_eps(0.1)?;
    let (outer_vals, inner_vals) = assemble_block(Kind::V, &cfg)?
        .apply(&Density::new(vec![0.0; 128]), &Density::new(vec![1.0; 64]))?;
    println!(
        "V applied to (0, 1): outer row {:.6}, inner row {:.6}",
        outer_vals.values()[0],
        inner_vals.values()[0]
    );
    Ok(())
}
