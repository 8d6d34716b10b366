//! Remainders of the truncated ε-series of the off-diagonal blocks and their
//! fitted orders, on a generic and a symmetric geometry.

use layerpot::geometry::{make_circle, Curve};
use layerpot::operators::Kind;
use layerpot::perforated::{expected_slope, truncation_study, Corner, ErrorNorm, PerforatedConfig};

fn main() -> layerpot::Result<()> {
    let eps = [0.1, 0.05, 0.025, 0.0125];
    let cases = [
        (
            "generic",
            Curve::ellipse(2.0, 1.0)?,
            make_circle(0.5, [0.2, 0.0])?,
            false,
        ),
        (
            "concentric",
            make_circle(2.0, [0.0, 0.0])?,
            make_circle(1.0, [0.0, 0.0])?,
            true,
        ),
    ];
    for (name, outer, inner, symmetric) in &cases {
        let cfg = PerforatedConfig::new(outer, inner, 128, 64, 0.1)?;
        let norm = if *symmetric {
            ErrorNorm::EvenDensity
        } else {
            ErrorNorm::Matrix
        };
        println!("{name}");
        for kind in Kind::ALL {
            for corner in Corner::ALL {
                let rows = truncation_study(kind, corner, &[0, 1, 2, 3], &eps, &cfg, &norm)?;
                let mut line = format!("  {kind:<6} {corner}");
                for k in 0..4 {
                    let s = rows
                        .iter()
                        .find(|r| r.order == k)
                        .and_then(|r| r.fitted_slope);
                    line += &format!(
                        "  K={k}: {:.2} ({})",
                        s.unwrap_or(f64::NAN),
                        expected_slope(kind, corner, k, *symmetric)
                    );
                }
                println!("{line}");
            }
        }
    }
    Ok(())
}
