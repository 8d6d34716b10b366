//! Curves from JSON coefficient tables, their frames, and the admissible
//! hole scale for a pair of curves.

use layerpot::geometry::{epsilon_max, frame, Curve, Grid, TrigCurve};

const KITE: &str = r#"{
  "degree": 2,
  "cos_x": [-0.65, 1.0, 0.65],
  "sin_x": [0.0, 0.0, 0.0],
  "cos_y": [0.0, 0.0, 0.0],
  "sin_y": [0.0, 1.5, 0.0]
}"#;

fn main() -> layerpot::Result<()> {
    let table: TrigCurve = serde_json::from_str(KITE)?;
    let kite = Curve::new(table)?;
    println!(
        "kite area {:.6}, orientation {:?}",
        kite.area(),
        kite.orientation()
    );
    let grid = Grid::new(&kite, 16)?;
    for j in (0..16).step_by(4) {
        let f = frame(&grid, j);
        println!(
            "  t = {:.3}: p = ({:+.3}, {:+.3}), ν = ({:+.3}, {:+.3}), κ = {:+.3}",
            grid.param(j),
            f.point[0],
            f.point[1],
            f.normal[0],
            f.normal[1],
            f.curvature
        );
    }
    let hole = Curve::circle(0.3, [0.1, 0.0])?;
    println!(
        "epsilon_max(kite, hole) = {:.4}",
        epsilon_max(&kite, &hole)?
    );
    println!("{}", serde_json::to_string(kite.table())?);
    Ok(())
}
