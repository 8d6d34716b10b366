//! Eigenvalues of the four boundary operators on circles of radius 1 and 2.

use layerpot::geometry::{make_circle, Density, Grid};
use layerpot::operators::{assemble, Kind};

fn main() -> layerpot::Result<()> {
    for r in [1.0, 2.0] {
        let grid = Grid::new(&make_circle(r, [0.0, 0.0])?, 128)?;
        println!("circle R = {r}");
        for kind in Kind::ALL {
            let op = assemble(kind, &grid);
            let mut line = format!("  {kind:<7}");
            for k in 0..=4 {
                let u = Density::from_fn(&grid, |t, _| (k as f64 * t).cos());
                // node 0 sits at t = 0 where cos(kt) = 1
                let lambda = op.apply(&u)?.values()[0];
                line += &format!(" k={k}: {lambda:>9.6}");
            }
            println!("{line}");
        }
    }
    println!("expected: V R/(2k) (k>0), -R log R (k=0); K, K' -1/2 (k=0), 0 else; W k/(2R)");
    Ok(())
}
