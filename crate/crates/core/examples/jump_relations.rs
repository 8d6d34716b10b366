//! One-sided traces of the layer potentials against the jump relations, and
//! the Gauss identity for the double layer.

use layerpot::geometry::{Curve, Density, Grid};
use layerpot::operators::{eval_potential, jump_residuals, Potential};
use layerpot::study::{random_density, DEFAULT_SEED};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> layerpot::Result<()> {
    let curve = Curve::ellipse(2.0, 1.0)?;
    let grid = Grid::new(&curve, 128)?;
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let psi = random_density(&grid, &mut rng, 4);
    let mu = random_density(&grid, &mut rng, 4);
    let r = jump_residuals(&grid, &psi, &mu)?;
    for (name, v) in [
        "D interior",
        "D exterior",
        "dS/dν interior",
        "dS/dν exterior",
    ]
    .iter()
    .zip(r)
    {
        println!("{name:<16} residual {v:.2e}");
    }

    let one = Density::constant(&grid, 1.0);
    for p in [[0.0, 0.0], [1.0, 0.3], [3.0, 0.0], [0.0, -2.0]] {
        let d = eval_potential(Potential::Double, &grid, &one, p)?;
        println!("D[1]({:>4}, {:>4}) = {d:+.12}", p[0], p[1]);
    }
    Ok(())
}
