//! Closed forms of the Laplace kernel derivatives and a harmonicity check.

use layerpot::kernel::{enumerate_multiindices, planar_table, KernelTable};

fn main() -> layerpot::Result<()> {
    let table = planar_table();
    for k in 0..=3 {
        for d in table.level(k)? {
            let terms = d.numerator_terms();
            match d.denominator_exponent() {
                None => println!("D^{} G_2 = -(1/2π) log|x|", d.index()),
                Some(q) => println!(
                    "D^{} G_2 = c·P(x)/|x|^{q}, P has {} terms",
                    d.index(),
                    terms.len()
                ),
            }
        }
    }

    let x = [0.7, -0.4];
    let mut worst = 0.0f64;
    for beta in enumerate_multiindices(2, 8) {
        let lap = table.eval(&beta.raised(0).raised(0), &x)?
            + table.eval(&beta.raised(1).raised(1), &x)?;
        worst = worst.max(lap.abs());
    }
    println!("max |ΔD^β G_2| over |β| = 8 at {x:?}: {worst:.2e}");

    let space = KernelTable::new(3, 2)?;
    let beta = &enumerate_multiindices(3, 1)[0];
    println!(
        "D^{beta} G_3 at (0,0,1) = {:.6}",
        space.eval(beta, &[0.0, 0.0, 1.0])?
    );
    Ok(())
}
