//! Lattice points in discs and Cramér's mean-square law.

use heisenberg_weyl::circle::{circle_count, cramer_mean_square};

fn main() -> heisenberg_weyl::Result<()> {
    for x in [1.0, 2f64.sqrt(), 10.0, 100.0, 1000.0] {
        let s = circle_count(x)?;
        println!("x = {x:>8.4}: {} points, P = {:+.4}", s.count, s.p_value);
    }
    let rep = cramer_mean_square(2000.0, 40)?;
    println!("∫P² slope {:.4} (expected 2)", rep.slope);
    Ok(())
}
