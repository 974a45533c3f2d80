//! The normalized remainder `E(u)` against its sawtooth approximation `E*(u)`.

use heisenberg_weyl::approx::{estar, estar_compare};
use heisenberg_weyl::counting::normalized_error_e;
use heisenberg_weyl::ManifoldParams;

fn main() -> heisenberg_weyl::Result<()> {
    let params = ManifoldParams::new(1, &[1])?;
    for u in [10.0, 20.5, 40.25, 80.125] {
        println!(
            "u = {u:>7.3}  E = {:>9.4}  E* = {:>9.4}",
            normalized_error_e(&params, u)?,
            estar(1, u)
        );
    }
    let cmp = estar_compare(&params, 50.0, 300.0, 120, 8)?;
    println!(
        "secular part {:.4} + {:.3e}·u², residual growth exponent {:.3}",
        cmp.secular_c0, cmp.secular_c1, cmp.fitted_exponent
    );
    Ok(())
}
