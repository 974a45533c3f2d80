//! Growth of `∫₀^T R(t)² dt` for the simplest manifold. The log–log slope
//! should sit near `2ℓ + 1/2`.

use heisenberg_weyl::counting::mean_square;
use heisenberg_weyl::ManifoldParams;

fn main() -> heisenberg_weyl::Result<()> {
    let params = ManifoldParams::new(1, &[1])?;
    let report = mean_square(&params, 5_000.0, 100)?;
    for i in (9..100).step_by(15) {
        println!(
            "T = {:>8.1}  ∫R² = {:>14.6e}  local slope {:.3}",
            report.t_grid[i], report.integral_values[i], report.local_slopes[i]
        );
    }
    println!("fitted slope {:.4} (expected 2.5)", report.fitted_slope);
    Ok(())
}
