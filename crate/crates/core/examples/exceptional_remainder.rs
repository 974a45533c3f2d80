//! The full chain for `ℓ = 1`: pick `U` by simultaneous approximation, locate
//! the peak of `S(u, U)` and look at the remainder there.

use heisenberg_weyl::extremal::{median_normalized_remainder, run_pipeline, PipelineConfig};
use heisenberg_weyl::ManifoldParams;

fn main() -> heisenberg_weyl::Result<()> {
    let params = ManifoldParams::new(1, &[1])?;
    let report = run_pipeline(&params, &PipelineConfig::new(2.0, 0.25))?;
    println!("U = {} with distances {:?}", report.big_u, report.distances);
    println!(
        "S(u*, U) = {:.5} at u* = {:.4}, Fejér average {:.5}",
        report.s_at_u_star, report.u_star, report.i_value
    );
    println!(
        "t* = {:.3}: N = {:?}, R = {:?}, R/t^(3/4) = {:?}",
        report.t_star, report.n_at_t_star, report.r_at_t_star, report.normalized_r
    );
    let median = median_normalized_remainder(&params, report.t_star / 2.0, report.t_star, 200, 1)?;
    println!("median |R|/t^(3/4) on [t*/2, t*]: {median:.5}");
    Ok(())
}
