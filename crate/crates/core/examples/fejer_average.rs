//! The Fejér kernel, its Fourier transform, and the Fejér average of `S(u, U)`.

use heisenberg_weyl::analytic::{fejer_average_i, fejer_identity_check, SumConfig};

fn main() -> heisenberg_weyl::Result<()> {
    for q in [10.0, 25.0, 40.0, 60.0] {
        let id = fejer_identity_check(50.0, q, 0.37)?;
        println!(
            "T=50 Q={q}: numeric {:.6}{:+.6}i closed {:.6}{:+.6}i",
            id.numeric_re, id.numeric_im, id.closed_re, id.closed_im
        );
    }
    let avg = fejer_average_i(2.0, 6.0, 1, &SumConfig::default())?;
    println!(
        "I(2, 6) = {:.6}, predicted {:.6} from {} of {} terms",
        avg.numeric, avg.predicted, avg.surviving_terms, avg.total_terms
    );
    Ok(())
}
