//! A dyadic exponential sum and its stationary-phase transform.

use heisenberg_weyl::analytic::transform_check;

fn main() {
    for h in [1, 2] {
        for u in [50.3, 100.3, 200.3] {
            let c = transform_check(0, h, u, 1);
            println!(
                "h={h} u={u:>6.1}: direct {:>9.3}{:+9.3}i  transformed {:>9.3}{:+9.3}i  gap/scale {:.3}",
                c.direct_re, c.direct_im, c.transformed_re, c.transformed_im, c.constant
            );
        }
    }
}
