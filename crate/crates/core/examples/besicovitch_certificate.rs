//! How close a small integer combination of square roots can get to an integer.

use heisenberg_weyl::diophantine::{besicovitch_check, squarefree_up_to};

fn main() -> heisenberg_weyl::Result<()> {
    let qs = squarefree_up_to(9);
    for h in 1..=3 {
        let cert = besicovitch_check(&qs, h)?;
        println!(
            "qs {:?}, H = {h}: min ‖h·√q‖ = {:.3e} at {:?} ({} vectors)",
            cert.qs, cert.min_dist, cert.witness, cert.vectors_checked
        );
    }
    Ok(())
}
