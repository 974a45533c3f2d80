//! Exact eigenvalue counts on a few Heisenberg manifolds, checked against
//! the slow oracle, and the lowest part of the spectrum.

use heisenberg_weyl::counting::{brute_force_n, count_spectrum};
use heisenberg_weyl::manifold::spectrum;
use heisenberg_weyl::ManifoldParams;

fn main() -> heisenberg_weyl::Result<()> {
    let params = ManifoldParams::new(1, &[1])?;
    println!("lowest eigenvalues of H_1/Γ_(1):");
    for line in spectrum(&params, 60.0)?.iter().take(8) {
        println!("  λ = {:>10.4}  multiplicity {}", line.lambda, line.multiplicity);
    }

    for (ell, r) in [(1, vec![1]), (2, vec![1, 2]), (3, vec![1, 1, 1])] {
        let params = ManifoldParams::new(ell, &r)?;
        for t in [40.0, 400.0] {
            let c = count_spectrum(&params, t)?;
            let oracle = brute_force_n(&params, t)?;
            println!(
                "ℓ={ell} r={r:?} t={t}: N={} (oracle {oracle}) main={:.4} R={:.4}",
                c.n_of_t, c.main_term, c.remainder
            );
        }
    }
    Ok(())
}
