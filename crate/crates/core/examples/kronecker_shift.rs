//! Finding `U` with every `U√q` close to an integer, for squarefree `q ≤ T²`.

use heisenberg_weyl::diophantine::{kronecker_search, KroneckerTarget};

fn main() -> heisenberg_weyl::Result<()> {
    for t in [2.0, 3.0] {
        let target = KroneckerTarget::new(t, 0.25)?;
        let u_min = (t * t).ceil() as u64;
        match kronecker_search(&target, u_min, u_min + 10_000_000)? {
            Some(u) => {
                println!("T = {t}: qs {:?}, U = {u}", target.qs);
                for (q, d) in target.qs.iter().zip(target.distances(u)) {
                    println!("  ‖U√{q}‖ = {d:.6} (threshold {:.4})", target.threshold());
                }
            }
            None => println!("T = {t}: nothing below the budget"),
        }
    }
    Ok(())
}
