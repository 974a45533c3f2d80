//! Discrepancy modulo 1 of Kronecker sequences `(n√2, n√3)`.

use heisenberg_weyl::diophantine::discrepancy_mod1;

fn main() -> heisenberg_weyl::Result<()> {
    for n in [16, 64, 256] {
        let one: Vec<Vec<f64>> = (1..=n).map(|k| vec![k as f64 * 2f64.sqrt()]).collect();
        let two: Vec<Vec<f64>> = (1..=n)
            .map(|k| vec![k as f64 * 2f64.sqrt(), k as f64 * 3f64.sqrt()])
            .collect();
        println!(
            "N = {n:>3}: D(n√2) = {:.5}  D(n√2, n√3) = {:.5}",
            discrepancy_mod1(&one)?.value,
            discrepancy_mod1(&two)?.value
        );
    }
    Ok(())
}
