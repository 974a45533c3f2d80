//! The divisor-type coefficients `θ_ℓ(n)` and the partial sums that grow like `√T`.

use heisenberg_weyl::analytic::ThetaTable;
use heisenberg_weyl::extremal::theta_lower_sum;

fn main() -> heisenberg_weyl::Result<()> {
    for ell in 1..=3 {
        let table = ThetaTable::new(ell, 20);
        let row: Vec<String> = (1..=20).map(|n| format!("{:.3}", table.get(n))).collect();
        println!("ℓ={ell}: {}", row.join(" "));
    }
    for t in [4.0, 8.0, 16.0, 32.0, 64.0] {
        let s = theta_lower_sum(1, t)?;
        println!("T = {t:>4}: Σ θ₁(n)/n^(3/4) = {s:.4}  ratio to √T {:.4}", s / t.sqrt());
    }
    Ok(())
}
