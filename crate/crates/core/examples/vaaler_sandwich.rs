//! Vaaler's trigonometric polynomials bracket the sawtooth `ψ`.

use heisenberg_weyl::approx::{psi, vaaler_check, vaaler_coeffs};

fn main() {
    let c = vaaler_coeffs(5);
    println!("     w        ψ(w)     ψ+Σ_5     Σ*_5");
    for i in 0..=10 {
        let w = i as f64 / 10.0 + 0.03;
        println!(
            "{w:>6.2}  {:>9.5} {:>9.5} {:>9.5}",
            psi(w),
            psi(w) + c.sigma(w),
            c.sigma_star(w)
        );
    }
    for h in [1, 5, 25, 100] {
        let check = vaaler_check(h, 10_000, 1e-12);
        println!(
            "H = {h:>3}: min slack {:+.3e}, violations {}",
            check.min_slack, check.violations
        );
    }
}
