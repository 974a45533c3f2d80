//! Spectral counting on rational Heisenberg manifolds.
//!
//! The crate computes the exact counting function `N(t)` of the
//! Laplace–Beltrami operator on `(H_ℓ/Γ_r, g_ℓ)`, its Weyl remainder `R(t)`,
//! and the machinery used to exhibit exceptionally large positive values of
//! `R(t)`: Vaaler's approximation of fractional parts, dyadic exponential
//! sums and their stationary-phase transform, the trigonometric sum
//! `S(u, U)` with its Fejér average, and a simultaneous Diophantine search
//! for a good shift `U`.
//!
//! The Gaussian circle problem is included as a calibration baseline.

pub mod analytic;
pub mod approx;
pub mod circle;
pub mod cli;
pub mod counting;
pub mod diophantine;
pub mod error;
pub mod extremal;
pub mod fit;
pub mod manifold;
pub mod quadrature;

pub use error::{Error, ErrorClass, Result};
pub use manifold::{ManifoldParams, SpectralLine, TorusLattice};

/// Rounds `x` to 12 significant digits and prints the shortest decimal that
/// reads back to the rounded value. Non-finite values print as `nan`/`inf`.
pub fn fmt_sig(x: f64) -> String {
    round_sig(x).to_string().replace("NaN", "nan")
}

/// `x` rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}
