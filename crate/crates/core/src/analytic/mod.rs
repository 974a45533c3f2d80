//! Trigonometric-sum layer: dyadic blocks, the exponential sums `E_j(h, u)`
//! and their stationary-phase transform, the coefficients `θ_ℓ(n)`, the sum
//! `S(u, U)`, and Fejér averaging.

mod expsum;
mod fejer;
mod theta;
mod trig_sum;

pub use expsum::{
    exp_sum_direct, exp_sum_transformed, phase_derivative, transform_check, transformed_k_range,
    TransformCheck,
};
pub use fejer::{
    fejer_average_i, fejer_average_of, fejer_identity_check, fejer_kernel, FejerAverage, FejerIdentity,
};
pub use theta::{theta_coeff, ThetaTable};
pub use trig_sum::{trig_sum_s, SumConfig, TrigSum, TrigTerm};

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::manifold::isqrt;

/// Dyadic splitting of `1 ≤ m ≤ u` into `]M_{j+1}, M_j]`, `M_j = u·2^{−j}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicScheme {
    pub big_u: f64,
    /// Minimal `J` with `(U − 1)·2^{−J−1} < 1`.
    pub j_max: u32,
}

impl DyadicScheme {
    pub fn new(big_u: f64) -> Self {
        let mut j = 0u32;
        while (big_u - 1.0) * 0.5f64.powi(j as i32 + 1) >= 1.0 {
            j += 1;
        }
        DyadicScheme { big_u, j_max: j }
    }

    /// `M_0, …, M_{J+1}` for the given `u`.
    pub fn block_bounds(&self, u: f64) -> Vec<f64> {
        (0..=self.j_max + 1).map(|j| block_edge(u, j)).collect()
    }

    /// `K_{h,U} = h/2 + 2^{2J+1}·h`, the top of the transformed `k`-range.
    pub fn k_limit(&self, h: u64) -> f64 {
        h as f64 / 2.0 + 2f64.powi(2 * self.j_max as i32 + 1) * h as f64
    }
}

/// `M_j = u·2^{−j}`.
pub fn block_edge(u: f64, j: u32) -> f64 {
    u * 0.5f64.powi(j as i32)
}

/// `√n` seeded by the integer square root and polished by one Newton step.
pub fn precise_sqrt(n: u64) -> f64 {
    let seed = isqrt(n);
    if seed * seed == n {
        return seed as f64;
    }
    let x = (n as f64).sqrt();
    x - (x * x - n as f64) / (2.0 * x)
}

/// `e(w) = exp(2πiw)` after reducing `w` modulo 1.
#[inline]
pub fn unit_phase(w: f64) -> Complex64 {
    let r = w - w.round();
    let (s, c) = (2.0 * PI * r).sin_cos();
    Complex64::new(c, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_scheme_at_nine() {
        let d = DyadicScheme::new(9.0);
        assert_eq!(d.j_max, 3);
        assert_eq!(d.k_limit(1), 128.5);
        assert_eq!(d.k_limit(4), 128.5 * 4.0);
        let b = d.block_bounds(9.5);
        assert!(b.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(b.len(), 5);
        assert_eq!(DyadicScheme::new(4.0).j_max, 1);
        assert_eq!(DyadicScheme::new(2.5).j_max, 0);
    }

    #[test]
    fn precise_sqrt_is_accurate() {
        for n in [2u64, 3, 99, 10_001, 123_456_789] {
            let s = precise_sqrt(n);
            assert!((s * s - n as f64).abs() <= 4.0 * f64::EPSILON * n as f64);
        }
        assert_eq!(precise_sqrt(144), 12.0);
    }

    #[test]
    fn unit_phase_quarter() {
        let z = unit_phase(5.25);
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }
}
