use num_complex::Complex64;
use serde::Serialize;

use super::{block_edge, precise_sqrt, unit_phase};

/// `F′(ξ) = h(u²/(2ξ²) + 1/2)` for the phase `F(ξ) = −h(u²/(2ξ) − ξ/2)`.
pub fn phase_derivative(h: f64, u: f64, xi: f64) -> f64 {
    h * (u * u / (2.0 * xi * xi) + 0.5)
}

/// `E_j(h, u) = Σ_{m ∈ ]M_{j+1}, M_j]} m(u²−m²)^{ℓ−1} e(−h(u²/(2m) − m/2))`.
///
/// `h` may be negative; `E_j(−h, u)` is the complex conjugate of `E_j(h, u)`.
pub fn exp_sum_direct(j: u32, h: i64, u: f64, ell: u32) -> Complex64 {
    let lo = block_edge(u, j + 1);
    let hi = block_edge(u, j);
    let u2 = u * u;
    let first = lo.floor() as u64 + 1;
    let last = hi.floor() as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in first..=last {
        let mf = m as f64;
        let amplitude = mf * (u2 - mf * mf).powi(ell as i32 - 1);
        // h·m/2 only matters modulo 1.
        let half_turn = if (h * m as i64).rem_euclid(2) == 1 { 0.5 } else { 0.0 };
        let phase = h as f64 * u2 / (2.0 * mf) - half_turn;
        acc += unit_phase(-phase) * amplitude;
    }
    acc
}

/// Integer `k` in the image `]F′(M_j), F′(M_{j+1})]` of block `j`.
pub fn transformed_k_range(j: u32, h: u64, u: f64) -> std::ops::RangeInclusive<u64> {
    let lo = phase_derivative(h as f64, u, block_edge(u, j));
    let hi = phase_derivative(h as f64, u, block_edge(u, j + 1));
    // F′ at the block edges is a half-integer multiple of h; guard the
    // rounding so integer endpoints are classified exactly.
    let lo = snap(lo);
    let hi = snap(hi);
    (lo.floor() as u64 + 1)..=(hi.floor() as u64)
}

fn snap(x: f64) -> f64 {
    let r = (2.0 * x).round() / 2.0;
    if (x - r).abs() < 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// Main term of the stationary-phase transform of `E_j(h, u)`:
/// `h^{3/4} u^{2ℓ−1/2} Σ_k (2k−2h)^{ℓ−1}/(2k−h)^{ℓ+1/4} · e(−u√(h(2k−h)) − 1/8)`.
pub fn exp_sum_transformed(j: u32, h: u64, u: f64, ell: u32) -> Complex64 {
    transformed_main_term(transformed_k_range(j, h, u), h, u, ell)
}

fn transformed_main_term(ks: impl Iterator<Item = u64>, h: u64, u: f64, ell: u32) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in ks {
        let m = 2 * k - h;
        let weight = ((2 * k - 2 * h) as f64).powi(ell as i32 - 1) / (m as f64).powf(ell as f64 + 0.25);
        let freq = precise_sqrt(h * m);
        let x = u * freq;
        acc += unit_phase(-(x - x.floor()) - 0.125) * weight;
    }
    acc * ((h as f64).powf(0.75) * u.powf(2.0 * ell as f64 - 0.5))
}

/// Direct sum versus transform, normalized by the shape of the error term
/// `u^{2ℓ−3} M_j^{5/2} h^{−1/2} + u^{2ℓ−1} log u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformCheck {
    pub j: u32,
    pub h: u64,
    pub u: f64,
    pub ell: u32,
    pub direct_re: f64,
    pub direct_im: f64,
    pub transformed_re: f64,
    pub transformed_im: f64,
    pub gap: f64,
    pub error_scale: f64,
    /// `gap / error_scale`, the implied constant for this case.
    pub constant: f64,
}

pub fn transform_check(j: u32, h: u64, u: f64, ell: u32) -> TransformCheck {
    let direct = exp_sum_direct(j, h as i64, u, ell);
    let transformed = exp_sum_transformed(j, h, u, ell);
    let gap = (direct - transformed).norm();
    let m_j = block_edge(u, j);
    let error_scale = u.powf(2.0 * ell as f64 - 3.0) * m_j.powf(2.5) / (h as f64).sqrt()
        + u.powf(2.0 * ell as f64 - 1.0) * u.ln();
    TransformCheck {
        j,
        h,
        u,
        ell,
        direct_re: direct.re,
        direct_im: direct.im,
        transformed_re: transformed.re,
        transformed_im: transformed.im,
        gap,
        error_scale,
        constant: gap / error_scale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_block_is_zero() {
        // u = 1.5, j = 0: block ]0.75, 1.5] holds m = 1; j = 1: ]0.375, 0.75] is empty.
        assert_eq!(exp_sum_direct(1, 1, 1.5, 1), Complex64::new(0.0, 0.0));
        assert!(exp_sum_direct(0, 1, 1.5, 1).norm() > 0.0);
    }

    #[test]
    fn direct_matches_naive_sum() {
        let (u, h) = (10.3f64, 1i64);
        let mut want = Complex64::new(0.0, 0.0);
        for m in 6..=10 {
            let m = m as f64;
            let arg = -2.0 * PI * h as f64 * (u * u / (2.0 * m) - m / 2.0);
            want += Complex64::new(arg.cos(), arg.sin()) * m;
        }
        let got = exp_sum_direct(0, h, u, 1);
        assert!((got - want).norm() <= 1e-9 * want.norm());
    }

    #[test]
    fn negative_h_conjugates() {
        for ell in 1..=3 {
            let a = exp_sum_direct(1, 3, 40.7, ell);
            let b = exp_sum_direct(1, -3, 40.7, ell);
            assert!((a - b.conj()).norm() <= 1e-9 * a.norm().max(1.0));
        }
    }

    #[test]
    fn k_range_endpoints_follow_phase_derivative() {
        let u = 33.3;
        for h in 1..5u64 {
            assert!((phase_derivative(h as f64, u, u) - h as f64).abs() < 1e-12);
            let r = transformed_k_range(0, h, u);
            assert_eq!(*r.start(), h + 1);
            assert_eq!(*r.end(), (2.5 * h as f64).floor() as u64);
            // Consecutive blocks tile the k-axis.
            let next = transformed_k_range(1, h, u);
            assert_eq!(*next.start(), *r.end() + 1);
        }
    }

    #[test]
    fn empty_k_range_is_zero() {
        assert_eq!(transformed_main_term(std::iter::empty(), 2, 50.3, 1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn full_range_agrees_when_top_endpoint_is_smooth() {
        // For ℓ = 3 the weight m(u²−m²)² vanishes to second order at m = u,
        // so summing all blocks leaves only small boundary errors.
        let rel: Vec<f64> = [50.3, 200.3]
            .iter()
            .map(|&u| {
                let mut direct = Complex64::new(0.0, 0.0);
                let mut transformed = direct;
                for j in 0..12 {
                    direct += exp_sum_direct(j, 1, u, 3);
                    transformed += exp_sum_transformed(j, 1, u, 3);
                }
                (direct - transformed).norm() / direct.norm()
            })
            .collect();
        assert!(rel[0] < 0.05 && rel[1] < rel[0], "{rel:?}");
    }

    #[test]
    fn block_zero_constants_are_stable() {
        let c: Vec<f64> = [1u64, 2]
            .iter()
            .flat_map(|&h| [50.3, 100.3, 200.3].map(|u| transform_check(0, h, u, 1).constant))
            .collect();
        let max = c.iter().cloned().fold(0.0, f64::max);
        let min = c.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min > 0.0 && max / min <= 20.0, "{c:?}");
    }
}
