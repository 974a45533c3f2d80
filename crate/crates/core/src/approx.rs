//! The sawtooth `ψ(w) = w − ⌊w⌋ − 1/2`, Vaaler's trigonometric majorant and
//! approximant, and the fractional-part sum `E*(u)`.
//!
//! For every real `w` and `H ≥ 1`,
//! `|ψ(w) + Σ_H(w)| ≤ Σ*_H(w)` with
//! `Σ_H(w) = Σ_{h≤H} α_h sin(2πhw)` and
//! `Σ*_H(w) = Σ_{h≤H} β_h cos(2πhw) + 1/(2H+2)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::counting::normalized_error_e;
use crate::error::{invalid, Result};
use crate::fit::{fit_basis, log_log_fit};
use crate::manifold::ManifoldParams;

/// `ψ(w) = w − ⌊w⌋ − 1/2`, in `[−1/2, 1/2)`.
#[inline]
pub fn psi(w: f64) -> f64 {
    w - w.floor() - 0.5
}

/// `πη·cot(πη)` for small `η`, by its Taylor series.
fn pi_cot_series(eta: f64) -> f64 {
    let z = (PI * eta).powi(2);
    1.0 - z / 3.0 - z * z / 45.0 - 2.0 * z.powi(3) / 945.0 - z.powi(4) / 4725.0
}

/// `1 − πη·cot(πη)` for small `η`, without cancellation.
fn one_minus_pi_cot_series(eta: f64) -> f64 {
    let z = (PI * eta).powi(2);
    z / 3.0 + z * z / 45.0 + 2.0 * z.powi(3) / 945.0 + z.powi(4) / 4725.0
}

const SERIES_CUTOFF: f64 = 1e-3;

/// `ρ(ξ) = πξ(1−ξ)cot(πξ) + ξ` on `(0, 1)`.
///
/// Near `ξ = 1` the identity `ρ(ξ) = ξ(1 − πη cot(πη))`, `η = 1 − ξ`, is used.
pub fn vaaler_rho(xi: f64) -> f64 {
    debug_assert!(xi > 0.0 && xi < 1.0);
    if xi <= 0.5 {
        let g = if xi < SERIES_CUTOFF {
            pi_cot_series(xi)
        } else {
            PI * xi / (PI * xi).tan()
        };
        (1.0 - xi) * g + xi
    } else {
        let eta = 1.0 - xi;
        let one_minus_g = if eta < SERIES_CUTOFF {
            one_minus_pi_cot_series(eta)
        } else {
            1.0 - PI * eta / (PI * eta).tan()
        };
        xi * one_minus_g
    }
}

/// Coefficients `α_{h,H}`, `β_{h,H}` for `h = 1..=H` (stored at index `h − 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VaalerCoeffs {
    pub degree: usize,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl VaalerCoeffs {
    pub fn new(degree: usize) -> Self {
        assert!(degree >= 1, "Vaaler degree must be positive");
        let denom = (degree + 1) as f64;
        let alpha = (1..=degree)
            .map(|h| vaaler_rho(h as f64 / denom) / (PI * h as f64))
            .collect();
        let beta = (1..=degree)
            .map(|h| (1.0 - h as f64 / denom) / denom)
            .collect();
        VaalerCoeffs {
            degree,
            alpha,
            beta,
        }
    }

    /// `α_{h,H}` for `1 ≤ h ≤ H`.
    pub fn alpha(&self, h: usize) -> f64 {
        self.alpha[h - 1]
    }

    pub fn beta(&self, h: usize) -> f64 {
        self.beta[h - 1]
    }

    /// `Σ_H(w)`.
    pub fn sigma(&self, w: f64) -> f64 {
        self.alpha
            .iter()
            .enumerate()
            .map(|(i, a)| a * (2.0 * PI * (i + 1) as f64 * w).sin())
            .sum()
    }

    /// `Σ*_H(w)`.
    pub fn sigma_star(&self, w: f64) -> f64 {
        let s: f64 = self
            .beta
            .iter()
            .enumerate()
            .map(|(i, b)| b * (2.0 * PI * (i + 1) as f64 * w).cos())
            .sum();
        s + 1.0 / (2.0 * self.degree as f64 + 2.0)
    }
}

pub fn vaaler_coeffs(degree: usize) -> VaalerCoeffs {
    VaalerCoeffs::new(degree)
}

pub fn sigma_h(w: f64, c: &VaalerCoeffs) -> f64 {
    c.sigma(w)
}

pub fn sigma_h_star(w: f64, c: &VaalerCoeffs) -> f64 {
    c.sigma_star(w)
}

/// Outcome of checking the sandwich inequality on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VaalerCheck {
    pub degree: usize,
    pub grid: usize,
    /// Smallest `Σ* − |ψ + Σ|` seen.
    pub min_slack: f64,
    pub max_slack: f64,
    /// Points where the slack is below `−tolerance`.
    pub violations: usize,
}

/// Evaluates the slack `Σ*_H(w) − |ψ(w) + Σ_H(w)|` at `w = i/grid`, `0 ≤ i < grid`.
pub fn vaaler_check(degree: usize, grid: usize, tolerance: f64) -> VaalerCheck {
    let c = VaalerCoeffs::new(degree);
    let mut min_slack = f64::INFINITY;
    let mut max_slack = f64::NEG_INFINITY;
    let mut violations = 0;
    for i in 0..grid {
        let w = i as f64 / grid as f64;
        let slack = c.sigma_star(w) - (psi(w) + c.sigma(w)).abs();
        min_slack = min_slack.min(slack);
        max_slack = max_slack.max(slack);
        if slack < -tolerance {
            violations += 1;
        }
    }
    VaalerCheck {
        degree,
        grid,
        min_slack,
        max_slack,
        violations,
    }
}

/// `E*(u) = −Σ_{1≤m≤u} m(u²−m²)^{ℓ−1} ψ(u²/(2m) − m/2 − ℓ/2)`.
pub fn estar(ell: u32, u: f64) -> f64 {
    let u2 = u * u;
    let top = u.floor() as u64;
    let mut acc = 0.0;
    for m in 1..=top {
        let mf = m as f64;
        let arg = u2 / (2.0 * mf) - mf / 2.0 - ell as f64 / 2.0;
        acc += mf * (u2 - mf * mf).powi(ell as i32 - 1) * psi(arg);
    }
    -acc
}

/// `E(u) − E*(u)` on a log-spaced grid, with a fitted secular part
/// `c₀ + c₁u^{2ℓ}` removed and the growth exponent of what remains.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstarComparison {
    pub ell: u32,
    pub u_values: Vec<f64>,
    pub e_values: Vec<f64>,
    pub estar_values: Vec<f64>,
    pub secular_c0: f64,
    pub secular_c1: f64,
    /// `E − E* − c₀ − c₁u^{2ℓ}`.
    pub residuals: Vec<f64>,
    /// Geometric centre of each block of consecutive samples.
    pub block_u: Vec<f64>,
    /// Root mean square of the residuals in each block.
    pub block_rms: Vec<f64>,
    /// Log–log slope of `block_rms` against `block_u`.
    pub fitted_exponent: f64,
    pub fitted_log_constant: f64,
}

impl EstarComparison {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,E,Estar,residual\n");
        for i in 0..self.u_values.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                crate::fmt_sig(self.u_values[i]),
                crate::fmt_sig(self.e_values[i]),
                crate::fmt_sig(self.estar_values[i]),
                crate::fmt_sig(self.residuals[i])
            ));
        }
        out
    }
}

/// Compares `E(u)` with `E*(u)` at `samples` log-spaced points of `[u_min, u_max]`,
/// grouping consecutive samples into `blocks` blocks for the exponent fit.
pub fn estar_compare(
    params: &ManifoldParams,
    u_min: f64,
    u_max: f64,
    samples: usize,
    blocks: usize,
) -> Result<EstarComparison> {
    if !(u_min >= 1.0 && u_max > u_min) {
        return Err(invalid("need 1 <= u_min < u_max"));
    }
    if blocks < 2 || samples < 2 * blocks {
        return Err(invalid("need at least 2 blocks of at least 2 samples"));
    }
    let ell = params.ell();
    let ratio = u_max / u_min;
    let u_values: Vec<f64> = (0..samples)
        .map(|i| u_min * ratio.powf(i as f64 / (samples - 1) as f64))
        .collect();
    let e_values = u_values
        .par_iter()
        .map(|&u| normalized_error_e(params, u))
        .collect::<Result<Vec<f64>>>()?;
    let estar_values: Vec<f64> = u_values.par_iter().map(|&u| estar(ell, u)).collect();
    let diffs: Vec<f64> = e_values.iter().zip(&estar_values).map(|(e, s)| e - s).collect();

    let power = 2 * ell as i32;
    let one = |_: f64| 1.0;
    let top = |u: f64| u.powi(power);
    let c = fit_basis(&u_values, &diffs, &[&one, &top]);
    let residuals: Vec<f64> = u_values
        .iter()
        .zip(&diffs)
        .map(|(&u, d)| d - c[0] - c[1] * u.powi(power))
        .collect();

    let mut block_u = Vec::with_capacity(blocks);
    let mut block_rms = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let lo = b * samples / blocks;
        let hi = (b + 1) * samples / blocks;
        let k = (hi - lo) as f64;
        block_u.push((u_values[lo..hi].iter().map(|u| u.ln()).sum::<f64>() / k).exp());
        block_rms.push((residuals[lo..hi].iter().map(|r| r * r).sum::<f64>() / k).sqrt());
    }
    let (fitted_exponent, fitted_log_constant) = log_log_fit(&block_u, &block_rms);
    Ok(EstarComparison {
        ell,
        u_values,
        e_values,
        estar_values,
        secular_c0: c[0],
        secular_c1: c[1],
        residuals,
        block_u,
        block_rms,
        fitted_exponent,
        fitted_log_constant,
    })
}
