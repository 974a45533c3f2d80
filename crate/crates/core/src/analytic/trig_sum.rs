use std::f64::consts::PI;

use serde::Serialize;

use super::{precise_sqrt, DyadicScheme};
use crate::approx::VaalerCoeffs;
use crate::error::{Error, Result};

/// Truncation and size limits for `D(U)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumConfig {
    /// Keep only `k ≤ k_cap`; `None` means the full range `k ≤ K_{h,U}`.
    pub k_cap: Option<u64>,
    /// Refuse to build more terms than this.
    pub max_terms: u64,
}

impl Default for SumConfig {
    fn default() -> Self {
        SumConfig {
            k_cap: Some(100_000),
            max_terms: 50_000_000,
        }
    }
}

/// One `(h, k)` term of `S(u, U)`:
/// `sin_coeff·sin(2πuω + π/4) + cos_coeff·cos(2πuω + π/4)` with `ω = √n`, `n = h(2k−h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigTerm {
    pub h: u64,
    pub k: u64,
    pub n: u64,
    pub freq: f64,
    /// `h^{3/4}(2k−2h)^{ℓ−1}/(2k−h)^{ℓ+1/4}·(−1)^{hℓ}`.
    pub amplitude: f64,
    pub sin_coeff: f64,
    pub cos_coeff: f64,
}

impl TrigTerm {
    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        let x = u * self.freq;
        let (s, c) = (2.0 * PI * (x - x.floor()) + PI / 4.0).sin_cos();
        self.sin_coeff * s + self.cos_coeff * c
    }
}

/// The finite trigonometric sum
/// `S(u, U) = Σ_{(h,k) ∈ D(U)} h^{3/4}(2k−2h)^{ℓ−1}/(2k−h)^{ℓ+1/4}(−1)^{hℓ}
///            [α_{h,[U]} sin(2πu√(h(2k−h)) + π/4) − β_{h,[U]} cos(…)]`
/// with its terms precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSum {
    pub big_u: f64,
    pub ell: u32,
    pub scheme: DyadicScheme,
    pub terms: Vec<TrigTerm>,
    /// Upper bound on `Σ|amplitude|·(α+β)` over the dropped `k > k_cap` tail.
    pub truncation_bound: f64,
}

impl TrigSum {
    /// Builds `D(U)` with Vaaler coefficients of degree `[U]`.
    pub fn new(big_u: f64, ell: u32, config: &SumConfig) -> Result<Self> {
        if !(big_u >= 4.0) {
            return Err(Error::InvalidArgument("S(u, U) needs U >= 4".into()));
        }
        let coeffs = VaalerCoeffs::new(big_u.floor() as usize);
        Self::with_coefficients(big_u, ell, config, |h| (coeffs.alpha(h), coeffs.beta(h)))
    }

    /// Builds `D(U)` with caller-supplied `(α_h, β_h)`.
    pub fn with_coefficients(
        big_u: f64,
        ell: u32,
        config: &SumConfig,
        coeffs: impl Fn(usize) -> (f64, f64),
    ) -> Result<Self> {
        let scheme = DyadicScheme::new(big_u);
        let h_max = big_u.floor() as u64;
        let mut count: u64 = 0;
        for h in 1..=h_max {
            let top = scheme.k_limit(h).floor() as u64;
            let top = config.k_cap.map_or(top, |cap| top.min(cap));
            count += top.saturating_sub(h);
        }
        if count > config.max_terms {
            return Err(Error::BudgetExceeded(format!(
                "D(U) has {count} terms, limit is {}",
                config.max_terms
            )));
        }
        let mut terms = Vec::with_capacity(count as usize);
        let mut truncation_bound = 0.0;
        for h in 1..=h_max {
            let (alpha, beta) = coeffs(h as usize);
            let sign = if (h * ell as u64) % 2 == 1 { -1.0 } else { 1.0 };
            let full_top = scheme.k_limit(h).floor() as u64;
            let top = config.k_cap.map_or(full_top, |cap| full_top.min(cap));
            let hf = h as f64;
            for k in h + 1..=top {
                let m = 2 * k - h;
                let amplitude = sign * hf.powf(0.75) * ((2 * k - 2 * h) as f64).powi(ell as i32 - 1)
                    / (m as f64).powf(ell as f64 + 0.25);
                terms.push(TrigTerm {
                    h,
                    k,
                    n: h * m,
                    freq: precise_sqrt(h * m),
                    amplitude,
                    sin_coeff: amplitude * alpha,
                    cos_coeff: -amplitude * beta,
                });
            }
            if top < full_top {
                // (2k−2h)^{ℓ−1}/(2k−h)^{ℓ+1/4} ≤ (2k−h)^{−5/4}, and
                // Σ_{k>cap} (2k−h)^{−5/4} ≤ 2(2·cap−h)^{−1/4}.
                let tail = 2.0 * ((2 * top - h) as f64).powf(-0.25);
                truncation_bound += hf.powf(0.75) * (alpha.abs() + beta.abs()) * tail;
            }
        }
        Ok(TrigSum {
            big_u,
            ell,
            scheme,
            terms,
            truncation_bound,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `S(u, U)`.
    pub fn eval(&self, u: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(u)).sum()
    }

    /// Largest retained frequency `√(h(2k−h))`.
    pub fn max_freq(&self) -> f64 {
        self.terms.iter().map(|t| t.freq).fold(0.0, f64::max)
    }

    /// Per-term dump `h,k,n,amplitude,phase` at the point `u`, where `phase`
    /// is `2πu√n + π/4` reduced to `[0, 2π)`.
    pub fn terms_csv(&self, u: f64) -> String {
        let mut out = String::from("h,k,n,amplitude,phase\n");
        for t in &self.terms {
            let x = u * t.freq;
            let phase = (2.0 * PI * (x - x.floor()) + PI / 4.0).rem_euclid(2.0 * PI);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                t.h,
                t.k,
                t.n,
                crate::fmt_sig(t.amplitude),
                crate::fmt_sig(phase)
            ));
        }
        out
    }
}

/// One-shot `S(u, U)`; build a [`TrigSum`] when evaluating many `u`.
pub fn trig_sum_s(u: f64, big_u: f64, ell: u32, config: &SumConfig) -> Result<f64> {
    if !(u >= big_u - 1.0 && u <= big_u + 1.0) {
        return Err(Error::InvalidArgument(format!(
            "u = {u} is outside [U−1, U+1] for U = {big_u}"
        )));
    }
    Ok(TrigSum::new(big_u, ell, config)?.eval(u))
}
