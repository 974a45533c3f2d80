//! The end-to-end search for a large positive remainder: choose `T`, find a
//! shift `U` with `‖U√q − 1/2‖ ≤ ε₀/T` for all squarefree `q ∈ (1, T²]`,
//! evaluate `S(u, U)` over `[U−1, U+1]` and its Fejér average `I(T, U)`,
//! and count exactly at `t* = 2π(u*)²` for the best grid point `u*`.

use std::f64::consts::{E, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{fejer_average_of, SumConfig, ThetaTable, TrigSum};
use crate::approx::estar;
use crate::counting::count_spectrum;
use crate::diophantine::{exact_within, KroneckerTarget};
use crate::error::{invalid, Error, Result};
use crate::manifold::ManifoldParams;

/// `ω_ℓ(t)`: `(log t)^{1/4}` for even `ℓ`, `(log log t · log log log t)^{1/4}`
/// for odd `ℓ`, natural logarithms throughout.
pub fn omega_normalizer(ell: u32, t: f64) -> Result<f64> {
    if !(t > E.exp()) {
        return Err(Error::DomainTooSmall(format!(
            "ω needs t > e^e ≈ 15.154, got {t}"
        )));
    }
    let l1 = t.ln();
    if ell % 2 == 0 {
        return Ok(l1.powf(0.25));
    }
    let l2 = l1.ln();
    Ok((l2 * l2.ln()).powf(0.25))
}

/// `Σ_{1 ≤ n ≤ T²/2} θ_ℓ(n)/n^{3/4}`.
pub fn theta_lower_sum(ell: u32, t: f64) -> Result<f64> {
    if !(t >= 2.0) || !t.is_finite() {
        return Err(invalid(format!("T must be at least 2, got {t}")));
    }
    let limit = (t * t / 2.0).floor() as u64;
    let table = ThetaTable::new(ell, limit);
    Ok((1..=limit).map(|n| table.get(n) / (n as f64).powf(0.75)).sum())
}

/// Largest `t*` at which the report still counts `N(t*)` exactly: `10^{9−ℓ}`.
pub fn exact_count_ceiling(ell: u32) -> f64 {
    10f64.powi(9 - ell as i32)
}

/// Grid points needed over `[U−1, U+1]` for 20 samples per period of the
/// fastest term: `40·max(T, top frequency)`.
pub fn required_grid(t: f64, top_freq: f64) -> usize {
    (40.0 * t.max(top_freq)).ceil() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalReport {
    pub ell: u32,
    pub r: Vec<u64>,
    #[serde(rename = "T")]
    pub t: f64,
    pub epsilon0: f64,
    pub qs: Vec<u64>,
    #[serde(rename = "U")]
    pub big_u: u64,
    /// `‖U√q − 1/2‖` per `q`.
    pub distances: Vec<f64>,
    pub max_distance: f64,
    pub terms: usize,
    pub truncation_bound: f64,
    pub grid: usize,
    pub required_grid: usize,
    pub u_star: f64,
    #[serde(rename = "S_at_u_star")]
    pub s_at_u_star: f64,
    #[serde(rename = "I_value")]
    pub i_value: f64,
    /// Fejér-truncated prediction of `I(T, U)`.
    #[serde(rename = "I_predicted")]
    pub i_predicted: f64,
    pub t_star: f64,
    /// `"available"` or `"unavailable"` (when `t*` is above the exact-count ceiling).
    pub r_exact: String,
    #[serde(rename = "N_at_t_star")]
    pub n_at_t_star: Option<u64>,
    #[serde(rename = "R_at_t_star")]
    pub r_at_t_star: Option<f64>,
    #[serde(rename = "normalized_R")]
    pub normalized_r: Option<f64>,
    pub omega_value: f64,
    pub theta_sum_lower: f64,
    /// `E*(u*) − u*^{2ℓ−1/2}·S(u*, U)`.
    pub estar_minus_scaled_s: f64,
    #[serde(skip)]
    pub s_trace: Vec<(f64, f64)>,
}

impl ExtremalReport {
    /// `u,S` over the evaluation grid.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("u,S\n");
        for &(u, s) in &self.s_trace {
            out.push_str(&format!("{},{}\n", crate::fmt_sig(u), crate::fmt_sig(s)));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub t: f64,
    pub epsilon0: f64,
    /// Number of candidates `U` scanned, starting at `max(⌈T²⌉, 4)`.
    pub search_budget: u64,
    pub grid: usize,
    pub sum: SumConfig,
}

impl PipelineConfig {
    pub fn new(t: f64, epsilon0: f64) -> Self {
        PipelineConfig {
            t,
            epsilon0,
            search_budget: 1_000_000,
            grid: 2001,
            sum: SumConfig::default(),
        }
    }
}

pub fn run_pipeline(params: &ManifoldParams, cfg: &PipelineConfig) -> Result<ExtremalReport> {
    let ell = params.ell();
    if ell % 2 == 0 {
        return Err(invalid(
            "the pipeline needs odd ℓ: its sign cancellation (−1)^{hℓ}(−1)^h = 1 fails for even ℓ",
        ));
    }
    if !(cfg.epsilon0 > 0.0 && cfg.epsilon0 < 0.5) {
        return Err(invalid(format!("epsilon0 must lie in (0, 1/2), got {}", cfg.epsilon0)));
    }
    if cfg.search_budget == 0 {
        return Err(invalid("search budget must be positive"));
    }
    if cfg.grid < 2 {
        return Err(invalid("grid needs at least 2 points"));
    }

    let mut target = KroneckerTarget::new(cfg.t, cfg.epsilon0)?;
    let u_min = ((cfg.t * cfg.t).ceil() as u64).max(4);
    let u_max = u_min + cfg.search_budget - 1;
    let big_u = target
        .search(u_min, u_max)?
        .ok_or(Error::SearchFailed { u_min, u_max })?;
    debug_assert!(big_u as f64 >= cfg.t * cfg.t);
    let thr = target.threshold();
    if !target.qs.iter().all(|&q| exact_within(big_u, q, thr)) {
        return Err(Error::PrecisionCeilingExceeded(format!(
            "U = {big_u} failed exact re-verification"
        )));
    }
    let distances = target.distances(big_u);
    let max_distance = distances.iter().cloned().fold(0.0, f64::max);

    let uf = big_u as f64;
    let sum = TrigSum::new(uf, ell, &cfg.sum)?;
    let needed = required_grid(cfg.t, sum.max_freq());
    if cfg.grid < needed {
        return Err(invalid(format!(
            "grid = {} under-resolves S(u, U): at least {needed} points are needed",
            cfg.grid
        )));
    }
    let step = 2.0 / (cfg.grid - 1) as f64;
    let s_trace: Vec<(f64, f64)> = (0..cfg.grid)
        .into_par_iter()
        .map(|i| {
            let u = uf - 1.0 + step * i as f64;
            (u, sum.eval(u))
        })
        .collect();
    let (u_star, s_at_u_star) = s_trace
        .iter()
        .cloned()
        .fold((f64::NAN, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best });

    let fejer = fejer_average_of(&sum, cfg.t)?;
    let t_star = 2.0 * PI * u_star * u_star;
    let (r_exact, n_at, r_at, norm_r) = if t_star <= exact_count_ceiling(ell) {
        let c = count_spectrum(params, t_star)?;
        ("available", Some(c.n_of_t), Some(c.remainder), Some(c.normalized))
    } else {
        ("unavailable", None, None, None)
    };

    Ok(ExtremalReport {
        ell,
        r: params.r().to_vec(),
        t: cfg.t,
        epsilon0: cfg.epsilon0,
        qs: target.qs.clone(),
        big_u,
        distances,
        max_distance,
        terms: sum.len(),
        truncation_bound: sum.truncation_bound,
        grid: cfg.grid,
        required_grid: needed,
        u_star,
        s_at_u_star,
        i_value: fejer.numeric,
        i_predicted: fejer.predicted,
        t_star,
        r_exact: r_exact.to_string(),
        n_at_t_star: n_at,
        r_at_t_star: r_at,
        normalized_r: norm_r,
        omega_value: omega_normalizer(ell, t_star)?,
        theta_sum_lower: theta_lower_sum(ell, cfg.t)?,
        estar_minus_scaled_s: estar(ell, u_star) - u_star.powf(2.0 * ell as f64 - 0.5) * s_at_u_star,
        s_trace,
    })
}

/// Median of `|R(t)|/t^{ℓ−1/4}` over `samples` uniform `t ∈ [lo, hi]` drawn from a seeded generator.
pub fn median_normalized_remainder(
    params: &ManifoldParams,
    lo: f64,
    hi: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if !(lo > 0.0 && hi > lo) || samples == 0 {
        return Err(invalid("need 0 < lo < hi and at least one sample"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ts: Vec<f64> = (0..samples).map(|_| rng.gen_range(lo..=hi)).collect();
    let mut values = ts
        .iter()
        .map(|&t| count_spectrum(params, t).map(|c| c.normalized.abs()))
        .collect::<Result<Vec<f64>>>()?;
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Ok(if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    })
}
