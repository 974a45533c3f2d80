//! The Gaussian circle problem: `P(x) = #{(a, b) ∈ Z² : a² + b² ≤ x²} − πx²`
//! and the mean square `∫₀^X P(x)² dx ~ c·X²`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::fit::{local_log_slopes, log_log_fit};
use crate::manifold::isqrt;
use crate::quadrature::GaussLegendre;

pub const MAX_RADIUS: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleSample {
    pub x: f64,
    pub count: u64,
    /// `count − πx²`.
    pub p_value: f64,
}

impl CircleSample {
    pub fn csv_header() -> &'static str {
        "x,count,P"
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{}", crate::fmt_sig(self.x), self.count, crate::fmt_sig(self.p_value))
    }
}

/// The integer `R` with `a² + b² ≤ x² ⟺ a² + b² ≤ R`: `x²` itself when it is
/// within rounding of an integer (so `x = √k` is counted at its jump), else `⌊x²⌋`.
pub fn squared_radius(x: f64) -> u64 {
    let x2 = x * x;
    let nearest = x2.round();
    if (x2 - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as u64
    } else {
        x2.floor() as u64
    }
}

/// `#{(a, b) : a² + b² ≤ r}` by rows.
pub fn lattice_count(r: u64) -> u64 {
    let top = isqrt(r);
    let row = |a: u64| 2 * isqrt(r - a * a) + 1;
    let rest: u64 = (1..=top).into_par_iter().map(row).sum();
    row(0) + 2 * rest
}

pub fn circle_count(x: f64) -> Result<CircleSample> {
    if !(x > 0.0 && x <= MAX_RADIUS) {
        return Err(invalid(format!("x must lie in (0, {MAX_RADIUS}], got {x}")));
    }
    let count = lattice_count(squared_radius(x));
    Ok(CircleSample {
        x,
        count,
        p_value: count as f64 - PI * x * x,
    })
}

/// `r₂(k)` for `k ∈ [start, start + len)`.
fn r2_segment(start: u64, len: u64) -> Vec<u32> {
    let end = start + len - 1;
    let mut out = vec![0u32; len as usize];
    for a in 0..=isqrt(end) {
        let a2 = a * a;
        let b_lo = if a2 >= start {
            0
        } else {
            let need = start - a2;
            let b = isqrt(need);
            if b * b == need {
                b
            } else {
                b + 1
            }
        };
        let b_hi = isqrt(end - a2);
        let a_mult = if a == 0 { 1 } else { 2 };
        for b in b_lo..=b_hi {
            let b_mult = if b == 0 { 1 } else { 2 };
            out[(a2 + b * b - start) as usize] += a_mult * b_mult;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CramerReport {
    pub x_grid: Vec<f64>,
    /// `∫₀^X P(x)² dx` at each grid point.
    pub integral_values: Vec<f64>,
    pub local_slopes: Vec<f64>,
    /// Log–log slope over the upper half of the grid.
    pub slope: f64,
    pub log_constant: f64,
}

impl CramerReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("X,integral,local_slope\n");
        for i in 0..self.x_grid.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                crate::fmt_sig(self.x_grid[i]),
                crate::fmt_sig(self.integral_values[i]),
                crate::fmt_sig(self.local_slopes[i])
            ));
        }
        out
    }
}

const SEGMENT: u64 = 1 << 20;

/// `∫₀^X P(x)² dx` on the uniform grid `X_i = x_max·i/grid`, `i = 1..=grid`.
///
/// The count is constant on `[√k, √(k+1))`, where `P` is a quadratic in `x`,
/// so a three-point Gauss rule is exact on every piece. The range of `k` is
/// cut into segments that are integrated independently and summed in order.
pub fn cramer_mean_square(x_max: f64, grid: usize) -> Result<CramerReport> {
    if !(x_max >= 1e3 && x_max <= 2e4) {
        return Err(invalid(format!("x_max must lie in [1000, 20000], got {x_max}")));
    }
    if grid < 4 {
        return Err(invalid("grid needs at least 4 points"));
    }
    let x_grid: Vec<f64> = (1..=grid).map(|i| x_max * i as f64 / grid as f64).collect();
    let k_end = (x_max * x_max).floor() as u64 + 1;
    let segments: Vec<u64> = (0..k_end.div_ceil(SEGMENT)).map(|s| s * SEGMENT).collect();
    let rule = GaussLegendre::new(3);

    // Each segment yields its total plus partial integrals at the grid points it contains.
    let parts: Vec<(f64, Vec<(usize, f64)>)> = segments
        .par_iter()
        .map(|&start| {
            let len = SEGMENT.min(k_end - start);
            let r2 = r2_segment(start, len);
            let mut count = if start == 0 { 0 } else { lattice_count(start - 1) };
            let mut acc = 0.0;
            let mut marks = Vec::new();
            let mut g = x_grid.partition_point(|&x| x < (start as f64).sqrt());
            for (i, &r) in r2.iter().enumerate() {
                let k = start + i as u64;
                count += r as u64;
                let c = count as f64;
                let p2 = |x: f64| {
                    let p = c - PI * x * x;
                    p * p
                };
                let mut from = (k as f64).sqrt();
                let next = ((k + 1) as f64).sqrt();
                while g < x_grid.len() && x_grid[g] < next {
                    let to = x_grid[g].max(from);
                    acc += rule.integrate(p2, from, to);
                    from = to;
                    marks.push((g, acc));
                    g += 1;
                }
                let end = next.min(x_max);
                if end > from {
                    acc += rule.integrate(p2, from, end);
                }
            }
            (acc, marks)
        })
        .collect();

    let mut integral_values = vec![0.0; grid];
    let mut offset = 0.0;
    for (total, marks) in parts {
        for (g, partial) in marks {
            integral_values[g] = offset + partial;
        }
        offset += total;
    }
    let upper = grid / 2;
    let (slope, log_constant) = log_log_fit(&x_grid[upper..], &integral_values[upper..]);
    let local_slopes = local_log_slopes(&x_grid, &integral_values);
    Ok(CramerReport {
        x_grid,
        integral_values,
        local_slopes,
        slope,
        log_constant,
    })
}
