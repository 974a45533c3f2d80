//! Gauss–Legendre rules and an adaptive composite integrator.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values an integrand may return.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are roots of `P_n`, found by Newton iteration from the
    /// Chebyshev-like initial guesses `cos(π(i − 1/4)/(n + 1/2))`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<V: QuadValue>(&self, f: impl Fn(f64) -> V, a: f64, b: f64) -> V {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = V::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * w;
        }
        acc * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Settings for [`adaptive_integrate`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveConfig {
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Number of equal panels the interval is split into before refinement.
    pub initial_panels: usize,
    pub order: usize,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        AdaptiveConfig {
            rel_tol: 1e-8,
            max_depth: 20,
            initial_panels: 16,
            order: 16,
        }
    }
}

/// Adaptive composite Gauss–Legendre quadrature.
///
/// A panel is accepted when the rule on the whole panel and on its two halves
/// agree to `rel_tol` times the panel's share of `∫|f|` (estimated on the
/// initial partition), so oscillatory integrands with heavy cancellation do
/// not force endless refinement.
pub fn adaptive_integrate<V: QuadValue>(
    f: impl Fn(f64) -> V,
    a: f64,
    b: f64,
    config: &AdaptiveConfig,
) -> Result<V> {
    let rule = GaussLegendre::new(config.order);
    let panels = config.initial_panels.max(1);
    let width = (b - a) / panels as f64;
    let bounds: Vec<(f64, f64)> = (0..panels)
        .map(|i| (a + width * i as f64, if i + 1 == panels { b } else { a + width * (i + 1) as f64 }))
        .collect();
    let abs_scale: f64 = bounds
        .iter()
        .map(|&(lo, hi)| rule.integrate(|x| f(x).magnitude(), lo, hi))
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let total_len = (b - a).abs();
    let mut acc = V::zero();
    for (lo, hi) in bounds {
        let coarse = rule.integrate(&f, lo, hi);
        acc = acc + refine(&f, &rule, lo, hi, coarse, abs_scale, total_len, config, 0)?;
    }
    Ok(acc)
}

#[allow(clippy::too_many_arguments)]
fn refine<V: QuadValue>(
    f: &impl Fn(f64) -> V,
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: V,
    abs_scale: f64,
    total_len: f64,
    config: &AdaptiveConfig,
    depth: u32,
) -> Result<V> {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(f, a, mid);
    let right = rule.integrate(f, mid, b);
    let halves = left + right;
    let tol = config.rel_tol * abs_scale * (b - a).abs() / total_len;
    if (halves - whole).magnitude() <= tol {
        return Ok(halves);
    }
    if depth >= config.max_depth {
        return Err(Error::QuadratureFailure(format!(
            "depth limit {} reached on [{a}, {b}]",
            config.max_depth
        )));
    }
    let l = refine(f, rule, a, mid, left, abs_scale, total_len, config, depth + 1)?;
    let r = refine(f, rule, mid, b, right, abs_scale, total_len, config, depth + 1)?;
    Ok(l + r)
}
