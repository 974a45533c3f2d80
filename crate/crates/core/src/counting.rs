//! The spectral counting function `N(t)`, the Weyl main term and the
//! remainder `R(t) = N(t) − c·t^{ℓ+1/2}`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fit::{local_log_slopes, log_log_fit};
use crate::manifold::{self, ManifoldParams};
use crate::quadrature::GaussLegendre;

/// Default largest `t` accepted by [`brute_force_n`].
pub const BRUTE_FORCE_CUTOFF: f64 = 1e4;

/// `Γ(ℓ + 3/2) = √π · Π_{j=0}^{ℓ} (j + 1/2)`.
pub fn gamma_l_plus_three_halves(ell: u32) -> f64 {
    (0..=ell).fold(PI.sqrt(), |acc, j| acc * (j as f64 + 0.5))
}

/// Coefficient `c` of the main term `c·t^{ℓ+1/2}`:
/// `r₁⋯r_ℓ / (2^{2ℓ+1/2} π^ℓ Γ(ℓ+3/2))`.
pub fn weyl_coefficient(params: &ManifoldParams) -> f64 {
    let ell = params.ell();
    params.r_product() as f64
        / (2f64.powf(2.0 * ell as f64 + 0.5) * PI.powi(ell as i32) * gamma_l_plus_three_halves(ell))
}

pub fn weyl_main_term(params: &ManifoldParams, t: f64) -> f64 {
    weyl_coefficient(params) * t.powf(params.ell() as f64 + 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountingResult {
    pub t: f64,
    pub n_of_t: u64,
    pub main_term: f64,
    pub remainder: f64,
    /// `R(t) / t^{ℓ−1/4}`.
    pub normalized: f64,
}

/// `N(t)` over both spectral classes with the closed convention `λ ≤ t`.
pub fn count_spectrum(params: &ManifoldParams, t: f64) -> Result<CountingResult> {
    if !(t > 0.0) {
        return Err(invalid("t must be positive"));
    }
    let n_of_t = manifold::class1_count(params, t)?
        .checked_add(manifold::class2_count(params, t)?)
        .ok_or(Error::Overflow("adding spectral classes"))?;
    Ok(result_from_count(params, t, n_of_t))
}

pub(crate) fn result_from_count(params: &ManifoldParams, t: f64, n_of_t: u64) -> CountingResult {
    let main_term = weyl_main_term(params, t);
    let remainder = n_of_t as f64 - main_term;
    CountingResult {
        t,
        n_of_t,
        main_term,
        remainder,
        normalized: remainder / t.powf(params.ell() as f64 - 0.25),
    }
}

/// Independent oracle for `N(t)`: a plain double loop over `(n0, n1)` and a
/// plain walk over lattice vectors, sharing nothing with [`count_spectrum`].
pub fn brute_force_n(params: &ManifoldParams, t: f64) -> Result<u64> {
    brute_force_n_with_cutoff(params, t, BRUTE_FORCE_CUTOFF)
}

pub fn brute_force_n_with_cutoff(params: &ManifoldParams, t: f64, cutoff: f64) -> Result<u64> {
    if t > cutoff {
        return Err(Error::CutoffExceeded { t, cutoff });
    }
    if !(t > 0.0) {
        return Err(invalid("t must be positive"));
    }
    let ell = params.ell() as u64;
    let x = t / (2.0 * PI);

    let mut class2 = 0u64;
    let mut n0 = 1u64;
    while ((n0 * n0 + n0 * ell) as f64) <= x {
        let mut n1 = 0u64;
        while ((n0 * n0 + n0 * (2 * n1 + ell)) as f64) <= x {
            let mut binom = 1u64;
            for i in 1..ell {
                binom = binom * (n1 + i) / i;
            }
            class2 += 2 * n0.pow(ell as u32) * params.r_product() * binom;
            n1 += 1;
        }
        n0 += 1;
    }

    let (weights, scale) = params.torus_form();
    let budget = t * scale as f64 / (4.0 * PI * PI);
    let class1 = count_lattice_points(&weights, 0, budget);
    Ok(class1 + class2)
}

fn count_lattice_points(weights: &[u64], used: u64, budget: f64) -> u64 {
    let Some((&w, rest)) = weights.split_first() else {
        return 1;
    };
    let mut total = 0;
    let mut m: i64 = 0;
    loop {
        let next = used + w * (m * m) as u64;
        if next as f64 > budget {
            break;
        }
        let sub = count_lattice_points(rest, next, budget);
        total += if m == 0 { sub } else { 2 * sub };
        m += 1;
    }
    total
}

/// `E(u) = (2^{ℓ−2}(ℓ−1)!/(r₁⋯r_ℓ)) · R(2πu²)`.
pub fn normalized_error_e(params: &ManifoldParams, u: f64) -> Result<f64> {
    if !(u >= 1.0) {
        return Err(invalid("u must be at least 1"));
    }
    let r = count_spectrum(params, 2.0 * PI * u * u)?.remainder;
    Ok(normalized_error_prefactor(params) * r)
}

pub fn normalized_error_prefactor(params: &ManifoldParams) -> f64 {
    let ell = params.ell();
    let factorial: f64 = (1..ell).map(|k| k as f64).product();
    2f64.powi(ell as i32 - 2) * factorial / params.r_product() as f64
}

/// Cumulative `∫₀^T R(t)² dt` on a grid and its log–log growth rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanSquareReport {
    pub t_grid: Vec<f64>,
    pub integral_values: Vec<f64>,
    pub local_slopes: Vec<f64>,
    pub fitted_slope: f64,
    pub fitted_log_constant: f64,
}

impl MeanSquareReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("T,integral,local_slope\n");
        for ((t, i), s) in self.t_grid.iter().zip(&self.integral_values).zip(&self.local_slopes) {
            out.push_str(&format!(
                "{},{},{}\n",
                crate::fmt_sig(*t),
                crate::fmt_sig(*i),
                crate::fmt_sig(*s)
            ));
        }
        out
    }
}

/// Integrates `R(t)²` exactly piece by piece: between consecutive jumps `N`
/// is constant and the integrand is `(N − c·t^{ℓ+1/2})²`, handled by an
/// 8-point Gauss–Legendre rule. The slope is fitted on the upper half of a
/// uniform grid `T_i = t_max·i/grid_size`.
pub fn mean_square(params: &ManifoldParams, t_max: f64, grid_size: usize) -> Result<MeanSquareReport> {
    if !(t_max >= 100.0) {
        return Err(invalid("mean_square needs t_max >= 100"));
    }
    if grid_size < 10 {
        return Err(invalid("mean_square needs grid_size >= 10"));
    }
    let lines = manifold::spectrum(params, t_max)?;
    let mut jumps: Vec<(f64, u64)> = Vec::new();
    for line in lines {
        match jumps.last_mut() {
            Some(last) if last.0 == line.lambda => last.1 += line.multiplicity,
            _ => jumps.push((line.lambda, line.multiplicity)),
        }
    }
    let c = weyl_coefficient(params);
    let power = params.ell() as f64 + 0.5;
    let rule = GaussLegendre::new(8);
    let piece = |n: u64, a: f64, b: f64| {
        rule.integrate(
            |t| {
                let r = n as f64 - c * t.powf(power);
                r * r
            },
            a,
            b,
        )
    };

    let t_grid: Vec<f64> = (1..=grid_size)
        .map(|i| t_max * i as f64 / grid_size as f64)
        .collect();
    let mut integral_values = Vec::with_capacity(grid_size);
    let mut acc = 0.0;
    let mut current = 0.0;
    let mut n_here = 0u64;
    let mut jump_iter = jumps.iter().peekable();
    for &edge in &t_grid {
        while let Some(&&(lambda, mult)) = jump_iter.peek() {
            if lambda > edge {
                break;
            }
            if lambda > current {
                acc += piece(n_here, current, lambda);
                current = lambda;
            }
            n_here += mult;
            jump_iter.next();
        }
        if edge > current {
            acc += piece(n_here, current, edge);
            current = edge;
        }
        integral_values.push(acc);
    }

    let upper = grid_size / 2;
    let (fitted_slope, fitted_log_constant) = log_log_fit(&t_grid[upper..], &integral_values[upper..]);
    let local_slopes = local_log_slopes(&t_grid, &integral_values);
    Ok(MeanSquareReport {
        t_grid,
        integral_values,
        local_slopes,
        fitted_slope,
        fitted_log_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_term_values() {
        let p = ManifoldParams::unit(1).unwrap();
        // 1/(2^{5/2} π Γ(5/2)) with Γ(5/2) = 3√π/4.
        let want = 1.0 / (2f64.powf(2.5) * PI * 0.75 * PI.sqrt());
        assert!((weyl_main_term(&p, 1.0) - want).abs() < 1e-15);
        assert!((want - 0.042_330).abs() < 5e-6);
        let p2 = ManifoldParams::new(1, &[2]).unwrap();
        assert!((weyl_main_term(&p2, 1.0) - 2.0 * want).abs() < 1e-15);
        assert!((weyl_main_term(&p, 4.0) - 8.0 * want).abs() < 1e-14);
    }

    #[test]
    fn count_at_forty() {
        let p = ManifoldParams::unit(1).unwrap();
        let res = count_spectrum(&p, 40.0).unwrap();
        assert_eq!(res.n_of_t, 15);
        assert!((res.remainder - (15.0 - weyl_main_term(&p, 40.0))).abs() < 1e-12);
        assert!((res.remainder - 4.29).abs() < 0.01);
        assert_eq!(count_spectrum(&p, 1.0).unwrap().n_of_t, 1);
        assert_eq!(brute_force_n(&p, 40.0).unwrap(), 15);
    }

    #[test]
    fn brute_force_matches_small_cases() {
        let p = ManifoldParams::unit(2).unwrap();
        assert_eq!(
            brute_force_n(&p, 50.0).unwrap(),
            count_spectrum(&p, 50.0).unwrap().n_of_t
        );
        for (ell, r) in [(1u32, vec![3u64]), (2, vec![1, 2]), (3, vec![1, 1, 1])] {
            let p = ManifoldParams::new(ell, &r).unwrap();
            assert_eq!(brute_force_n(&p, 0.5).unwrap(), 1);
        }
        assert!(matches!(
            brute_force_n(&p, 2e4),
            Err(Error::CutoffExceeded { .. })
        ));
    }

    #[test]
    fn prefactor_values() {
        let p1 = ManifoldParams::unit(1).unwrap();
        assert_eq!(normalized_error_prefactor(&p1), 0.5);
        let p3 = ManifoldParams::unit(3).unwrap();
        assert_eq!(normalized_error_prefactor(&p3), 4.0);
        let p12 = ManifoldParams::new(1, &[2]).unwrap();
        assert_eq!(normalized_error_prefactor(&p12), 0.25);
        let u = 7.3;
        let e = normalized_error_e(&p1, u).unwrap();
        let r = count_spectrum(&p1, 2.0 * PI * u * u).unwrap().remainder;
        assert!((e - 0.5 * r).abs() < 1e-12);
    }

    #[test]
    fn mean_square_is_monotone() {
        let p = ManifoldParams::unit(1).unwrap();
        let rep = mean_square(&p, 2000.0, 40).unwrap();
        assert!(rep.integral_values.windows(2).all(|w| w[1] >= w[0]));
        assert!(rep.t_grid.windows(2).all(|w| w[1] > w[0]));
        assert!(mean_square(&p, 50.0, 40).is_err());
        assert!(mean_square(&p, 500.0, 5).is_err());
    }

    #[test]
    fn mean_square_matches_fine_sampling() {
        // Riemann sum of R(t)² on a very fine grid as an independent check.
        let p = ManifoldParams::unit(1).unwrap();
        let rep = mean_square(&p, 200.0, 10).unwrap();
        let steps = 400_000;
        let h = 200.0 / steps as f64;
        let mut sum = 0.0;
        for i in 0..steps {
            let t = (i as f64 + 0.5) * h;
            let r = count_spectrum(&p, t).unwrap().remainder;
            sum += r * r * h;
        }
        let got = *rep.integral_values.last().unwrap();
        assert!((got - sum).abs() / sum < 1e-3, "{got} vs {sum}");
    }
}
