use std::f64::consts::PI;

use serde::Serialize;

use super::{unit_phase, SumConfig, TrigSum};
use crate::error::{Error, Result};
use crate::quadrature::{adaptive_integrate, AdaptiveConfig};

/// `F_T(v) = T·(sin(πTv)/(πTv))²`, with `F_T(0) = T`.
pub fn fejer_kernel(t: f64, v: f64) -> f64 {
    let x = PI * t * v;
    let sinc = if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    };
    t * sinc * sinc
}

/// Panels needed so each one spans at most about half an oscillation.
fn panels_for(top_freq: f64) -> usize {
    (2.0 * top_freq).ceil().max(16.0) as usize
}

/// `∫_{−1}^{1} F_T(v) e(Qv + δ) dv` against `max(1 − Q/T, 0)·e(δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FejerIdentity {
    pub t: f64,
    pub q: f64,
    pub delta: f64,
    pub numeric_re: f64,
    pub numeric_im: f64,
    pub closed_re: f64,
    pub closed_im: f64,
    pub gap: f64,
    /// `gap·Q`, the constant in `gap ≤ C/Q`.
    pub constant: f64,
}

pub fn fejer_identity_check(t: f64, q: f64, delta: f64) -> Result<FejerIdentity> {
    if !(q > 0.0) {
        return Err(Error::InvalidArgument(format!("Q must be positive, got {q}")));
    }
    if !(t >= 1.0) {
        return Err(Error::InvalidArgument(format!("T must be at least 1, got {t}")));
    }
    let cfg = AdaptiveConfig {
        initial_panels: panels_for(q + t),
        ..AdaptiveConfig::default()
    };
    let numeric = adaptive_integrate(
        |v| unit_phase(q * v + delta) * fejer_kernel(t, v),
        -1.0,
        1.0,
        &cfg,
    )?;
    let closed = unit_phase(delta) * (1.0 - q / t).max(0.0);
    let gap = (numeric - closed).norm();
    Ok(FejerIdentity {
        t,
        q,
        delta,
        numeric_re: numeric.re,
        numeric_im: numeric.im,
        closed_re: closed.re,
        closed_im: closed.im,
        gap,
        constant: gap * q,
    })
}

/// `I(T, U) = ∫_{−1}^{1} S(U+v, U)·F_T(v) dv` and its Fejér-truncated prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FejerAverage {
    pub t: f64,
    pub big_u: f64,
    pub ell: u32,
    /// Quadrature value.
    pub numeric: f64,
    /// `Σ_{h(2k−h) ≤ T²} amplitude·(1 − √(h(2k−h))/T)·[α sin(…) − β cos(…)]` at `u = U`.
    pub predicted: f64,
    pub gap: f64,
    /// Number of `(h, k)` with `h(2k−h) ≤ T²`.
    pub surviving_terms: usize,
    pub total_terms: usize,
}

/// Builds `S(·, U)` and averages it; requires `U ≥ T²`.
pub fn fejer_average_i(t: f64, big_u: f64, ell: u32, config: &SumConfig) -> Result<FejerAverage> {
    if !(t >= 1.0) {
        return Err(Error::InvalidArgument(format!("T must be at least 1, got {t}")));
    }
    if !(big_u >= t * t) {
        return Err(Error::InvalidArgument(format!("need U >= T², got U = {big_u}, T = {t}")));
    }
    let sum = TrigSum::new(big_u, ell, config)?;
    fejer_average_of(&sum, t)
}

/// Same as [`fejer_average_i`] for an already built sum.
pub fn fejer_average_of(sum: &TrigSum, t: f64) -> Result<FejerAverage> {
    let big_u = sum.big_u;
    let cfg = AdaptiveConfig {
        initial_panels: panels_for(sum.max_freq() + t),
        ..AdaptiveConfig::default()
    };
    let numeric = adaptive_integrate(|v| sum.eval(big_u + v) * fejer_kernel(t, v), -1.0, 1.0, &cfg)?;

    let t2 = t * t;
    let mut predicted = 0.0;
    let mut surviving_terms = 0;
    for term in sum.terms.iter().filter(|term| (term.n as f64) <= t2) {
        predicted += term.eval(big_u) * (1.0 - term.freq / t);
        surviving_terms += 1;
    }
    Ok(FejerAverage {
        t,
        big_u,
        ell: sum.ell,
        numeric,
        predicted,
        gap: (numeric - predicted).abs(),
        surviving_terms,
        total_terms: sum.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;

    #[test]
    fn kernel_values() {
        assert_eq!(fejer_kernel(7.0, 0.0), 7.0);
        for k in [1.0, -2.0, 5.0] {
            assert!(fejer_kernel(4.0, k / 4.0).abs() < 1e-28);
        }
        for i in -200..=200 {
            assert!(fejer_kernel(13.0, i as f64 * 0.0123) >= 0.0);
        }
    }

    #[test]
    fn kernel_mass_on_unit_interval() {
        let rule = GaussLegendre::new(20);
        let mass: f64 = (0..400)
            .map(|i| {
                let a = -1.0 + i as f64 / 200.0;
                rule.integrate(|v| fejer_kernel(20.0, v), a, a + 1.0 / 200.0)
            })
            .sum();
        let delta = 1.0 - mass;
        assert!(delta > 0.0 && delta < 0.02, "{delta}");
    }

    #[test]
    fn identity_examples() {
        let c = fejer_identity_check(50.0, 25.0, 0.0).unwrap();
        assert!((c.closed_re - 0.5).abs() < 1e-15 && c.closed_im.abs() < 1e-15);
        assert!(c.gap * 25.0 <= 2.0, "{c:?}");
        let c = fejer_identity_check(50.0, 100.0, 0.3).unwrap();
        assert_eq!((c.closed_re, c.closed_im), (0.0, 0.0));
        let c = fejer_identity_check(50.0, 25.0, 0.25).unwrap();
        assert!(c.closed_re.abs() < 1e-15 && (c.closed_im - 0.5).abs() < 1e-15);
        assert!(fejer_identity_check(50.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn average_of_zero_sum_is_zero() {
        let sum = TrigSum::with_coefficients(9.0, 1, &SumConfig::default(), |_| (0.0, 0.0)).unwrap();
        let avg = fejer_average_of(&sum, 3.0).unwrap();
        assert_eq!(avg.numeric, 0.0);
        assert_eq!(avg.predicted, 0.0);
    }

    #[test]
    fn surviving_set_grows_with_t() {
        let sum = TrigSum::new(16.0, 1, &SumConfig::default()).unwrap();
        let counts: Vec<usize> = [1.5, 2.0, 3.0, 4.0]
            .iter()
            .map(|&t| sum.terms.iter().filter(|x| (x.n as f64) <= t * t).count())
            .collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
        assert!(counts[3] > counts[0]);
    }

    #[test]
    fn average_tracks_prediction() {
        let avg = fejer_average_i(3.0, 9.0, 1, &SumConfig::default()).unwrap();
        assert!(avg.surviving_terms > 0);
        assert!(avg.gap < 1.0, "{avg:?}");
        assert!(fejer_average_i(4.0, 9.0, 1, &SumConfig::default()).is_err());
    }
}
