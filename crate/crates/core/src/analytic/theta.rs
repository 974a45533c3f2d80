use serde::Serialize;

/// Summand of `θ_ℓ` for a factorization `n = h·m` with `m > h`, `h ≡ m (mod 2)`.
#[inline]
fn summand(ell: u32, h: f64, m: f64) -> f64 {
    (h / m).sqrt() * (1.0 - h / m).powi(ell as i32 - 1)
}

/// `θ_ℓ(n) = Σ_{h(2k−h)=n, k>h} √(h/(2k−h))·(1 − h/(2k−h))^{ℓ−1}`.
///
/// Writing `m = 2k − h`, the pairs are the divisor pairs `n = h·m` with
/// `m > h` of equal parity.
pub fn theta_coeff(ell: u32, n: u64) -> f64 {
    let mut acc = 0.0;
    let mut h = 1u64;
    while h * h < n {
        if n % h == 0 {
            let m = n / h;
            if (m - h) % 2 == 0 {
                acc += summand(ell, h as f64, m as f64);
            }
        }
        h += 1;
    }
    acc
}

/// `θ_ℓ(n)` for all `1 ≤ n ≤ limit`, filled sieve-style over `(h, m)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaTable {
    pub ell: u32,
    pub limit: u64,
    /// `values[n]`; index 0 is unused and zero.
    pub values: Vec<f64>,
}

impl ThetaTable {
    pub fn new(ell: u32, limit: u64) -> Self {
        let mut values = vec![0.0; limit as usize + 1];
        let mut h = 1u64;
        while h * (h + 2) <= limit {
            let mut m = h + 2;
            while h * m <= limit {
                values[(h * m) as usize] += summand(ell, h as f64, m as f64);
                m += 2;
            }
            h += 1;
        }
        ThetaTable { ell, limit, values }
    }

    pub fn get(&self, n: u64) -> f64 {
        self.values[n as usize]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,theta\n");
        for n in 1..=self.limit {
            out.push_str(&format!("{},{}\n", n, crate::fmt_sig(self.get(n))));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        for ell in 1..4 {
            assert_eq!(theta_coeff(ell, 1), 0.0);
        }
        assert!((theta_coeff(1, 3) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let want = (1.0f64 / 15.0).sqrt() + (3.0f64 / 5.0).sqrt();
        assert!((theta_coeff(1, 15) - want).abs() < 1e-15);
        assert!((theta_coeff(1, 15) - 1.03280).abs() < 1e-5);
        assert_eq!(theta_coeff(1, 4), 0.0);
        assert_eq!(theta_coeff(1, 2), 0.0);
    }

    #[test]
    fn table_matches_divisor_route() {
        for ell in 1..=3 {
            let table = ThetaTable::new(ell, 2000);
            for n in 1..=2000 {
                assert!((table.get(n) - theta_coeff(ell, n)).abs() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn bounded_by_divisor_count() {
        let table = ThetaTable::new(1, 3000);
        for n in 1..=3000u64 {
            let d = (1..=n).filter(|k| n % k == 0).count() as f64;
            assert!(table.get(n) >= 0.0 && table.get(n) <= d);
        }
    }
}
