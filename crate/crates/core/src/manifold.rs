//! Rational Heisenberg manifolds `H_ℓ/Γ_r` with the metric `g_ℓ`, and their
//! Laplace–Beltrami spectrum.
//!
//! The spectrum splits into two classes:
//!
//! * class I, the spectrum of the flat torus `R^{2ℓ}/Z^{2ℓ}`: eigenvalues
//!   `4π²k` with multiplicity `r_{2ℓ}(k)`, the number of representations of
//!   `k` as a sum of `2ℓ` squares;
//! * class II, eigenvalues `2π(n0² + n0(2·n1 + ℓ))` for `n0 ≥ 1`, `n1 ≥ 0`,
//!   with multiplicity `2·n0^ℓ·(r₁⋯r_ℓ)·C(n1+ℓ−1, ℓ−1)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Default memory budget (number of table entries) for representation-count tables.
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 28;

/// Which flat torus supplies the class-I spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusLattice {
    /// `R^{2ℓ}/Z^{2ℓ}`, independent of `r`.
    #[default]
    Standard,
    /// The torus `R^{2ℓ}/(r*Z^ℓ × Z^ℓ)`, whose spectrum comes from the dual
    /// lattice `(1/r)*Z^ℓ × Z^ℓ`.
    Dual,
}

impl std::str::FromStr for TorusLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(TorusLattice::Standard),
            "dual" => Ok(TorusLattice::Dual),
            other => Err(invalid(format!("unknown torus lattice `{other}`"))),
        }
    }
}

/// Validated manifold parameters `(ℓ, r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifoldParams {
    ell: u32,
    r: Vec<u64>,
    r_product: u64,
    torus: TorusLattice,
}

impl ManifoldParams {
    /// Validates `ℓ` and the divisibility chain `r₁ | r₂ | … | r_ℓ`.
    pub fn new(ell: u32, r: &[u64]) -> Result<Self> {
        if ell == 0 {
            return Err(invalid("ell must be at least 1"));
        }
        if r.len() != ell as usize {
            return Err(Error::LengthMismatch {
                expected: ell as usize,
                actual: r.len(),
            });
        }
        if let Some(pos) = r.iter().position(|&x| x == 0) {
            return Err(invalid(format!("r[{pos}] must be a positive integer")));
        }
        for (j, pair) in r.windows(2).enumerate() {
            if pair[1] % pair[0] != 0 {
                return Err(Error::DivisibilityViolation {
                    index: j,
                    next: j + 1,
                    lower: pair[0],
                    upper: pair[1],
                });
            }
        }
        let r_product = r
            .iter()
            .try_fold(1u64, |acc, &x| acc.checked_mul(x))
            .ok_or(Error::Overflow("forming r1*...*r_ell"))?;
        Ok(ManifoldParams {
            ell,
            r: r.to_vec(),
            r_product,
            torus: TorusLattice::Standard,
        })
    }

    /// The manifold with `r = (1, …, 1)`.
    pub fn unit(ell: u32) -> Result<Self> {
        Self::new(ell, &vec![1; ell as usize])
    }

    pub fn with_torus_lattice(mut self, torus: TorusLattice) -> Self {
        self.torus = torus;
        self
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn r(&self) -> &[u64] {
        &self.r
    }

    pub fn r_product(&self) -> u64 {
        self.r_product
    }

    pub fn torus_lattice(&self) -> TorusLattice {
        self.torus
    }

    /// Integer weights `w` and scale `L` such that the class-I eigenvalues are
    /// `4π²·(Σ wᵢ mᵢ²)/L` over `m ∈ Z^{2ℓ}`.
    pub(crate) fn torus_form(&self) -> (Vec<u64>, u64) {
        let ell = self.ell as usize;
        match self.torus {
            TorusLattice::Standard => (vec![1; 2 * ell], 1),
            TorusLattice::Dual => {
                let top = *self.r.last().expect("ell >= 1");
                let mut weights: Vec<u64> = self.r.iter().map(|&rj| (top / rj).pow(2)).collect();
                weights.extend(std::iter::repeat(top * top).take(ell));
                (weights, top * top)
            }
        }
    }
}

/// Validates raw parameters; see [`ManifoldParams::new`].
pub fn validate_params(ell: u32, r: &[u64]) -> Result<ManifoldParams> {
    ManifoldParams::new(ell, r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpectralClass {
    I,
    II,
}

/// Generating indices of a spectral line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LineIndices {
    /// Integer value `k` of the torus quadratic form.
    ClassI { k: u64 },
    ClassII { n0: u64, n1: u64 },
}

/// One eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralLine {
    pub lambda: f64,
    pub multiplicity: u64,
    pub indices: LineIndices,
}

impl SpectralLine {
    pub fn class_tag(&self) -> SpectralClass {
        match self.indices {
            LineIndices::ClassI { .. } => SpectralClass::I,
            LineIndices::ClassII { .. } => SpectralClass::II,
        }
    }
}

/// Table `k ↦ #{m ∈ Z^dim : Σ wᵢ mᵢ² = k}` for `0 ≤ k ≤ limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCounts {
    pub dim: usize,
    pub limit: u64,
    pub counts: Vec<u64>,
}

impl RepCounts {
    pub fn get(&self, k: u64) -> u64 {
        self.counts[k as usize]
    }

    /// Number of lattice points with form value `≤ k`.
    pub fn cumulative(&self, k: u64) -> u64 {
        self.counts[..=(k.min(self.limit) as usize)].iter().sum()
    }
}

/// Representation counts `r_{two_ell}(k)` for `k ≤ limit` under the default budget.
pub fn rep_counts(two_ell: usize, limit: u64) -> Result<RepCounts> {
    rep_counts_with_budget(two_ell, limit, DEFAULT_TABLE_BUDGET)
}

pub fn rep_counts_with_budget(two_ell: usize, limit: u64, budget: u64) -> Result<RepCounts> {
    if two_ell == 0 || two_ell % 2 != 0 {
        return Err(invalid(format!(
            "dimension must be a positive even integer, got {two_ell}"
        )));
    }
    weighted_rep_counts(&vec![1; two_ell], limit, budget)
}

/// Representation counts of the diagonal form `Σ wᵢ mᵢ²`, built by iterated
/// convolution with the one-dimensional sequences `{1 at 0, 2 at w·a²}`.
pub fn weighted_rep_counts(weights: &[u64], limit: u64, budget: u64) -> Result<RepCounts> {
    if weights.is_empty() || weights.contains(&0) {
        return Err(invalid("weights must be non-empty and positive"));
    }
    let len = limit.checked_add(1).ok_or(Error::Overflow("sizing table"))?;
    if len > budget {
        return Err(Error::CapacityExceeded {
            requested: len,
            budget,
        });
    }
    let n = len as usize;
    let mut counts = vec![0u64; n];
    counts[0] = 1;
    for &w in weights {
        let squares: Vec<usize> = (1u64..)
            .map(|a| w * a * a)
            .take_while(|&s| s <= limit)
            .map(|s| s as usize)
            .collect();
        let mut next = counts.clone();
        for &s in &squares {
            for k in s..n {
                next[k] += 2 * counts[k - s];
            }
        }
        counts = next;
    }
    Ok(RepCounts {
        dim: weights.len(),
        limit,
        counts,
    })
}

/// The integer `n0² + n0(2·n1 + ℓ)` whose `2π`-multiple is a class-II eigenvalue.
#[inline]
pub(crate) fn class2_norm(n0: u64, n1: u64, ell: u64) -> u64 {
    n0 * n0 + n0 * (2 * n1 + ell)
}

/// Largest `n1` with `n0² + n0(2·n1+ℓ) ≤ x`, or `None` when even `n1 = 0` fails.
pub(crate) fn max_n1(n0: u64, ell: u64, x: f64) -> Option<u64> {
    if (class2_norm(n0, 0, ell) as f64) > x {
        return None;
    }
    let guess = ((x / n0 as f64 - n0 as f64 - ell as f64) / 2.0).floor().max(0.0) as u64;
    let mut n1 = guess;
    while n1 > 0 && (class2_norm(n0, n1, ell) as f64) > x {
        n1 -= 1;
    }
    while (class2_norm(n0, n1 + 1, ell) as f64) <= x {
        n1 += 1;
    }
    Some(n1)
}

/// Exact binomial coefficient for the small lower indices used here.
pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

fn class2_multiplicity(params: &ManifoldParams, n0: u64, n1: u64) -> u64 {
    let ell = params.ell as u64;
    2 * n0.pow(params.ell) * params.r_product * binomial(n1 + ell - 1, ell - 1)
}

/// All class-II lines with `λ ≤ t_max`, sorted ascending.
pub fn enumerate_class2(params: &ManifoldParams, t_max: f64) -> Result<Vec<SpectralLine>> {
    if !(t_max > 0.0) {
        return Err(invalid("t_max must be positive"));
    }
    let ell = params.ell as u64;
    let x = t_max / (2.0 * PI);
    let mut keyed = Vec::new();
    let mut n0 = 1u64;
    while let Some(top) = max_n1(n0, ell, x) {
        for n1 in 0..=top {
            let q = class2_norm(n0, n1, ell);
            let line = SpectralLine {
                lambda: 2.0 * PI * q as f64,
                multiplicity: class2_multiplicity(params, n0, n1),
                indices: LineIndices::ClassII { n0, n1 },
            };
            keyed.push((q, n0, line));
        }
        n0 += 1;
    }
    keyed.sort_by_key(|&(q, n0, _)| (q, n0));
    Ok(keyed.into_iter().map(|(_, _, line)| line).collect())
}

/// All class-I lines with `λ ≤ t_max` (including `λ = 0`), sorted ascending.
pub fn enumerate_class1(params: &ManifoldParams, t_max: f64) -> Result<Vec<SpectralLine>> {
    if !(t_max > 0.0) {
        return Err(invalid("t_max must be positive"));
    }
    let (weights, scale) = params.torus_form();
    let limit = class1_limit(t_max, scale);
    let table = weighted_rep_counts(&weights, limit, DEFAULT_TABLE_BUDGET)?;
    Ok(table
        .counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(k, &c)| SpectralLine {
            lambda: 4.0 * PI * PI * k as f64 / scale as f64,
            multiplicity: c,
            indices: LineIndices::ClassI { k: k as u64 },
        })
        .collect())
}

/// Largest form value `k` with `4π²k/scale ≤ t`.
pub(crate) fn class1_limit(t: f64, scale: u64) -> u64 {
    let bound = t * scale as f64 / (4.0 * PI * PI);
    let mut k = bound.floor().max(0.0) as u64;
    while k > 0 && 4.0 * PI * PI * k as f64 / scale as f64 > t {
        k -= 1;
    }
    k
}

/// Both classes merged and sorted ascending by eigenvalue.
pub fn spectrum(params: &ManifoldParams, t_max: f64) -> Result<Vec<SpectralLine>> {
    let mut lines = enumerate_class1(params, t_max)?;
    lines.extend(enumerate_class2(params, t_max)?);
    lines.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(lines)
}

/// Weighted class-II count `Σ_{λ ≤ t} d(λ)` without materializing the lines.
///
/// For fixed `n0` the `n1`-sum of `C(n1+ℓ−1, ℓ−1)` telescopes to `C(M+ℓ, ℓ)`.
pub fn class2_count(params: &ManifoldParams, t: f64) -> Result<u64> {
    let ell = params.ell as u64;
    let x = t / (2.0 * PI);
    let mut total: u64 = 0;
    let mut n0 = 1u64;
    while let Some(top) = max_n1(n0, ell, x) {
        let term = (2 * params.r_product as u128)
            * (n0 as u128).pow(params.ell)
            * binomial(top + ell, ell) as u128;
        let term = u64::try_from(term).map_err(|_| Error::Overflow("counting class II"))?;
        total = total
            .checked_add(term)
            .ok_or(Error::Overflow("counting class II"))?;
        n0 += 1;
    }
    Ok(total)
}

/// Number of class-I eigenvalues `≤ t` counted with multiplicity.
pub fn class1_count(params: &ManifoldParams, t: f64) -> Result<u64> {
    let (weights, scale) = params.torus_form();
    let limit = class1_limit(t, scale);
    if weights.len() == 2 && weights[0] == 1 && weights[1] == 1 {
        return Ok(disc_count(limit));
    }
    let table = weighted_rep_counts(&weights, limit, DEFAULT_TABLE_BUDGET)?;
    Ok(table.cumulative(limit))
}

/// `#{(a, b) ∈ Z² : a² + b² ≤ n}` by per-row integer square roots.
pub fn disc_count(n: u64) -> u64 {
    let top = isqrt(n);
    let mut total = 2 * top + 1;
    for a in 1..=top {
        total += 2 * (2 * isqrt(n - a * a) + 1);
    }
    total
}

/// Floor of the square root of `n`.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_rep_counts(dim: usize, limit: u64) -> Vec<u64> {
        let side = isqrt(limit) as i64;
        let mut counts = vec![0u64; limit as usize + 1];
        let mut v = vec![-side; dim];
        loop {
            let norm: i64 = v.iter().map(|x| x * x).sum();
            if norm as u64 <= limit {
                counts[norm as usize] += 1;
            }
            let mut i = 0;
            loop {
                if i == dim {
                    return counts;
                }
                if v[i] < side {
                    v[i] += 1;
                    break;
                }
                v[i] = -side;
                i += 1;
            }
        }
    }

    #[test]
    fn validates_parameters() {
        let p = validate_params(1, &[1]).unwrap();
        assert_eq!(p.r_product(), 1);
        let p = validate_params(3, &[1, 2, 4]).unwrap();
        assert_eq!(p.r_product(), 8);
        assert!(matches!(
            validate_params(2, &[2, 3]),
            Err(Error::DivisibilityViolation { .. })
        ));
        assert!(matches!(
            validate_params(2, &[1]),
            Err(Error::LengthMismatch {
                expected: 2,
                actual: 1
            })
        ));
        assert!(validate_params(0, &[]).is_err());
        assert!(validate_params(1, &[0]).is_err());
    }

    #[test]
    fn rep_counts_small_cases() {
        let t = rep_counts(2, 5).unwrap();
        assert_eq!(t.get(0), 1);
        assert_eq!(t.get(1), 4);
        assert_eq!(t.get(5), 8);
        assert_eq!(rep_counts(4, 2).unwrap().get(2), 24);
        assert_eq!(rep_counts(2, 0).unwrap().counts, vec![1]);
        assert!(rep_counts(3, 4).is_err());
    }

    #[test]
    fn rep_counts_match_enumeration() {
        for dim in [2, 4, 6] {
            let fast = rep_counts(dim, 50).unwrap();
            assert_eq!(fast.counts, brute_rep_counts(dim, 50), "dim {dim}");
        }
    }

    #[test]
    fn rep_counts_respects_budget() {
        assert!(matches!(
            rep_counts_with_budget(2, 100, 50),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn class2_lines_small_cases() {
        let p = ManifoldParams::unit(1).unwrap();
        let lines = enumerate_class2(&p, 13.0).unwrap();
        assert_eq!(lines.len(), 1);
        assert!((lines[0].lambda - 4.0 * PI).abs() < 1e-12);
        assert_eq!(lines[0].multiplicity, 2);
        assert_eq!(lines[0].indices, LineIndices::ClassII { n0: 1, n1: 0 });

        let p = ManifoldParams::unit(3).unwrap();
        let lines = enumerate_class2(&p, 26.0).unwrap();
        assert_eq!(lines.len(), 1);
        assert!((lines[0].lambda - 8.0 * PI).abs() < 1e-12);
        assert_eq!(lines[0].multiplicity, 2);

        let p = ManifoldParams::unit(1).unwrap();
        assert!(enumerate_class2(&p, 1.0).unwrap().is_empty());
    }

    #[test]
    fn class1_lines_small_cases() {
        let p = ManifoldParams::unit(1).unwrap();
        let lines = enumerate_class1(&p, 40.0).unwrap();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].multiplicity, 1);
        assert!((lines[1].lambda - 39.478_417_604_357_43).abs() < 1e-9);
        assert_eq!(lines[1].multiplicity, 4);

        let lines = enumerate_class1(&p, 10.0).unwrap();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].multiplicity, 1);

        let p = ManifoldParams::unit(2).unwrap();
        let lines = enumerate_class1(&p, 40.0).unwrap();
        assert_eq!(
            lines.iter().map(|l| l.multiplicity).collect::<Vec<_>>(),
            vec![1, 8]
        );
    }

    #[test]
    fn class2_size_matches_double_loop() {
        let p = ManifoldParams::unit(1).unwrap();
        for t in [50.0, 333.3, 2000.0] {
            let x = t / (2.0 * PI);
            let mut expected = 0;
            for n0 in 1..100u64 {
                for n1 in 0..1000u64 {
                    if ((n0 * n0 + n0 * (2 * n1 + 1)) as f64) <= x {
                        expected += 1;
                    }
                }
            }
            assert_eq!(enumerate_class2(&p, t).unwrap().len(), expected);
        }
    }

    #[test]
    fn class2_lambda_recomputes() {
        let p = ManifoldParams::new(2, &[1, 3]).unwrap();
        for line in enumerate_class2(&p, 5000.0).unwrap() {
            let LineIndices::ClassII { n0, n1 } = line.indices else {
                panic!("wrong class");
            };
            let again = 2.0 * PI * (n0 * n0 + n0 * (2 * n1 + 2)) as f64;
            assert_eq!(line.lambda, again);
            assert!(line.multiplicity >= 1);
        }
    }

    #[test]
    fn counts_agree_with_lines() {
        for (ell, r) in [(1u32, vec![1u64]), (2, vec![1, 2]), (3, vec![1, 1, 1])] {
            let p = ManifoldParams::new(ell, &r).unwrap();
            for t in [30.0, 400.0, 999.0] {
                let c2: u64 = enumerate_class2(&p, t)
                    .unwrap()
                    .iter()
                    .map(|l| l.multiplicity)
                    .sum();
                assert_eq!(class2_count(&p, t).unwrap(), c2);
                let c1: u64 = enumerate_class1(&p, t)
                    .unwrap()
                    .iter()
                    .map(|l| l.multiplicity)
                    .sum();
                assert_eq!(class1_count(&p, t).unwrap(), c1);
            }
        }
    }

    #[test]
    fn dual_torus_uses_dual_lattice() {
        // r = (2): eigenvalues 4π²(a²/4 + b²); the smallest positive one is π² from a = ±1.
        let p = ManifoldParams::new(1, &[2])
            .unwrap()
            .with_torus_lattice(TorusLattice::Dual);
        let lines = enumerate_class1(&p, 10.0).unwrap();
        assert_eq!(lines.len(), 2);
        assert!((lines[1].lambda - PI * PI).abs() < 1e-12);
        assert_eq!(lines[1].multiplicity, 2);
    }

    #[test]
    fn isqrt_edges() {
        for n in [0u64, 1, 2, 3, 4, 15, 16, 17, u64::MAX] {
            let s = isqrt(n);
            assert!(s as u128 * s as u128 <= n as u128);
            assert!((s as u128 + 1) * (s as u128 + 1) > n as u128);
        }
    }
}
