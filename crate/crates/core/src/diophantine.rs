//! Squarefree sieving, the simultaneous approximation search
//! `‖U√q − 1/2‖ ≤ ε₀/T` for all squarefree `q ∈ (1, T²]`, discrepancy modulo 1,
//! and a numeric certificate for the linear independence of `1, √q₁, …, √q_s`.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Squarefree integers in `(1, q]`, ascending.
pub fn squarefree_up_to(q: u64) -> Vec<u64> {
    if q < 2 {
        return Vec::new();
    }
    let n = q as usize;
    let mut square_free = vec![true; n + 1];
    let mut composite = vec![false; crate::manifold::isqrt(q) as usize + 1];
    for p in 2..composite.len() {
        if composite[p] {
            continue;
        }
        for m in (p * p..composite.len()).step_by(p) {
            composite[m] = true;
        }
        for m in (p * p..=n).step_by(p * p) {
            square_free[m] = false;
        }
    }
    (2..=q).filter(|&k| square_free[k as usize]).collect()
}

/// `‖x‖`, the distance from `x` to the nearest integer.
pub fn dist_nearest_int(x: f64) -> f64 {
    (x - x.round()).abs()
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `√q` as an unevaluated sum `hi + lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTermSqrt {
    pub q: u64,
    pub hi: f64,
    pub lo: f64,
}

impl TwoTermSqrt {
    pub fn new(q: u64) -> Self {
        let qf = q as f64;
        let hi = qf.sqrt();
        let residual = (-hi).mul_add(hi, qf);
        TwoTermSqrt {
            q,
            hi,
            lo: residual / (2.0 * hi),
        }
    }

    /// `⟨u√q⟩` as `(a, b)` with `a + b` the fractional part, `a ∈ [0, 1)`.
    pub fn frac_of_multiple(&self, u: u64) -> (f64, f64) {
        let uf = u as f64;
        let p = uf * self.hi;
        let err = uf.mul_add(self.hi, -p);
        let (a, b) = two_sum(p - p.floor(), err + uf * self.lo);
        wrap(a, b)
    }

    fn step(&self) -> (f64, f64) {
        (self.hi - self.hi.floor(), self.lo)
    }
}

#[inline]
fn wrap(a: f64, b: f64) -> (f64, f64) {
    if a >= 1.0 {
        (a - 1.0, b)
    } else if a < 0.0 {
        (a + 1.0, b)
    } else {
        (a, b)
    }
}

/// The simultaneous approximation problem for a given `T` and `ε₀`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KroneckerTarget {
    pub t: f64,
    pub epsilon0: f64,
    pub qs: Vec<u64>,
    pub found_u: Option<u64>,
}

pub const DEFAULT_EPSILON0: f64 = 0.1;

impl KroneckerTarget {
    /// Target with `qs` all squarefree integers in `(1, T²]`.
    pub fn new(t: f64, epsilon0: f64) -> Result<Self> {
        if !(t >= 2.0) || !t.is_finite() {
            return Err(invalid(format!("T must be at least 2, got {t}")));
        }
        let qs = squarefree_up_to((t * t).floor() as u64);
        Self::with_qs(t, epsilon0, qs)
    }

    pub fn with_qs(t: f64, epsilon0: f64, qs: Vec<u64>) -> Result<Self> {
        if !(t >= 2.0) || !t.is_finite() {
            return Err(invalid(format!("T must be at least 2, got {t}")));
        }
        if !(epsilon0 > 0.0) || !epsilon0.is_finite() {
            return Err(invalid(format!("epsilon0 must be positive, got {epsilon0}")));
        }
        let squarefree = squarefree_up_to((t * t).floor() as u64);
        for w in qs.windows(2) {
            if w[0] >= w[1] {
                return Err(invalid("qs must be strictly ascending"));
            }
        }
        if let Some(&bad) = qs.iter().find(|q| squarefree.binary_search(q).is_err()) {
            return Err(invalid(format!("{bad} is not a squarefree integer in (1, T²]")));
        }
        Ok(KroneckerTarget {
            t,
            epsilon0,
            qs,
            found_u: None,
        })
    }

    pub fn s(&self) -> usize {
        self.qs.len()
    }

    /// `ε₀/T`.
    pub fn threshold(&self) -> f64 {
        self.epsilon0 / self.t
    }

    /// `‖U√q − 1/2‖` for every `q`.
    pub fn distances(&self, u: u64) -> Vec<f64> {
        self.qs
            .iter()
            .map(|&q| {
                let (a, b) = TwoTermSqrt::new(q).frac_of_multiple(u);
                dist_nearest_int((a - 0.5) + b)
            })
            .collect()
    }

    /// Runs [`kronecker_search`] and records the result.
    pub fn search(&mut self, u_min: u64, u_max: u64) -> Result<Option<u64>> {
        self.found_u = kronecker_search(self, u_min, u_max)?;
        Ok(self.found_u)
    }
}

/// Worst-case absolute error of the computed `⟨U√q⟩` for `U ≤ u_max`.
fn fractional_error_bound(u_max: u64, t: f64) -> f64 {
    let eps = f64::EPSILON;
    8.0 * eps + u_max as f64 * t * eps * eps + (SCAN_CHUNK as f64) * eps * eps
}

const SCAN_CHUNK: u64 = 1 << 20;
const MAX_SCAN_U: u64 = 1 << 52;
/// Computed distances this close to `ε₀/T` are decided exactly.
const DECISION_MARGIN: f64 = 1e-9;

/// Smallest `U ∈ [u_min, u_max]` with `‖U√q − 1/2‖ ≤ ε₀/T` for every `q`.
///
/// Fractional parts advance incrementally and are reseeded at every
/// `2^20`-aligned chunk, so the answer does not depend on the thread count.
/// Accepted candidates are re-verified in exact integer arithmetic.
pub fn kronecker_search(target: &KroneckerTarget, u_min: u64, u_max: u64) -> Result<Option<u64>> {
    if u_min == 0 || u_min > u_max {
        return Err(invalid(format!("need 1 <= U_min <= U_max, got [{u_min}, {u_max}]")));
    }
    let thr = target.threshold();
    if u_max > MAX_SCAN_U || fractional_error_bound(u_max, target.t) > thr / 10.0 {
        return Err(Error::PrecisionCeilingExceeded(format!(
            "U_max = {u_max} is too large to resolve fractional parts to within ε₀/(10T) = {}",
            thr / 10.0
        )));
    }
    if target.qs.is_empty() || thr >= 0.5 {
        return Ok(Some(u_min));
    }
    let roots: Vec<TwoTermSqrt> = target.qs.iter().map(|&q| TwoTermSqrt::new(q)).collect();

    let first_chunk = u_min / SCAN_CHUNK;
    let last_chunk = u_max / SCAN_CHUNK;
    let batch = rayon::current_num_threads().max(1) as u64;
    let mut chunk = first_chunk;
    while chunk <= last_chunk {
        let end = (chunk + batch - 1).min(last_chunk);
        let found = (chunk..=end)
            .into_par_iter()
            .filter_map(|c| {
                let lo = (c * SCAN_CHUNK).max(u_min);
                let hi = (c * SCAN_CHUNK + SCAN_CHUNK - 1).min(u_max);
                scan_chunk(&roots, thr, lo, hi)
            })
            .min();
        if found.is_some() {
            return Ok(found);
        }
        chunk = end + 1;
    }
    Ok(None)
}

fn scan_chunk(roots: &[TwoTermSqrt], thr: f64, lo: u64, hi: u64) -> Option<u64> {
    let mut state: Vec<(f64, f64)> = roots.iter().map(|r| r.frac_of_multiple(lo)).collect();
    let steps: Vec<(f64, f64)> = roots.iter().map(TwoTermSqrt::step).collect();
    let mut u = lo;
    loop {
        let ok = state
            .iter()
            .all(|&(a, b)| dist_nearest_int((a - 0.5) + b) <= thr + DECISION_MARGIN);
        // The margin keeps near-threshold cases in play; the exact check decides.
        if ok && roots.iter().all(|r| exact_within(u, r.q, thr)) {
            return Some(u);
        }
        if u == hi {
            return None;
        }
        u += 1;
        for (s, &(da, db)) in state.iter_mut().zip(&steps) {
            let (a, e) = two_sum(s.0, da);
            let (a, b) = two_sum(a, s.1 + db + e);
            *s = wrap(a, b);
        }
    }
}

/// Decides `‖U√q − 1/2‖ ≤ thr` exactly. `thr` is a dyadic rational, so
/// with `thr = M/2^b` the condition reads
/// `(2n+1)2^{b−1} − M ≤ 2^b U√q ≤ (2n+1)2^{b−1} + M` for some integer `n`,
/// which is compared after squaring.
pub fn exact_within(u: u64, q: u64, thr: f64) -> bool {
    if thr >= 0.5 {
        return true;
    }
    if thr < 0.0 {
        return false;
    }
    let (mantissa, b) = dyadic(thr);
    let scaled_sq = (BigUint::from(u) * BigUint::from(u) * BigUint::from(q)) << (2 * b);
    let approx = ((u as f64) * (q as f64).sqrt() - 0.5).round() as i128;
    for n in approx - 1..=approx + 1 {
        if n < 0 {
            continue;
        }
        let centre = BigUint::from((2 * n + 1) as u128) << (b - 1);
        let m = BigUint::from(mantissa);
        let upper = &centre + &m;
        let upper_ok = &upper * &upper >= scaled_sq;
        let lower_ok = if centre <= m {
            true
        } else {
            let lower = &centre - &m;
            &lower * &lower <= scaled_sq
        };
        if lower_ok && upper_ok {
            return true;
        }
    }
    false
}

/// `x = mantissa / 2^b` with `b ≥ 1`, for finite `x ≥ 0`.
fn dyadic(x: f64) -> (u64, u32) {
    if x == 0.0 {
        return (0, 1);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut mantissa, mut e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    while mantissa % 2 == 0 && e < -1 {
        mantissa /= 2;
        e += 1;
    }
    debug_assert!(e < 0);
    (mantissa, (-e) as u32)
}

/// Discrepancy modulo 1: the supremum over boxes `[a, b) ⊂ [0, 1)^s` of
/// `|#{points in box}/N − vol(box)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discrepancy {
    pub value: f64,
    /// `false` when `value` is a random-box lower estimate.
    pub exact: bool,
    pub dimension: usize,
    pub points: usize,
}

pub const RANDOM_BOX_SAMPLES: usize = 100_000;
const RANDOM_BOX_SEED: u64 = 0x5eed_d15c;

/// Exact for `s ≤ 2`, a random-box lower estimate otherwise.
/// Coordinates are reduced modulo 1 first.
pub fn discrepancy_mod1(points: &[Vec<f64>]) -> Result<Discrepancy> {
    let n = points.len();
    if n == 0 {
        return Err(invalid("need at least one point"));
    }
    let s = points[0].len();
    if s == 0 {
        return Err(invalid("points must have at least one coordinate"));
    }
    if let Some(p) = points.iter().find(|p| p.len() != s) {
        return Err(Error::LengthMismatch {
            expected: s,
            actual: p.len(),
        });
    }
    let reduced: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().map(|&x| x - x.floor()).collect())
        .collect();
    let (value, exact) = match s {
        1 => {
            let mut xs: Vec<f64> = reduced.iter().map(|p| p[0]).collect();
            (discrepancy_1d(&mut xs), true)
        }
        2 => (discrepancy_2d(&reduced), true),
        _ => (random_box_estimate(&reduced, RANDOM_BOX_SAMPLES), false),
    };
    Ok(Discrepancy {
        value,
        exact,
        dimension: s,
        points: n,
    })
}

/// `1/N + max_i(i/N − x_(i)) − min_i(i/N − x_(i))` over the sorted points.
fn discrepancy_1d(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    for (i, &x) in xs.iter().enumerate() {
        let d = (i + 1) as f64 / n - x;
        hi = hi.max(d);
        lo = lo.min(d);
    }
    1.0 / n + hi - lo
}

/// Exact 2-d sweep. Box edges range over the point coordinates together
/// with 0 and 1; closed boxes give the excess of points, open boxes the
/// deficit. For each pair of x-edges the best y-interval is a maximum
/// subarray problem, so the cost is `O(N³)`.
fn discrepancy_2d(points: &[Vec<f64>]) -> f64 {
    let n = points.len() as f64;
    let grid = |k: usize| {
        let mut g: Vec<f64> = points.iter().map(|p| p[k]).chain([0.0, 1.0]).collect();
        g.sort_by(f64::total_cmp);
        g.dedup();
        g
    };
    let xg = grid(0);
    let yg = grid(1);
    let index = |g: &[f64], v: f64| g.binary_search_by(|p| p.total_cmp(&v)).unwrap();
    // y-indices of the points in each x-column
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); xg.len()];
    for p in points {
        columns[index(&xg, p[0])].push(index(&yg, p[1]));
    }
    let ny = yg.len();
    let mut best: f64 = 0.0;
    let mut closed = vec![0u32; ny];
    let mut open = vec![0u32; ny];
    for i in 0..xg.len() {
        closed.iter_mut().for_each(|c| *c = 0);
        open.iter_mut().for_each(|c| *c = 0);
        for j in i..xg.len() {
            let w = xg[j] - xg[i];
            // [x_i, x_j] × [y_k, y_l]: maximize count/N − w(y_l − y_k).
            for &y in &columns[j] {
                closed[y] += 1;
            }
            let mut prefix = 0.0;
            let mut min_start = f64::INFINITY;
            for l in 0..ny {
                min_start = min_start.min(prefix - w * yg[l]);
                prefix += closed[l] as f64 / n;
                best = best.max(prefix - w * yg[l] - min_start);
            }
            // (x_i, x_j) × (y_k, y_l): maximize w(y_l − y_k) − count/N.
            if j == i {
                continue;
            }
            if j > i + 1 {
                for &y in &columns[j - 1] {
                    open[y] += 1;
                }
            }
            let mut prefix = 0.0;
            let mut min_start = f64::INFINITY;
            for l in 0..ny {
                if l > 0 {
                    best = best.max(w * yg[l] - prefix - min_start);
                }
                prefix += open[l] as f64 / n;
                min_start = min_start.min(w * yg[l] - prefix);
            }
        }
    }
    best
}

fn random_box_estimate(points: &[Vec<f64>], samples: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_BOX_SEED);
    let s = points[0].len();
    let n = points.len() as f64;
    let mut best: f64 = 0.0;
    let mut lo = vec![0.0; s];
    let mut hi = vec![0.0; s];
    for _ in 0..samples {
        let mut vol = 1.0;
        for k in 0..s {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            lo[k] = a.min(b);
            hi[k] = a.max(b);
            vol *= hi[k] - lo[k];
        }
        let inside = points
            .iter()
            .filter(|p| (0..s).all(|k| p[k] >= lo[k] && p[k] < hi[k]))
            .count();
        best = best.max((inside as f64 / n - vol).abs());
    }
    best
}

/// Smallest `‖h·(√q₁, …, √q_s)‖` over nonzero `h` with `|h|_∞ ≤ H`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesicovitchCertificate {
    pub qs: Vec<u64>,
    pub h_max: u64,
    pub min_dist: f64,
    pub witness: Vec<i64>,
    pub vectors_checked: u64,
}

/// Largest allowed `s·log₂(2H+1)`.
pub const BESICOVITCH_BUDGET_BITS: f64 = 40.0;

/// Exhaustive scan of `[−H, H]^s \ {0}` in lexicographic order; the first
/// minimizer is the witness.
pub fn besicovitch_check(qs: &[u64], h_max: u64) -> Result<BesicovitchCertificate> {
    if qs.is_empty() || h_max == 0 {
        return Err(invalid("need a nonempty qs and H_max >= 1"));
    }
    let side = 2 * h_max + 1;
    let bits = qs.len() as f64 * (side as f64).log2();
    if bits > BESICOVITCH_BUDGET_BITS {
        return Err(Error::BudgetExceeded(format!(
            "{} vectors (2^{bits:.1}) exceed the 2^{BESICOVITCH_BUDGET_BITS} enumeration budget",
            (side as f64).powi(qs.len() as i32)
        )));
    }
    let roots: Vec<TwoTermSqrt> = qs.iter().map(|&q| TwoTermSqrt::new(q)).collect();
    let total = side.pow(qs.len() as u32);
    let h = h_max as i64;
    let mut coords = vec![-h; qs.len()];
    let mut best = f64::INFINITY;
    let mut witness = Vec::new();
    for _ in 0..total {
        if coords.iter().any(|&c| c != 0) {
            let (mut hi, mut lo) = (0.0, 0.0);
            for (c, r) in coords.iter().zip(&roots) {
                let (s, e) = two_sum(hi, *c as f64 * r.hi);
                hi = s;
                lo += e + *c as f64 * r.lo;
            }
            let d = dist_nearest_int((hi - hi.round()) + lo);
            if d < best {
                best = d;
                witness = coords.clone();
            }
        }
        for c in coords.iter_mut().rev() {
            if *c < h {
                *c += 1;
                break;
            }
            *c = -h;
        }
    }
    Ok(BesicovitchCertificate {
        qs: qs.to_vec(),
        h_max,
        min_dist: best,
        witness,
        vectors_checked: total - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn is_squarefree(n: u64) -> bool {
        (2..).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0)
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_up_to(4), vec![2, 3]);
        assert_eq!(squarefree_up_to(9), vec![2, 3, 5, 6, 7]);
        assert_eq!(squarefree_up_to(30).len(), 18);
        assert!(squarefree_up_to(1).is_empty());
        let want: Vec<u64> = (2..=10_000).filter(|&n| is_squarefree(n)).collect();
        assert_eq!(squarefree_up_to(10_000), want);
    }

    #[test]
    fn nearest_int_distance() {
        assert_eq!(dist_nearest_int(0.5), 0.5);
        assert_eq!(dist_nearest_int(3.25), 0.25);
        assert!((dist_nearest_int(-0.1) - 0.1).abs() < 1e-15);
    }

    /// `⌊U√q·2^64⌋` by integer square root, giving `⟨U√q⟩` to 64 bits.
    fn oracle_frac(u: u64, q: u64) -> f64 {
        let scaled = (BigUint::from(u) * BigUint::from(u) * BigUint::from(q)) << 128u32;
        let root = scaled.sqrt();
        let frac = root % (BigUint::from(1u8) << 64u32);
        let digits = frac.to_u64_digits();
        digits.first().copied().unwrap_or(0) as f64 / 2f64.powi(64)
    }

    #[test]
    fn fractional_parts_match_oracle() {
        for q in [2u64, 3, 5, 7, 13, 9973] {
            let r = TwoTermSqrt::new(q);
            for u in [1u64, 17, 123_456, 987_654_321, (1 << 40) + 7] {
                let (a, b) = r.frac_of_multiple(u);
                let got = a + b;
                let want = oracle_frac(u, q);
                let diff = (got - want).abs();
                assert!(diff.min(1.0 - diff) < 1e-12, "q={q} u={u}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn incremental_scan_does_not_drift() {
        let r = TwoTermSqrt::new(7);
        let mut state = r.frac_of_multiple(1);
        let step = r.step();
        for _ in 1..SCAN_CHUNK {
            let (a, e) = two_sum(state.0, step.0);
            let (a, b) = two_sum(a, state.1 + step.1 + e);
            state = wrap(a, b);
        }
        let direct = r.frac_of_multiple(SCAN_CHUNK);
        let diff = ((state.0 + state.1) - (direct.0 + direct.1)).abs();
        assert!(diff.min(1.0 - diff) < 1e-12, "{diff}");
    }

    fn oracle_search(qs: &[u64], thr: f64, u_max: u64) -> Option<u64> {
        (1..=u_max).find(|&u| {
            qs.iter().all(|&q| {
                let f = oracle_frac(u, q);
                dist_nearest_int(f - 0.5) <= thr
            })
        })
    }

    #[test]
    fn search_matches_extended_precision_scan() {
        let target = KroneckerTarget::new(2.0, 0.25).unwrap();
        assert_eq!(target.qs, vec![2, 3]);
        let got = kronecker_search(&target, 1, 1_000_000).unwrap();
        assert_eq!(got, oracle_search(&target.qs, 0.125, 1_000_000));
        let u = got.unwrap();
        assert!(target.distances(u).iter().all(|&d| d <= 0.125));

        let target = KroneckerTarget::new(3.0, 0.25).unwrap();
        let got = kronecker_search(&target, 1, 1_000_000).unwrap();
        assert_eq!(got, oracle_search(&target.qs, 0.25 / 3.0, 1_000_000));
    }

    #[test]
    fn search_edge_cases() {
        let vacuous = KroneckerTarget::new(2.0, 1.0).unwrap();
        assert_eq!(kronecker_search(&vacuous, 5, 10).unwrap(), Some(5));
        let empty = KroneckerTarget::with_qs(2.0, 0.1, vec![]).unwrap();
        assert_eq!(kronecker_search(&empty, 3, 10).unwrap(), Some(3));
        let t = KroneckerTarget::new(2.0, 0.25).unwrap();
        assert!(matches!(
            kronecker_search(&t, 1, 1 << 60),
            Err(Error::PrecisionCeilingExceeded(_))
        ));
        assert!(kronecker_search(&t, 10, 1).is_err());
        assert!(KroneckerTarget::with_qs(2.0, 0.1, vec![4]).is_err());
        assert!(KroneckerTarget::new(1.5, 0.1).is_err());
        // A range with no admissible U.
        let tight = KroneckerTarget::new(2.0, 0.001).unwrap();
        assert_eq!(kronecker_search(&tight, 1, 10).unwrap(), None);
    }

    #[test]
    fn exact_check_agrees_with_oracle() {
        for u in 1..2000u64 {
            for q in [2u64, 3, 5] {
                let d = dist_nearest_int(oracle_frac(u, q) - 0.5);
                for thr in [0.125, 0.0625, 0.3] {
                    if (d - thr).abs() > 1e-12 {
                        assert_eq!(exact_within(u, q, thr), d <= thr, "u={u} q={q} thr={thr}");
                    }
                }
            }
        }
        // ‖2·√4 − 1/2‖ = 1/2 exactly
        assert!(exact_within(2, 4, 0.5));
        assert!(!exact_within(2, 4, 0.4999));
    }

    /// Brute force over all boxes with edges on the coordinate grid, both
    /// closed and open, in any dimension.
    fn brute_discrepancy(points: &[Vec<f64>]) -> f64 {
        let s = points[0].len();
        let n = points.len() as f64;
        let grids: Vec<Vec<f64>> = (0..s)
            .map(|k| {
                let mut g: Vec<f64> = points.iter().map(|p| p[k]).chain([0.0, 1.0]).collect();
                g.sort_by(f64::total_cmp);
                g.dedup();
                g
            })
            .collect();
        let mut best: f64 = 0.0;
        let mut edges = vec![(0usize, 0usize); s];
        fn rec(
            k: usize,
            edges: &mut Vec<(usize, usize)>,
            grids: &[Vec<f64>],
            points: &[Vec<f64>],
            n: f64,
            best: &mut f64,
        ) {
            if k == grids.len() {
                let vol: f64 = edges.iter().enumerate().map(|(i, e)| grids[i][e.1] - grids[i][e.0]).product();
                let inside = |closed: bool| {
                    points
                        .iter()
                        .filter(|p| {
                            edges.iter().enumerate().all(|(i, e)| {
                                let (a, b) = (grids[i][e.0], grids[i][e.1]);
                                if closed {
                                    p[i] >= a && p[i] <= b
                                } else {
                                    p[i] > a && p[i] < b
                                }
                            })
                        })
                        .count() as f64
                };
                *best = best.max(inside(true) / n - vol).max(vol - inside(false) / n);
                return;
            }
            for a in 0..grids[k].len() {
                for b in a..grids[k].len() {
                    edges[k] = (a, b);
                    rec(k + 1, edges, grids, points, n, best);
                }
            }
        }
        rec(0, &mut edges, &grids, points, n, &mut best);
        best
    }

    #[test]
    fn discrepancy_examples() {
        for n in [1usize, 4, 10] {
            let pts: Vec<Vec<f64>> = (0..n).map(|k| vec![k as f64 / n as f64]).collect();
            let d = discrepancy_mod1(&pts).unwrap();
            assert!((d.value - 1.0 / n as f64).abs() < 1e-12 && d.exact);
        }
        let one = discrepancy_mod1(&[vec![0.3]]).unwrap();
        assert!(one.value >= 0.5);
        let same = discrepancy_mod1(&vec![vec![0.4, 0.7]; 5]).unwrap();
        assert!((same.value - 1.0).abs() < 1e-12);
        assert!(discrepancy_mod1(&[vec![0.1], vec![0.1, 0.2]]).is_err());
    }

    #[test]
    fn exact_sweeps_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 3, 7, 12] {
            for s in [1usize, 2] {
                let pts: Vec<Vec<f64>> = (0..n)
                    .map(|_| (0..s).map(|_| (rng.gen::<f64>() * 8.0).floor() / 8.0).collect())
                    .collect();
                let got = discrepancy_mod1(&pts).unwrap().value;
                let want = brute_discrepancy(&pts);
                assert!((got - want).abs() < 1e-12, "n={n} s={s}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn kronecker_sequence_discrepancy_decreases() {
        let r = TwoTermSqrt::new(2);
        let d: Vec<f64> = [100u64, 1000, 10_000]
            .iter()
            .map(|&n| {
                let pts: Vec<Vec<f64>> = (1..=n).map(|k| vec![r.frac_of_multiple(k).0]).collect();
                discrepancy_mod1(&pts).unwrap().value
            })
            .collect();
        assert!(d[0] > d[2] && d[1] > d[2], "{d:?}");
    }

    #[test]
    fn random_box_estimate_is_lower_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<Vec<f64>> = (0..6)
            .map(|_| (0..3).map(|_| (rng.gen::<f64>() * 4.0).floor() / 4.0).collect())
            .collect();
        let est = discrepancy_mod1(&pts).unwrap();
        assert!(!est.exact);
        assert!(est.value <= brute_discrepancy(&pts) + 1e-12);
        assert!(est.value > 0.0);
    }

    #[test]
    fn besicovitch_examples() {
        let c = besicovitch_check(&[2], 1).unwrap();
        assert!((c.min_dist - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        let c = besicovitch_check(&[2, 3], 3).unwrap();
        assert_eq!(c.vectors_checked, 48);
        let mut want = f64::INFINITY;
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                if (a, b) != (0, 0) {
                    want = want.min(dist_nearest_int(a as f64 * 2f64.sqrt() + b as f64 * 3f64.sqrt()));
                }
            }
        }
        assert!((c.min_dist - want).abs() < 1e-12);
        assert!(c.min_dist > 0.0);
        let w = &c.witness;
        let direct = dist_nearest_int(w[0] as f64 * 2f64.sqrt() + w[1] as f64 * 3f64.sqrt());
        assert!((direct - c.min_dist).abs() < 1e-12);

        let qs = squarefree_up_to(9);
        let mut prev = f64::INFINITY;
        for h in 1..=3 {
            let c = besicovitch_check(&qs, h).unwrap();
            assert!(c.min_dist > 1e-6 && c.min_dist <= prev);
            prev = c.min_dist;
        }
        assert!(matches!(besicovitch_check(&squarefree_up_to(100), 5), Err(Error::BudgetExceeded(_))));
    }
}
