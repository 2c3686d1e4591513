//! Hamming distance spectrum `ψ(d;n)`: the expected number of coset-mates at
//! distance `d` from a uniformly drawn word.
//!
//! The exhaustive oracle counts pairs inside every coset. The estimators
//! replace the count by functionals of the CCS (binomial, fast) or by sums
//! over flip patterns of the shift function (soft, hard).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;

use crate::bitseq::{self, BitBlock, CosetPartition};
use crate::budget::Budget;
use crate::ccs::{ccs_square_integral, SpectrumGrid};
use crate::enumerate::{map_combination_chunks, Combinations, ShiftScanner, UnitPredicate};
use crate::error::{invalid, Error, Result};
use crate::fmath::{self, binomial};
use crate::par;
use crate::params::CodeParams;

/// How an entry of an [`HdsTable`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Exhaustive,
    Binomial,
    Soft,
    Hard,
    Fast,
    Mixed,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exhaustive => "exhaustive",
            Method::Binomial => "binomial",
            Method::Soft => "soft",
            Method::Hard => "hard",
            Method::Fast => "fast",
            Method::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `ψ(d;n)` for some or all `d ∈ 0..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct HdsTable {
    n: u32,
    r: f64,
    method: Method,
    psi: Vec<Option<(f64, Method)>>,
    pair_counts: Option<Vec<u128>>,
    coset_pairs: Option<Vec<u128>>,
}

impl HdsTable {
    fn empty(p: &CodeParams, method: Method) -> Self {
        HdsTable {
            n: p.n(),
            r: p.r(),
            method,
            psi: vec![None; p.n() as usize + 1],
            pair_counts: None,
            coset_pairs: None,
        }
    }

    fn set(&mut self, d: u32, value: f64, method: Method) {
        self.psi[d as usize] = Some((value, method));
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn psi(&self, d: u32) -> Option<f64> {
        self.psi.get(d as usize).copied().flatten().map(|e| e.0)
    }

    /// Method behind entry `d` (differs from the table method for mixed tables).
    pub fn method_at(&self, d: u32) -> Option<Method> {
        self.psi.get(d as usize).copied().flatten().map(|e| e.1)
    }

    /// Present entries as `(d, ψ, method)`.
    pub fn rows(&self) -> impl Iterator<Item = (u32, f64, Method)> + '_ {
        self.psi
            .iter()
            .enumerate()
            .filter_map(|(d, e)| e.map(|(v, m)| (d as u32, v, m)))
    }

    /// Exhaustive tables only: `Σ_x k(x, d)`, so `ψ(d;n) = count / 2^n`.
    pub fn pair_count(&self, d: u32) -> Option<u128> {
        self.pair_counts.as_ref().map(|c| c[d as usize])
    }

    /// Sum of the present entries.
    pub fn total(&self) -> f64 {
        self.rows().map(|r| r.1).sum()
    }

    /// Copies the entries of `other` for `d` in `range` into this table.
    pub fn merge_from(&mut self, other: &HdsTable, range: RangeInclusive<u32>) {
        for d in range {
            if let Some(e) = other.psi.get(d as usize).copied().flatten() {
                self.psi[d as usize] = Some(e);
            }
        }
    }
}

fn check_range(p: &CodeParams, range: &RangeInclusive<u32>) -> Result<()> {
    if range.is_empty() || *range.end() > p.n() {
        return Err(invalid!(
            "distance range {}..={} is not inside 0..={}",
            range.start(),
            range.end(),
            p.n()
        ));
    }
    Ok(())
}

/// `k(x, d)`: coset-mates of `x` at distance exactly `d` (1 for `d = 0`).
pub fn codeword_hds(x: &BitBlock, d: u32, cp: &CosetPartition) -> Result<u64> {
    let m = cp.coset_of(x)?;
    if d > cp.params().n() {
        return Err(invalid!("distance {d} exceeds n"));
    }
    let xb = x.bits() as u32;
    Ok(cp
        .coset(m)
        .iter()
        .filter(|&&y| (xb ^ y).count_ones() == d)
        .count() as u64)
}

/// Exhaustive oracle with the default budget.
pub fn hds_exhaustive(p: &CodeParams) -> Result<HdsTable> {
    hds_exhaustive_with(p, &Budget::default())
}

pub fn hds_exhaustive_with(p: &CodeParams, budget: &Budget) -> Result<HdsTable> {
    let cp = bitseq::partition_cosets_with(p, budget)?;
    hds_exhaustive_from(&cp, budget)
}

/// Exhaustive oracle over an existing partition.
pub fn hds_exhaustive_from(cp: &CosetPartition, budget: &Budget) -> Result<HdsTable> {
    let p = cp.params();
    Budget::check("pair", cp.sum_of_squares(), budget.pairs)?;
    let n = p.n() as usize;
    let per_coset = par::map_indexed(cp.coset_count(), |m| {
        let words = cp.coset(m);
        let mut h = vec![0u64; n + 1];
        for (i, &a) in words.iter().enumerate() {
            for &b in &words[i + 1..] {
                h[(a ^ b).count_ones() as usize] += 2;
            }
        }
        h
    });
    let mut counts = vec![0u128; n + 1];
    counts[0] = 1u128 << n;
    let mut coset_pairs = Vec::with_capacity(per_coset.len());
    for h in &per_coset {
        let mut s = 0u128;
        for (d, &c) in h.iter().enumerate() {
            counts[d] += u128::from(c);
            s += u128::from(c);
        }
        coset_pairs.push(s);
    }
    let mut t = HdsTable::empty(p, Method::Exhaustive);
    let scale = fmath::exp2(-(n as f64));
    for (d, &c) in counts.iter().enumerate() {
        t.set(d as u32, c as f64 * scale, Method::Exhaustive);
    }
    t.pair_counts = Some(counts);
    t.coset_pairs = Some(coset_pairs);
    Ok(t)
}

/// Exact `ψ(d;n)` for one distance via flips: `2^{−n}·Σ_{j^d} Σ_x 1[m(x) = m(x ⊕ z_j)]`.
/// Needs only the coset-index table, so it reaches larger `n` than the
/// pairwise oracle when `d` is small. Returns `(ψ, count)`.
pub fn hds_exhaustive_at(p: &CodeParams, d: u32, budget: &Budget) -> Result<(f64, u128)> {
    let n = p.n();
    if d > n {
        return Err(invalid!("distance {d} exceeds n = {n}"));
    }
    Budget::check("shift", binomial(n, d) << n, budget.shifts)?;
    if d == 0 {
        return Ok((1.0, 1u128 << n));
    }
    let table = bitseq::coset_index_table(p, budget)?;
    let masks: Vec<u64> = Combinations::from_rank(d, 0, binomial(n, d)).collect();
    let total = masks.len() << (n - 1);
    let chunks = par::chunk_count(total as u128);
    let size = total.div_ceil(chunks);
    let words_half = 1usize << (n - 1);
    let parts = par::map_indexed(chunks, |c| {
        let (start, end) = (c * size, ((c + 1) * size).min(total));
        let mut hits = 0u64;
        let mut i = start;
        while i < end {
            let mi = i / words_half;
            let z = masks[mi];
            let top = 63 - z.leading_zeros();
            let stop = end.min((mi + 1) * words_half);
            for s in (i % words_half)..(stop - mi * words_half) {
                // Insert a zero at the top flip position so that every
                // unordered pair is visited once.
                let s = s as u64;
                let x = ((s >> top) << (top + 1)) | (s & ((1u64 << top) - 1));
                if table[x as usize] == table[(x ^ z) as usize] {
                    hits += 1;
                }
            }
            i = stop;
        }
        hits
    });
    let count: u128 = parts.iter().map(|&h| 2 * u128::from(h)).sum();
    Ok((count as f64 * fmath::exp2(-f64::from(n)), count))
}

/// Binomial approximation `ψ(d;n) ≈ binom(n,d)·2^{−nr}·∫f²`.
pub fn hds_binomial(p: &CodeParams, f: &SpectrumGrid) -> HdsTable {
    let sq = ccs_square_integral(f);
    let scale = fmath::exp2(-p.nr());
    let mut t = HdsTable::empty(p, Method::Binomial);
    for d in 0..=p.n() {
        t.set(d, binomial(p.n(), d) as f64 * scale * sq, Method::Binomial);
    }
    t
}

/// Raw pattern sums at one distance: `Σ (1 − |τ|)^+` and `#{|τ| < 1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftSums {
    pub soft: f64,
    pub active: u128,
}

/// Sums over all `(j^d, b^d)` in one pass.
pub fn shift_sums(p: &CodeParams, d: u32, budget: &Budget) -> Result<ShiftSums> {
    let n = p.n();
    if d > n {
        return Err(invalid!("distance {d} exceeds n = {n}"));
    }
    Budget::check("shift", binomial(n, d) << d, budget.shifts)?;
    if d == 0 {
        return Ok(ShiftSums { soft: 1.0, active: 1 });
    }
    let w = p.weights();
    let parts = map_combination_chunks(n, d, |combos| {
        let pred = UnitPredicate::new(p.exact(), n);
        let mut sc = ShiftScanner::new(&w);
        let mut soft = 0.0;
        let mut active = 0u64;
        let mut boundary: Vec<(u64, u64)> = Vec::new();
        for mask in combos {
            let mut local = 0.0;
            sc.scan(mask, true, |t, pat| {
                let a = t.abs();
                if a < 1.0 {
                    local += 1.0 - a;
                }
                if (a - 1.0).abs() < crate::params::INTEGER_GUARD {
                    boundary.push((mask, pat));
                } else if a < 1.0 {
                    active += 1;
                }
            });
            soft += local;
        }
        for &(mask, pat) in &boundary {
            let bits: Vec<u32> = (0..64).filter(|k| mask >> k & 1 == 1).collect();
            let t = pattern_tau(&w, &bits, pat);
            if pred.abs_lt_one(t, &bits, pat) {
                active += 1;
            }
        }
        (soft, active)
    });
    let mut soft = 0.0;
    let mut active = 0u128;
    for (s, a) in parts {
        soft += s;
        active += u128::from(a);
    }
    Ok(ShiftSums {
        soft: 2.0 * soft,
        active: 2 * active,
    })
}

fn pattern_tau(w: &[f64], bits: &[u32], pattern: u64) -> f64 {
    bits.iter()
        .enumerate()
        .map(|(t, &k)| if pattern >> t & 1 == 1 { -w[k as usize] } else { w[k as usize] })
        .sum()
}

fn alpha_factor(n: u32, d: u32) -> f64 {
    if d == n {
        2.0
    } else {
        1.0
    }
}

/// Soft and hard estimates together for every `d` in `range`.
pub fn hds_soft_hard(p: &CodeParams, range: RangeInclusive<u32>, budget: &Budget) -> Result<(HdsTable, HdsTable)> {
    check_range(p, &range)?;
    let mut soft = HdsTable::empty(p, Method::Soft);
    let mut hard = HdsTable::empty(p, Method::Hard);
    for d in range {
        let s = shift_sums(p, d, budget)?;
        let pre = alpha_factor(p.n(), d) * fmath::exp2(-f64::from(d));
        soft.set(d, pre * s.soft, Method::Soft);
        hard.set(d, pre * 0.5 * s.active as f64, Method::Hard);
    }
    Ok((soft, hard))
}

/// Soft approximation `2^{α−d}·Σ_{j^d} Σ_{b^d} (1 − |τ|)^+`, `α = 1[d = n]`.
pub fn hds_soft(p: &CodeParams, range: RangeInclusive<u32>, budget: &Budget) -> Result<HdsTable> {
    Ok(hds_soft_hard(p, range, budget)?.0)
}

/// Hard approximation `2^{α−d−1}·#{(j^d, b^d) : |τ| < 1}`, exact at `d = n`.
pub fn hds_hard(p: &CodeParams, range: RangeInclusive<u32>, budget: &Budget) -> Result<HdsTable> {
    Ok(hds_soft_hard(p, range, budget)?.1)
}

/// Default window of the fast approximation: `n − d ≤ ⌊n/4⌋`.
pub fn fast_window(n: u32) -> u32 {
    n / 4
}

/// Fast approximation `binom(n,d)·2^{α−nr−1}·f(1/2)` for `d` near `n`.
/// `max_gap` bounds `n − d` (default `⌊n/4⌋`).
pub fn hds_fast(p: &CodeParams, f: &SpectrumGrid, range: RangeInclusive<u32>, max_gap: Option<u32>) -> Result<HdsTable> {
    check_range(p, &range)?;
    let n = p.n();
    let gap = max_gap.unwrap_or_else(|| fast_window(n));
    if n - *range.start() > gap {
        return Err(invalid!(
            "fast approximation covers n - d ≤ {gap}; d = {} is too far from n = {n}",
            range.start()
        ));
    }
    let mid = f.eval(0.5);
    let mut t = HdsTable::empty(p, Method::Fast);
    for d in range {
        let v = binomial(n, d) as f64 * alpha_factor(n, d) * fmath::exp2(-p.nr() - 1.0) * mid;
        t.set(d, v, Method::Fast);
    }
    Ok(t)
}

/// Which estimator covers which distances in a mixed table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MixedPlan {
    /// Soft for `d ≤ soft_max`.
    pub soft_max: u32,
    /// Fast for `d ≥ fast_min`; binomial in between.
    pub fast_min: u32,
}

impl MixedPlan {
    pub fn for_n(n: u32) -> Self {
        MixedPlan {
            soft_max: 3.min(n),
            fast_min: n - fast_window(n),
        }
    }
}

/// Soft for small `d`, binomial in the middle, fast near `n`.
pub fn hds_mixed(p: &CodeParams, f: &SpectrumGrid, plan: MixedPlan, budget: &Budget) -> Result<HdsTable> {
    let n = p.n();
    if plan.fast_min > n || plan.soft_max > n {
        return Err(invalid!("mixed plan does not fit n = {n}"));
    }
    let mut t = HdsTable::empty(p, Method::Mixed);
    let binom = hds_binomial(p, f);
    t.merge_from(&binom, 0..=n);
    let soft_top = plan.soft_max.min(n);
    let soft = hds_soft(p, 0..=soft_top, budget)?;
    t.merge_from(&soft, 0..=soft_top);
    let fast_lo = plan.fast_min.max(soft_top + 1);
    if fast_lo <= n {
        let fast = hds_fast(p, f, fast_lo..=n, Some(n - fast_lo))?;
        t.merge_from(&fast, fast_lo..=n);
    }
    Ok(t)
}

/// Outcome of [`hds_identities_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    /// `Σ_d ψ(d;n)`.
    pub sum_psi: f64,
    /// `2^{n(1−r)}`.
    pub lower_bound: f64,
    /// `Σψ / 2^{n(1−r)}`, which tends to `∫f²` as `n` grows.
    pub ratio: f64,
    /// `∫f²` of the supplied spectrum, if any (informational).
    pub square_integral: Option<f64>,
    /// True when `Σψ` strictly exceeds the bound (unequal coset sizes).
    pub strict: bool,
    pub cosets_checked: usize,
}

/// Verifies the counting and convexity identities of an exhaustive table.
pub fn hds_identities_check(t: &HdsTable, cp: &CosetPartition, f: Option<&SpectrumGrid>) -> Result<IdentityReport> {
    if t.method != Method::Exhaustive {
        return Err(invalid!("identity checks need an exhaustive table"));
    }
    let p = cp.params();
    if t.n != p.n() || t.r != p.r() {
        return Err(invalid!("table and partition describe different codes"));
    }
    let counts = t.pair_counts.as_ref().expect("exhaustive tables carry counts");
    let per_coset = t.coset_pairs.as_ref().expect("exhaustive tables carry coset totals");
    if per_coset.len() != cp.coset_count() {
        return Err(invalid!("table and partition have different coset counts"));
    }
    for (m, &pairs) in per_coset.iter().enumerate() {
        let s = cp.size(m) as u128;
        if pairs != s * s - s {
            return Err(Error::IdentityViolation(format!(
                "coset {m}: {pairs} ordered pairs at positive distance, expected {}",
                s * s - s
            )));
        }
    }
    let total: u128 = counts.iter().sum();
    if total != cp.sum_of_squares() {
        return Err(Error::IdentityViolation(format!(
            "Σ_d Σ_x k(x,d) = {total} differs from Σ|C_m|² = {}",
            cp.sum_of_squares()
        )));
    }
    let n = p.n();
    let nr = p.nr_int()?;
    let sum_psi = t.total();
    let lower_bound = fmath::exp2(f64::from(n - nr));
    // Σψ·2^n = Σ|C|² ≥ (2^n)²/2^{nr} by Cauchy-Schwarz, checked in integers.
    let lhs = total << nr;
    let rhs = 1u128 << (2 * n);
    if lhs < rhs {
        return Err(Error::IdentityViolation(format!(
            "Σψ = {sum_psi} is below 2^(n(1-r)) = {lower_bound}"
        )));
    }
    Ok(IdentityReport {
        sum_psi,
        lower_bound,
        ratio: sum_psi / lower_bound,
        square_integral: f.map(ccs_square_integral),
        strict: lhs > rhs,
        cosets_checked: per_coset.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names() {
        assert_eq!(Method::Exhaustive.to_string(), "exhaustive");
        assert_eq!(Method::Mixed.name(), "mixed");
    }

    #[test]
    fn flip_route_matches_pairwise() {
        for n in [4u32, 8, 12] {
            let p = CodeParams::new(n, 0.5).unwrap();
            let t = hds_exhaustive(&p).unwrap();
            for d in 0..=n {
                let (psi, count) = hds_exhaustive_at(&p, d, &Budget::default()).unwrap();
                assert_eq!(Some(count), t.pair_count(d), "n={n} d={d}");
                assert_eq!(Some(psi), t.psi(d));
            }
        }
    }
}
