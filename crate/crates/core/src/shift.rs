//! Shift function τ, coexisting intervals, active sets and the distribution
//! of the normalised shift `W = 2^{−nr}·τ`.
//!
//! Positions follow the ℓ-function weights: position `k` contributes
//! `(1 − 2^{−r})·2^{kr}`, and the word bit at position `k` is bit `k − 1`.
//! Flipping the bits of `x` on `j^d` moves ℓ by `τ(j^d, x_{j^d})`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bitseq::{self, check_len, BitBlock};
use crate::budget::Budget;
use crate::ccs::SpectrumGrid;
use crate::enumerate::{map_combination_chunks, ShiftScanner, UnitPredicate};
use crate::error::{invalid, Error, Result};
use crate::fmath::{self, binomial};
use crate::params::{CodeParams, INTEGER_GUARD};

/// Strictly increasing positions `j_1 < … < j_d`, each at least 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet {
    positions: Vec<u32>,
}

impl IndexSet {
    pub fn new(positions: Vec<u32>) -> Result<Self> {
        if positions.first().is_some_and(|&p| p == 0) {
            return Err(invalid!("positions start at 1"));
        }
        if positions.last().is_some_and(|&p| p > 64) {
            return Err(invalid!("positions end at 64"));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid!("positions must be strictly increasing"));
        }
        Ok(IndexSet { positions })
    }

    /// Positions `1..=n`.
    pub fn full(n: u32) -> Self {
        IndexSet {
            positions: (1..=n).collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Set whose position `k` is present iff bit `k − 1` of `mask` is set.
    pub fn from_mask(mask: u64) -> Self {
        IndexSet {
            positions: (0..64).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect(),
        }
    }

    /// `{1, …, n} \ {n − k + 1}`: all positions but the `k`-th from the top.
    pub fn gap_at(n: u32, k: u32) -> Result<Self> {
        if !(1..=n).contains(&k) {
            return Err(invalid!("gap index {k} outside [1, {n}]"));
        }
        let hole = n - k + 1;
        Ok(IndexSet {
            positions: (1..=n).filter(|&p| p != hole).collect(),
        })
    }

    pub fn mask(&self) -> u64 {
        self.positions.iter().fold(0, |acc, &p| acc | 1u64 << (p - 1))
    }

    pub fn positions(&self) -> &[u32] {
        &self.positions
    }

    pub fn d(&self) -> u32 {
        self.positions.len() as u32
    }

    pub fn max_position(&self) -> u32 {
        self.positions.last().copied().unwrap_or(0)
    }

    fn check_within(&self, n: u32) -> Result<()> {
        if self.max_position() > n {
            return Err(invalid!("position {} exceeds n = {n}", self.max_position()));
        }
        Ok(())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (t, p) in self.positions.iter().enumerate() {
            if t > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexSet{self}")
    }
}

fn check_pattern(j: &IndexSet, b: &BitBlock, p: &CodeParams) -> Result<()> {
    check_len(j.d(), b.len())?;
    j.check_within(p.n())
}

fn tau_from_mask(w: &[f64], j: &IndexSet, pattern: u64) -> f64 {
    j.positions()
        .iter()
        .enumerate()
        .map(|(t, &k)| {
            let wk = w[k as usize - 1];
            if pattern >> t & 1 == 1 {
                -wk
            } else {
                wk
            }
        })
        .sum()
}

/// `τ(j^d, b^d) = (1 − 2^{−r})·Σ (1 − 2b_{d'})·2^{r·j_{d'}}`, where symbol
/// `d'` of `b` pairs with position `j_{d'}`.
pub fn tau(j: &IndexSet, b: &BitBlock, p: &CodeParams) -> Result<f64> {
    check_pattern(j, b, p)?;
    Ok(tau_from_mask(&p.weights(), j, b.pattern_mask()))
}

/// `|τ| < 1`, decided exactly near the boundary when the rate is exact.
pub fn is_active(j: &IndexSet, b: &BitBlock, p: &CodeParams) -> Result<bool> {
    let t = tau(j, b, p)?;
    let pred = UnitPredicate::new(p.exact(), p.n());
    let bits: Vec<u32> = j.positions().iter().map(|k| k - 1).collect();
    Ok(pred.abs_lt_one(t, &bits, b.pattern_mask()))
}

/// Sub-interval of `(m − 1, m]` where ℓ must lie for a word and its flipped
/// partner to share coset `m`. Empty intervals have `lo = hi = m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoexInterval {
    pub m: u64,
    pub lo: f64,
    pub hi: f64,
    pub empty: bool,
}

impl CoexInterval {
    pub fn length(&self) -> f64 {
        if self.empty {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    /// Membership in `(lo, hi]`, with the integer guard applied at both ends.
    pub fn contains(&self, ell: f64) -> bool {
        let g = |v: f64| INTEGER_GUARD * v.abs().max(1.0);
        !self.empty && ell > self.lo + g(self.lo) && ell <= self.hi + g(self.hi)
    }
}

/// The three-branch coexisting interval for coset `m ≥ 1`.
pub fn coexisting_interval(m: u64, j: &IndexSet, b: &BitBlock, p: &CodeParams) -> Result<CoexInterval> {
    let count = p.coset_count()?;
    if m == 0 || m >= count {
        return Err(Error::IndexOutOfRange {
            index: i128::from(m),
            lo: 1,
            hi: i128::from(count),
        });
    }
    let t = tau(j, b, p)?;
    let mf = m as f64;
    if !is_active(j, b, p)? {
        return Ok(CoexInterval {
            m,
            lo: mf,
            hi: mf,
            empty: true,
        });
    }
    let (lo, hi) = if t >= 0.0 {
        (mf - 1.0, mf - t)
    } else {
        (mf - 1.0 - t, mf)
    };
    Ok(CoexInterval {
        m,
        lo,
        hi,
        empty: false,
    })
}

/// Whether `x` and `y` share a coset. The answer from coset indices is
/// cross-checked against the coexisting-interval criterion.
pub fn coexists(x: &BitBlock, y: &BitBlock, p: &CodeParams) -> Result<bool> {
    check_len(x.len(), y.len())?;
    check_len(p.n(), x.len())?;
    if x == y {
        return Err(invalid!("coexistence is defined for distinct words"));
    }
    let ex = bitseq::encode(x, p)?;
    let ey = bitseq::encode(y, p)?;
    let by_index = ex.m == ey.m;
    let by_interval = if ex.m == 0 {
        false
    } else {
        let j = IndexSet::from_mask(x.bits() ^ y.bits());
        let b = x.restrict(&j)?;
        coexisting_interval(ex.m, &j, &b, p)?.contains(ex.ell)
    };
    if by_index != by_interval {
        return Err(Error::Inconsistent(format!(
            "coset indices and coexisting interval disagree for {x} and {y}"
        )));
    }
    Ok(by_index)
}

/// Size of the active set `{b : |τ(j, b)| < 1}`.
pub fn active_set_size(j: &IndexSet, p: &CodeParams) -> Result<u64> {
    j.check_within(p.n())?;
    if j.d() > 26 {
        return Err(Error::TooLarge {
            what: "active-set dimension",
            required: u128::from(j.d()),
            budget: 26,
        });
    }
    let w = p.weights();
    let pred = UnitPredicate::new(p.exact(), p.n());
    let mut sc = ShiftScanner::new(&w);
    let mut count = 0u64;
    let bits: Vec<u32> = j.positions().iter().map(|k| k - 1).collect();
    sc.scan(j.mask(), false, |t, pat| {
        if pred.abs_lt_one(t, &bits, pat) {
            count += 1;
        }
    });
    Ok(count)
}

/// Quantised shift `t = sgn(τ)·⌈|τ|⌉` with the integer guard.
pub fn quantize_shift(tau: f64) -> i64 {
    let q = fmath::guarded_ceil(tau.abs(), INTEGER_GUARD) as i64;
    if tau < 0.0 {
        -q
    } else {
        q
    }
}

/// Which index sets a census covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CensusScope {
    One(IndexSet),
    All,
}

impl fmt::Display for CensusScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CensusScope::One(j) => write!(f, "j={j}"),
            CensusScope::All => f.write_str("all"),
        }
    }
}

/// Counts `c(x)` of quantised shifts `x ∈ (−2^{nr}, 2^{nr})`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftHistogram {
    pub d: u32,
    pub scope: CensusScope,
    n: u32,
    nr: u32,
    counts: Vec<u64>,
}

impl ShiftHistogram {
    fn offset(&self) -> i64 {
        (1i64 << self.nr) - 1
    }

    /// `2^{nr}`.
    pub fn scale(&self) -> u64 {
        1u64 << self.nr
    }

    /// `c(x)`, zero outside the range.
    pub fn count(&self, x: i64) -> u64 {
        let i = x + self.offset();
        if i < 0 || i as usize >= self.counts.len() {
            0
        } else {
            self.counts[i as usize]
        }
    }

    /// `(x, c(x))` for all `x` in range.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        let off = self.offset();
        self.counts.iter().enumerate().map(move |(i, &c)| (i as i64 - off, c))
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| u128::from(c)).sum()
    }

    /// Number of `(j, b)` pairs the census should contain.
    pub fn expected_total(&self) -> u128 {
        match self.scope {
            CensusScope::One(_) => 1u128 << self.d,
            CensusScope::All => binomial(self.n, self.d) << self.d,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.counts.len();
        (0..n).all(|i| self.counts[i] == self.counts[n - 1 - i])
    }

    /// Density estimate `f̂_W(x·2^{−nr}) = c(x)·2^{nr} / total`.
    pub fn density_at(&self, x: i64) -> f64 {
        self.count(x) as f64 * self.scale() as f64 / self.total() as f64
    }

    /// Density over `bins` equal bins of `(−1, 1)`. A positive `x` stands for
    /// `w ∈ ((x−1)2^{−nr}, x·2^{−nr}]` and a negative `x` for
    /// `w ∈ [x·2^{−nr}, (x+1)2^{−nr})`; each count is spread over its unit
    /// cell in proportion to overlap. Returns `(bin centre, density)`.
    pub fn rebin(&self, bins: usize) -> Vec<(f64, f64)> {
        let scale = self.scale() as f64;
        let width = 2.0 / bins as f64;
        let total = self.total() as f64;
        let mut mass = vec![0.0; bins];
        for (x, c) in self.iter() {
            if c == 0 {
                continue;
            }
            let (a, b) = if x > 0 {
                ((x - 1) as f64 / scale, x as f64 / scale)
            } else if x < 0 {
                (x as f64 / scale, (x + 1) as f64 / scale)
            } else {
                (-0.5 / scale, 0.5 / scale)
            };
            spread(&mut mass, a, b, c as f64 / total, width);
        }
        mass.iter()
            .enumerate()
            .map(|(i, &m)| (-1.0 + (i as f64 + 0.5) * width, m / width))
            .collect()
    }
}

fn spread(mass: &mut [f64], a: f64, b: f64, weight: f64, width: f64) {
    let bins = mass.len();
    let first = (fmath::floor((a + 1.0) / width).max(0.0) as usize).min(bins - 1);
    let last = ((fmath::ceil((b + 1.0) / width) as usize).max(first + 1)).min(bins);
    let span = b - a;
    for (i, slot) in mass.iter_mut().enumerate().take(last).skip(first) {
        let lo = -1.0 + i as f64 * width;
        let overlap = (b.min(lo + width) - a.max(lo)).max(0.0);
        *slot += weight * overlap / span;
    }
}

/// Census of quantised shifts at distance `d`.
pub fn shift_census(d: u32, p: &CodeParams, scope: &CensusScope) -> Result<ShiftHistogram> {
    shift_census_with(d, p, scope, &Budget::default())
}

pub fn shift_census_with(d: u32, p: &CodeParams, scope: &CensusScope, budget: &Budget) -> Result<ShiftHistogram> {
    let n = p.n();
    let nr = p.nr_int()?;
    if nr > 30 {
        return Err(invalid!("census supports n*r ≤ 30"));
    }
    if d > n {
        return Err(invalid!("distance {d} exceeds n = {n}"));
    }
    let len = (1usize << (nr + 1)) - 1;
    let offset = (1i64 << nr) - 1;
    let w = p.weights();
    let tally = |h: &mut Vec<u64>, sc: &mut ShiftScanner<'_>, mask: u64| {
        if mask == 0 {
            h[offset as usize] += 1;
            return;
        }
        sc.scan(mask, true, |t, _| {
            let q = quantize_shift(t).clamp(-offset, offset);
            h[(q + offset) as usize] += 1;
            h[(offset - q) as usize] += 1;
        });
    };
    let counts = match scope {
        CensusScope::One(j) => {
            j.check_within(n)?;
            if j.d() != d {
                return Err(Error::LengthMismatch {
                    expected: d as usize,
                    found: j.d() as usize,
                });
            }
            Budget::check("shift", 1u128 << d, budget.shifts)?;
            let mut h = vec![0u64; len];
            tally(&mut h, &mut ShiftScanner::new(&w), j.mask());
            h
        }
        CensusScope::All => {
            Budget::check("shift", binomial(n, d) << d, budget.shifts)?;
            let parts = map_combination_chunks(n, d, |combos| {
                let mut h = vec![0u64; len];
                let mut sc = ShiftScanner::new(&w);
                for mask in combos {
                    tally(&mut h, &mut sc, mask);
                }
                h
            });
            crate::ccs::merge_histograms(len, parts)
        }
    };
    Ok(ShiftHistogram {
        d,
        scope: scope.clone(),
        n,
        nr,
        counts,
    })
}

/// Which asymptotic density of `W` to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WProfile {
    /// `d = n`.
    Full,
    /// `d = n − 1` with the `k`-th position from the top left out.
    GapAt(u32),
    /// Distance `d` close to `n` (`n − d ≤ n/4`), averaged over index sets.
    Generic { d: u32 },
}

impl fmt::Display for WProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WProfile::Full => f.write_str("full"),
            WProfile::GapAt(k) => write!(f, "gap-{k}"),
            WProfile::Generic { d } => write!(f, "d-{d}"),
        }
    }
}

/// Asymptotic density of `W` on `(−1, 1)` derived from the CCS.
#[derive(Clone, Debug)]
pub struct WDensity {
    f: SpectrumGrid,
    profile: WProfile,
    theta: f64,
    offsets: Vec<f64>,
}

impl WDensity {
    pub fn profile(&self) -> WProfile {
        self.profile
    }

    pub fn eval(&self, w: f64) -> f64 {
        if !(-1.0 < w && w < 1.0) {
            return 0.0;
        }
        match self.profile {
            WProfile::Full | WProfile::Generic { .. } => self.f.eval((1.0 - w) / 2.0) / 2.0,
            WProfile::GapAt(k) => {
                let kr = fmath::powi(self.theta, k as i32);
                let c = 1.0 - (self.theta - 1.0) / kr;
                let pre = fmath::exp2(-(f64::from(k)) * (1.0 - fmath::log2(self.theta)));
                pre * self
                    .offsets
                    .iter()
                    .map(|l| self.f.eval(((c - w) / 2.0 - l) * kr))
                    .sum::<f64>()
            }
        }
    }

    /// `(w, density)` at the centres of `bins` equal bins of `(−1, 1)`.
    pub fn sample(&self, bins: usize) -> Vec<(f64, f64)> {
        let width = 2.0 / bins as f64;
        (0..bins)
            .map(|i| {
                let w = -1.0 + (i as f64 + 0.5) * width;
                (w, self.eval(w))
            })
            .collect()
    }
}

/// Largest gap index whose `2^{k−1}`-term mixture is evaluated.
const MAX_GAP_TERMS_LOG2: u32 = 20;

/// Theoretical density of the normalised shift for a profile near `d = n`.
pub fn theoretical_w_pdf(profile: WProfile, f: &SpectrumGrid, p: &CodeParams) -> Result<WDensity> {
    let n = p.n();
    let theta = p.x();
    let offsets = match profile {
        WProfile::Full => Vec::new(),
        WProfile::GapAt(k) => {
            if !(1..=n).contains(&k) {
                return Err(Error::UnsupportedProfile(format!("gap index {k} outside [1, {n}]")));
            }
            if k - 1 > MAX_GAP_TERMS_LOG2 {
                return Err(Error::UnsupportedProfile(format!(
                    "gap index {k} needs 2^{} mixture terms",
                    k - 1
                )));
            }
            prefix_lower_ends(k - 1, theta)
        }
        WProfile::Generic { d } => {
            if d > n || 4 * (n - d) > n {
                return Err(Error::UnsupportedProfile(format!(
                    "d = {d} is not close to n = {n} (need n - d ≤ n/4)"
                )));
            }
            Vec::new()
        }
    };
    Ok(WDensity {
        f: f.clone(),
        profile,
        theta,
        offsets,
    })
}

/// `l(x^{k}) = (2^r − 1)·Σ x_i 2^{−ir}` for every `x^k`.
fn prefix_lower_ends(k: u32, theta: f64) -> Vec<f64> {
    let mut out = vec![0.0];
    for i in 1..=k {
        let wi = (theta - 1.0) / fmath::powi(theta, i as i32);
        let cur = out.len();
        for s in 0..cur {
            out.push(out[s] + wi);
        }
    }
    out
}
