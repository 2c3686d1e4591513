//! Shared enumeration machinery: d-subsets of `{0, …, n−1}` as bit masks in
//! colex order, and a shift scanner producing τ for every flip pattern of
//! one index set.

use alloc::vec;
use alloc::vec::Vec;
use core::cell::OnceCell;

use crate::algebra::{AlgebraicRate, Poly};
use crate::fmath::binomial;
use crate::par;
use crate::params::INTEGER_GUARD;

/// Masks of d-subsets in increasing numeric (colex) order.
#[derive(Clone, Debug)]
pub struct Combinations {
    cur: u64,
    remaining: u128,
}

impl Combinations {
    /// Starts at the combination of colex rank `rank` and yields `count`.
    pub fn from_rank(d: u32, rank: u128, count: u128) -> Self {
        Combinations {
            cur: unrank_colex(d, rank),
            remaining: count,
        }
    }
}

impl Iterator for Combinations {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.cur;
        self.remaining -= 1;
        if self.remaining > 0 {
            self.cur = next_colex(out);
        }
        Some(out)
    }
}

/// Gosper's successor. Only valid when a successor exists.
#[inline]
fn next_colex(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x.wrapping_add(c);
    (((r ^ x) >> 2) / c) | r
}

fn unrank_colex(d: u32, mut rank: u128) -> u64 {
    let mut mask = 0u64;
    for i in (1..=d).rev() {
        let mut c = i - 1;
        while binomial(c + 1, i) <= rank {
            c += 1;
        }
        rank -= binomial(c, i);
        mask |= 1u64 << c;
    }
    mask
}

/// Splits all d-subsets of `n` positions into ordered chunks and maps `f`
/// over them in parallel.
pub fn map_combination_chunks<T, F>(n: u32, d: u32, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Combinations) -> T + Sync + Send,
{
    let total = binomial(n, d);
    let chunks = par::chunk_count(total);
    let size = total.div_ceil(chunks as u128);
    par::map_indexed(chunks, |c| {
        let start = c as u128 * size;
        let end = (start + size).min(total);
        f(Combinations::from_rank(d, start, end.saturating_sub(start)))
    })
}

const LOW_BITS: usize = 12;

/// Produces τ for every flip pattern of an index set from two partial-sum
/// tables, so each value is one addition away from exact sums of weights.
#[derive(Debug)]
pub struct ShiftScanner<'a> {
    w: &'a [f64],
    lo: Vec<f64>,
    hi: Vec<f64>,
    pos: Vec<u32>,
}

impl<'a> ShiftScanner<'a> {
    /// `w[k]` is the weight of word bit `k`.
    pub fn new(w: &'a [f64]) -> Self {
        ShiftScanner {
            w,
            lo: vec![0.0; 1],
            hi: vec![0.0; 1],
            pos: Vec::with_capacity(64),
        }
    }

    fn fill(table: &mut Vec<f64>, w: &[f64], pos: &[u32]) {
        table.clear();
        table.resize(1 << pos.len(), 0.0);
        for (k, &p) in pos.iter().enumerate() {
            let delta = -2.0 * w[p as usize];
            let half = 1 << k;
            for s in 0..half {
                table[half + s] = table[s] + delta;
            }
        }
    }

    /// Calls `visit(τ, pattern)` for each flip pattern of `mask`. Pattern bit
    /// `t` is the value at the `t`-th smallest position. With `half`, only
    /// patterns whose top bit is zero are produced (the others are their
    /// negations).
    #[inline]
    pub fn scan<F: FnMut(f64, u64)>(&mut self, mask: u64, half: bool, mut visit: F) {
        self.pos.clear();
        let mut m = mask;
        let mut base = 0.0;
        while m != 0 {
            let p = m.trailing_zeros();
            self.pos.push(p);
            base += self.w[p as usize];
            m &= m - 1;
        }
        let d = self.pos.len();
        let free = if half && d > 0 { d - 1 } else { d };
        let lo_n = free.min(LOW_BITS);
        Self::fill(&mut self.lo, self.w, &self.pos[..lo_n]);
        Self::fill(&mut self.hi, self.w, &self.pos[lo_n..free]);
        for (h, &hv) in self.hi.iter().enumerate() {
            let bh = base + hv;
            let hbits = (h as u64) << lo_n;
            for (t, &lv) in self.lo.iter().enumerate() {
                visit(bh + lv, hbits | t as u64);
            }
        }
    }
}

/// Decides `|τ| < 1`, re-checking exactly near the boundary when an exact
/// rate is available. Without one, values within the guard of 1 count as
/// boundary values and are excluded. Reduced powers of θ are only built on
/// the first boundary hit.
#[derive(Debug)]
pub struct UnitPredicate<'a> {
    exact: Option<&'a AlgebraicRate>,
    n: u32,
    powers: OnceCell<Vec<Poly>>,
}

impl<'a> UnitPredicate<'a> {
    pub fn new(exact: Option<&'a AlgebraicRate>, n: u32) -> Self {
        UnitPredicate {
            exact,
            n,
            powers: OnceCell::new(),
        }
    }

    /// `positions` are bit indices; `pattern` bit `t` belongs to `positions[t]`.
    #[inline]
    pub fn abs_lt_one(&self, tau: f64, positions: &[u32], pattern: u64) -> bool {
        let gap = tau.abs() - 1.0;
        if gap.abs() >= INTEGER_GUARD {
            return gap < 0.0;
        }
        match self.exact {
            None => false,
            Some(rate) => self.exact_abs_lt_one(rate, positions, pattern),
        }
    }

    #[cold]
    fn exact_abs_lt_one(&self, rate: &AlgebraicRate, positions: &[u32], pattern: u64) -> bool {
        let powers = self.powers.get_or_init(|| {
            let mut out = Vec::with_capacity(self.n as usize + 2);
            let mut acc = Poly::one();
            for _ in 0..=self.n + 1 {
                out.push(acc.clone());
                acc = rate.reduce(&(&acc * &Poly::x()));
            }
            out
        });
        // τ = (x − 1)·S / x with S = Σ ±x^{position}, so |τ| < 1 ⇔ −x < (x − 1)S < x.
        let mut s = Poly::zero();
        for (t, &p) in positions.iter().enumerate() {
            let term = &powers[p as usize + 1];
            s = if pattern >> t & 1 == 0 { s + term } else { s - term };
        }
        let scaled = rate.reduce(&(&(Poly::x() - Poly::one()) * &s));
        let x = &powers[1];
        rate.sign_at_root(&(&scaled - x)).is_lt() && rate.sign_at_root(&(&scaled + x)).is_gt()
    }
}
