//! Encoder of the tailless overlapped arithmetic code.
//!
//! A source word `x^n = (x_1, …, x_n)` is held in a `u64` whose numeric value
//! equals the word read as a binary numeral, so `"0001"` is `1` and symbol
//! `x_i` sits at bit `n − i`. Bit `k − 1` therefore carries the weight
//! `(1 − 2^{−r})·2^{kr}` in the ℓ-function, which is also the convention
//! used for the positions of an [`IndexSet`](crate::shift::IndexSet).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::budget::Budget;
use crate::error::{invalid, Error, Result};
use crate::fmath;
use crate::params::{CodeParams, INTEGER_GUARD};
use crate::par;
use crate::shift::IndexSet;

/// A binary word of length at most 64.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitBlock {
    bits: u64,
    len: u32,
}

impl BitBlock {
    /// Word whose binary numeral is `bits`, with `len` symbols.
    pub fn new(bits: u64, len: u32) -> Result<Self> {
        if len > 64 {
            return Err(invalid!("word length {len} exceeds 64"));
        }
        if len < 64 && bits >> len != 0 {
            return Err(invalid!("value {bits:#x} does not fit in {len} bits"));
        }
        Ok(BitBlock { bits, len })
    }

    pub fn zeros(len: u32) -> Self {
        BitBlock { bits: 0, len }
    }

    pub fn ones(len: u32) -> Self {
        BitBlock {
            bits: low_mask(len),
            len,
        }
    }

    /// Builds a word from symbols `x_1, …, x_n` in order.
    pub fn from_symbols(symbols: &[bool]) -> Result<Self> {
        let len = u32::try_from(symbols.len()).map_err(|_| invalid!("word too long"))?;
        let bits = symbols.iter().fold(0u64, |acc, &s| (acc << 1) | u64::from(s));
        Self::new(bits, len)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Symbol `x_i` for `i ∈ 1..=len`.
    pub fn symbol(&self, i: u32) -> bool {
        assert!((1..=self.len).contains(&i), "symbol index out of range");
        self.bits >> (self.len - i) & 1 == 1
    }

    /// Value at position `k ∈ 1..=len` (bit `k − 1`, i.e. symbol `len + 1 − k`).
    pub fn at_position(&self, k: u32) -> bool {
        assert!((1..=self.len).contains(&k), "position out of range");
        self.bits >> (k - 1) & 1 == 1
    }

    pub fn complement(&self) -> Self {
        BitBlock {
            bits: !self.bits & low_mask(self.len),
            len: self.len,
        }
    }

    pub fn xor(&self, other: &BitBlock) -> Result<Self> {
        check_len(self.len, other.len)?;
        Ok(BitBlock {
            bits: self.bits ^ other.bits,
            len: self.len,
        })
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Restriction `x_{j^d}`: symbol `d'` of the result is the value at
    /// position `j_{d'}`.
    pub fn restrict(&self, j: &IndexSet) -> Result<Self> {
        if j.max_position() > self.len {
            return Err(invalid!(
                "index set reaches position {} of a length-{} word",
                j.max_position(),
                self.len
            ));
        }
        let syms: Vec<bool> = j.positions().iter().map(|&k| self.at_position(k)).collect();
        Self::from_symbols(&syms)
    }

    /// Pattern mask with bit `t` equal to symbol `t + 1`.
    pub(crate) fn pattern_mask(&self) -> u64 {
        (0..self.len).fold(0u64, |acc, t| {
            acc | (u64::from(self.symbol(t + 1)) << t)
        })
    }
}

pub(crate) fn low_mask(len: u32) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

pub(crate) fn check_len(expected: u32, found: u32) -> Result<()> {
    if expected != found {
        return Err(Error::LengthMismatch {
            expected: expected as usize,
            found: found as usize,
        });
    }
    Ok(())
}

impl fmt::Display for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len {
            f.write_str(if self.symbol(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitBlock({self})")
    }
}

impl FromStr for BitBlock {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let syms = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(alloc::format!("invalid symbol {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_symbols(&syms)
    }
}

/// Output of the encoder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EncodingResult {
    /// Lower end of the final interval, `2^{−nr}·ℓ`.
    pub l: f64,
    /// Enlarged lower end `ℓ(x^n)`.
    pub ell: f64,
    /// Coset index `m(x^n) = ⌈ℓ⌉`.
    pub m: u64,
}

/// Coset index from ℓ, with the integer guard applied before the ceiling.
pub fn coset_index(ell: f64, coset_count: u64) -> u64 {
    let m = fmath::guarded_ceil(ell, INTEGER_GUARD).max(0.0) as u64;
    m.min(coset_count - 1)
}

/// Encodes `x` under `p`.
pub fn encode(x: &BitBlock, p: &CodeParams) -> Result<EncodingResult> {
    check_len(p.n(), x.len())?;
    let nr = p.nr_int()?;
    let theta = p.x();
    let step = theta - 1.0;
    let mut ell = 0.0;
    for i in 1..=x.len() {
        ell = ell * theta + if x.symbol(i) { step } else { 0.0 };
    }
    let scale = fmath::exp2(f64::from(nr));
    Ok(EncodingResult {
        l: ell / scale,
        ell,
        m: coset_index(ell, p.coset_count()?),
    })
}

/// ℓ evaluator for whole words through two precomputed half tables.
#[derive(Clone, Debug)]
pub(crate) struct EllTable {
    lo: Vec<f64>,
    hi: Vec<f64>,
    lo_bits: u32,
}

impl EllTable {
    pub fn new(p: &CodeParams) -> Self {
        let w = p.weights();
        let n = p.n();
        let lo_bits = n.min(n / 2 + 1).min(16);
        let build = |ws: &[f64]| {
            let mut t = vec![0.0; 1 << ws.len()];
            for (k, &wk) in ws.iter().enumerate() {
                let half = 1 << k;
                for s in 0..half {
                    t[half + s] = t[s] + wk;
                }
            }
            t
        };
        EllTable {
            lo: build(&w[..lo_bits as usize]),
            hi: build(&w[lo_bits as usize..]),
            lo_bits,
        }
    }

    #[inline]
    pub fn ell(&self, word: u64) -> f64 {
        self.hi[(word >> self.lo_bits) as usize] + self.lo[(word & low_mask(self.lo_bits)) as usize]
    }
}

fn enumeration_guard(p: &CodeParams, budget: &Budget, max_n: u32) -> Result<()> {
    Budget::check("word", 1u128 << p.n(), budget.words)?;
    if p.n() > max_n {
        return Err(Error::TooLarge {
            what: "block length",
            required: u128::from(p.n()),
            budget: u128::from(max_n),
        });
    }
    Ok(())
}

/// Runs `f` on consecutive word ranges in parallel, returning the per-range
/// results in order.
pub(crate) fn map_word_chunks<T, F>(n: u32, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    let total = 1u64 << n;
    let chunks = par::chunk_count(u128::from(total)) as u64;
    let size = total.div_ceil(chunks);
    par::map_indexed(chunks as usize, |c| {
        let start = c as u64 * size;
        let end = (start + size).min(total);
        f(start, end)
    })
}

/// Coset index of every word, indexed by the word value.
pub fn coset_index_table(p: &CodeParams, budget: &Budget) -> Result<Vec<u32>> {
    enumeration_guard(p, budget, 32)?;
    let count = p.coset_count()?;
    let table = EllTable::new(p);
    let parts = map_word_chunks(p.n(), |a, b| {
        (a..b)
            .map(|w| coset_index(table.ell(w), count) as u32)
            .collect::<Vec<u32>>()
    });
    Ok(parts.concat())
}

/// All cosets of a code, each a sorted list of words.
#[derive(Clone, Debug)]
pub struct CosetPartition {
    params: CodeParams,
    offsets: Vec<usize>,
    words: Vec<u32>,
}

impl CosetPartition {
    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn coset_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Words of coset `m`, in increasing order.
    pub fn coset(&self, m: usize) -> &[u32] {
        &self.words[self.offsets[m]..self.offsets[m + 1]]
    }

    pub fn size(&self, m: usize) -> usize {
        self.offsets[m + 1] - self.offsets[m]
    }

    pub fn sizes(&self) -> Vec<usize> {
        (0..self.coset_count()).map(|m| self.size(m)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[u32])> + '_ {
        (0..self.coset_count()).map(move |m| (m, self.coset(m)))
    }

    /// Σ_m |C_m|².
    pub fn sum_of_squares(&self) -> u128 {
        (0..self.coset_count())
            .map(|m| (self.size(m) as u128).pow(2))
            .sum()
    }

    /// Coset containing `x`, if `x` belongs to this partition.
    pub fn coset_of(&self, x: &BitBlock) -> Result<usize> {
        if x.len() != self.params.n() {
            return Err(Error::NotInPartition);
        }
        let m = encode(x, &self.params)?.m as usize;
        let w = u32::try_from(x.bits()).map_err(|_| Error::NotInPartition)?;
        if self.coset(m).binary_search(&w).is_ok() {
            return Ok(m);
        }
        // Fall back to a full search in case float ordering of the two
        // ℓ evaluation paths disagrees at a coset boundary.
        (0..self.coset_count())
            .find(|&c| self.coset(c).binary_search(&w).is_ok())
            .ok_or(Error::NotInPartition)
    }
}

/// Groups all `2^n` words by coset index.
pub fn partition_cosets(p: &CodeParams) -> Result<CosetPartition> {
    partition_cosets_with(p, &Budget::default())
}

pub fn partition_cosets_with(p: &CodeParams, budget: &Budget) -> Result<CosetPartition> {
    enumeration_guard(p, budget, 32)?;
    let table = coset_index_table(p, budget)?;
    let count = p.coset_count()? as usize;
    let mut offsets = vec![0usize; count + 1];
    for &m in &table {
        offsets[m as usize + 1] += 1;
    }
    for m in 0..count {
        offsets[m + 1] += offsets[m];
    }
    let mut cursor = offsets.clone();
    let mut words = vec![0u32; table.len()];
    for (w, &m) in table.iter().enumerate() {
        words[cursor[m as usize]] = w as u32;
        cursor[m as usize] += 1;
    }
    Ok(CosetPartition {
        params: p.clone(),
        offsets,
        words,
    })
}

/// Projections `U_0, …, U_n` of the coset index onto the encoding path.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionTrace {
    pub u: Vec<f64>,
}

/// `U_0 = 2^{−nr}·m` followed by `U_{i+1} = 2^r(U_i − x_{i+1}(1 − 2^{−r}))`.
/// Values are returned unclamped, so rounding may leave a boundary value a
/// few ulps outside `[0, 1)`.
pub fn projection_trace(x: &BitBlock, p: &CodeParams) -> Result<ProjectionTrace> {
    let enc = encode(x, p)?;
    let nr = p.nr_int()?;
    let theta = p.x();
    let step = p.step();
    let mut u = Vec::with_capacity(x.len() as usize + 1);
    let mut cur = enc.m as f64 / fmath::exp2(f64::from(nr));
    u.push(cur);
    for i in 1..=x.len() {
        cur = theta * (cur - if x.symbol(i) { step } else { 0.0 });
        u.push(cur);
    }
    Ok(ProjectionTrace { u })
}

/// Formats a word of length `n` given as an integer.
pub fn word_string(bits: u64, n: u32) -> String {
    alloc::format!("{}", BitBlock { bits, len: n })
}
