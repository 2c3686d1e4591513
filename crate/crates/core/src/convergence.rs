//! Limits of the low-order distance spectrum.
//!
//! `ψ(1)` and `ψ(2)` have closed forms in `r`. For `ψ(3;n)` the soft sum
//! splits into *species* `x^k + s₁x^i + s₀` (with `x = 2^r`) whose scaled
//! generations `(x − 1)·x^{j−1}·|species|` contribute while they stay below
//! one. A species that vanishes at `x` never dies and makes `ψ(3;n)` grow
//! linearly; such species correspond to the zero pairs `(i, j)` with
//! `2^{ir}(2^{jr} − 1) = 1`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::algebra::{AlgebraicRate, Poly};
use crate::error::{invalid, Error, Result};
use crate::fmath;

/// `ψ(1)` and the number of nonzero terms in its sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Psi1 {
    pub value: f64,
    pub j1: u32,
}

fn check_rate(r: f64) -> Result<()> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(invalid!("rate {r} outside (0, 1]"));
    }
    Ok(())
}

fn neg_floor(v: f64) -> u32 {
    (-fmath::floor(v)).max(0.0) as u32
}

/// `ψ(1) = Σ_{i=1}^{J₁} (1 − (1 − 2^{−r})·2^{ir})` with
/// `J₁ = −⌊log₂(2^r − 1)/r⌋`.
pub fn psi1_closed(r: f64) -> Result<Psi1> {
    check_rate(r)?;
    let x = fmath::exp2(r);
    let j1 = neg_floor(fmath::log2(x - 1.0) / r);
    let step = 1.0 - 1.0 / x;
    let value = (1..=j1)
        .map(|i| (1.0 - step * fmath::exp2(f64::from(i) * r)).max(0.0))
        .sum();
    Ok(Psi1 { value, j1 })
}

/// `ψ(2)` with its two conditional halves and summation bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct Psi2 {
    pub value: f64,
    /// `ψ(2|00)`.
    pub given_equal: f64,
    /// `ψ(2|10)`.
    pub given_opposite: f64,
    pub j21: u32,
    pub j22: u32,
    /// `κ₁(i)` for `i = 1..=J₂,₁`.
    pub kappa1: Vec<u32>,
    /// `κ₂(i)` for `i = 1..=J₂,₂`.
    pub kappa2: Vec<u32>,
}

fn kappa(arg: f64, x: f64, r: f64) -> u32 {
    if arg <= 0.0 {
        return 0;
    }
    let v = (fmath::log2(arg) - fmath::log2(x - 1.0)) / r;
    fmath::ceil(v).max(0.0) as u32
}

/// `ψ(2) = (ψ(2|00) + ψ(2|10))/2` from the double sums over
/// `i ≤ J₂,₁, k ≤ κ₁(i)` and `i ≤ J₂,₂, k ≤ κ₂(i)`.
pub fn psi2_closed(r: f64) -> Result<Psi2> {
    check_rate(r)?;
    let x = fmath::exp2(r);
    let step = 1.0 - 1.0 / x;
    let j21 = neg_floor(fmath::log2(x * x - 1.0) / r);
    let j22 = if x - 1.0 >= 1.0 {
        0
    } else {
        neg_floor(2.0 * fmath::log2(x - 1.0) / r)
    };
    let pow = |e: f64| fmath::exp2(e * r);
    let mut kappa1 = Vec::with_capacity(j21 as usize);
    let mut equal = 0.0;
    for i in 1..=j21 {
        let fi = f64::from(i);
        let kap = kappa(pow(-fi) - 1.0 + 1.0 / x, x, r);
        kappa1.push(kap);
        for k in 1..=kap {
            equal += (1.0 - step * pow(fi) * (pow(f64::from(k)) + 1.0)).max(0.0);
        }
    }
    let mut kappa2 = Vec::with_capacity(j22 as usize);
    let mut opposite = 0.0;
    for i in 1..=j22 {
        let fi = f64::from(i);
        let kap = kappa(pow(-fi) + 1.0 - 1.0 / x, x, r);
        kappa2.push(kap);
        for k in 1..=kap {
            opposite += (1.0 - step * pow(fi) * (pow(f64::from(k)) - 1.0)).max(0.0);
        }
    }
    Ok(Psi2 {
        value: (equal + opposite) / 2.0,
        given_equal: equal,
        given_opposite: opposite,
        j21,
        j22,
        kappa1,
        kappa2,
    })
}

/// A rate for the zero-pair search.
#[derive(Clone, Copy, Debug)]
pub enum RateRef<'a> {
    /// Decimal rate: tests are done in floating point.
    Float(f64),
    /// Algebraic rate: tests are exact.
    Exact(&'a AlgebraicRate),
}

impl RateRef<'_> {
    fn r(&self) -> f64 {
        match self {
            RateRef::Float(r) => *r,
            RateRef::Exact(a) => a.r(),
        }
    }
}

/// Zero pairs `(i, j)` with `2^{ir}(2^{jr} − 1) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroPairSet {
    pub pairs: Vec<(u32, u32)>,
    /// Largest `k = i + j` searched.
    pub search_bound: u32,
    /// True when the pairs were decided exactly.
    pub certified: bool,
}

impl ZeroPairSet {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Tolerance of the floating-point zero-pair test.
pub const FLOAT_ZERO_EPS: f64 = 1e-12;
const MAX_SEARCH: u32 = 100_000;

/// Least `k` with `(1 − 2^{−r})(2^{kr}(1 − 2^{−r}) − 1) ≥ 1`.
pub fn zero_pair_bound(r: f64) -> Result<u32> {
    check_rate(r)?;
    let s = 1.0 - fmath::exp2(-r);
    (1..=MAX_SEARCH)
        .find(|&k| s * (fmath::exp2(f64::from(k) * r) * s - 1.0) >= 1.0)
        .ok_or_else(|| invalid!("rate {r} needs a zero-pair search beyond k = {MAX_SEARCH}"))
}

/// Searches `k = i + j ≤ K` for zero pairs.
pub fn find_zero_pairs(rate: RateRef<'_>) -> Result<ZeroPairSet> {
    let bound = zero_pair_bound(rate.r())?;
    let mut pairs = Vec::new();
    for k in 2..=bound {
        for i in 1..k {
            let j = k - i;
            let hit = match rate {
                RateRef::Float(r) => {
                    let v = fmath::exp2(f64::from(i) * r) * (fmath::exp2(f64::from(j) * r) - 1.0) - 1.0;
                    v.abs() < FLOAT_ZERO_EPS
                }
                RateRef::Exact(a) => a.is_zero_at_root(&trinomial(k, i, -1, -1)),
            };
            if hit {
                pairs.push((i, j));
            }
        }
    }
    pairs.sort_unstable();
    Ok(ZeroPairSet {
        pairs,
        search_bound: bound,
        certified: matches!(rate, RateRef::Exact(_)),
    })
}

/// `x^k + s₁x^i + s₀`.
pub fn trinomial(k: u32, i: u32, s1: i8, s0: i8) -> Poly {
    use num_traits::One;
    let one = crate::algebra::Q::one();
    Poly::monomial(k as usize, one.clone())
        + Poly::monomial(i as usize, one).scale(&crate::algebra::Q::from_integer(s1.into()))
        + Poly::from_int(s0.into())
}

/// Fate of a species.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpeciesClass {
    /// `(x − 1)·|value| ≥ 1`: no generation contributes.
    Extinct,
    /// Contributes for `J` generations; `contribution` is
    /// `Σ_{j=1}^{J} (1 − (x − 1)x^{j−1}|value|)` reduced.
    Mortal { lifespan: u32, contribution: Poly },
    /// Value is exactly zero: every generation contributes one.
    Immortal,
}

/// A species `x^k + s₁x^i + s₀` classified at the rate root.
#[derive(Clone, Debug, PartialEq)]
pub struct Species {
    pub k: u32,
    pub i: u32,
    pub s1: i8,
    pub s0: i8,
    /// Value reduced modulo the rate polynomial (signed).
    pub reduced: Poly,
    /// Whether the value is negative.
    pub negative: bool,
    pub class: SpeciesClass,
}

impl Species {
    pub fn polynomial(&self) -> Poly {
        trinomial(self.k, self.i, self.s1, self.s0)
    }

    pub fn lifespan(&self) -> Option<u32> {
        match self.class {
            SpeciesClass::Mortal { lifespan, .. } => Some(lifespan),
            _ => None,
        }
    }

    pub fn contribution(&self) -> Option<&Poly> {
        match &self.class {
            SpeciesClass::Mortal { contribution, .. } => Some(contribution),
            _ => None,
        }
    }

    pub fn is_mortal(&self) -> bool {
        matches!(self.class, SpeciesClass::Mortal { .. })
    }
}

/// Largest lifespan computed before giving up.
pub const MAX_LIFESPAN: u32 = 10_000;

fn check_sign(s: i8) -> Result<()> {
    if s != 1 && s != -1 {
        return Err(invalid!("signs must be +1 or -1"));
    }
    Ok(())
}

/// Classifies `x^k + s₁x^i + s₀` with exact sign tests at the root.
pub fn classify_species(k: u32, i: u32, s1: i8, s0: i8, rate: &AlgebraicRate) -> Result<Species> {
    if !(k > i && i >= 1) {
        return Err(invalid!("species needs k > i ≥ 1 (got k = {k}, i = {i})"));
    }
    check_sign(s1)?;
    check_sign(s0)?;
    let reduced = rate.reduce(&trinomial(k, i, s1, s0));
    let sign = rate.sign_at_root(&reduced);
    let base = Species {
        k,
        i,
        s1,
        s0,
        reduced: reduced.clone(),
        negative: sign == Ordering::Less,
        class: SpeciesClass::Immortal,
    };
    if sign == Ordering::Equal {
        return Ok(base);
    }
    let magnitude = if sign == Ordering::Less { -reduced } else { reduced };
    let x = Poly::x();
    let one = Poly::one();
    let mut gen = rate.reduce(&(&(&x - &one) * &magnitude));
    if rate.cmp_at_root(&gen, &one) != Ordering::Less {
        return Ok(Species {
            class: SpeciesClass::Extinct,
            ..base
        });
    }
    let mut lifespan = 1;
    loop {
        let next = rate.reduce(&(&gen * &x));
        if rate.cmp_at_root(&next, &one) != Ordering::Less {
            break;
        }
        lifespan += 1;
        if lifespan > MAX_LIFESPAN {
            return Err(Error::LifespanOverflow(MAX_LIFESPAN));
        }
        gen = next;
    }
    let contribution = rate.reduce(
        &(Poly::from_int(i64::from(lifespan)) - &magnitude * &(rate.x_pow(lifespan as usize) - one)),
    );
    Ok(Species {
        class: SpeciesClass::Mortal {
            lifespan,
            contribution,
        },
        ..base
    })
}

/// The four sign classes `(s₁, s₀)` of species.
pub const GENERA: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Label such as `(+1,-1)`.
pub fn genus_label(s1: i8, s0: i8) -> String {
    let sgn = |s: i8| if s > 0 { "+1" } else { "-1" };
    format!("({},{})", sgn(s1), sgn(s0))
}

/// Smallest `|species|` among all species of the genus at this `k`.
fn genus_floor(k: u32, s1: i8, s0: i8) -> Poly {
    let i = if s1 > 0 { 1 } else { k - 1 };
    trinomial(k, i, s1, s0)
}

const MAX_GENUS_K: u32 = 100_000;

/// Largest `k` at which the genus can still contain a non-extinct species.
/// Returns 1 when every species of the genus is extinct.
pub fn genus_k_bound(s1: i8, s0: i8, rate: &AlgebraicRate) -> Result<u32> {
    check_sign(s1)?;
    check_sign(s0)?;
    let xm1 = Poly::x() - Poly::one();
    let x = rate.root();
    for k in 2..=MAX_GENUS_K {
        // Cheap float screen before the exact test.
        let approx = fmath::powi(x, k as i32) + f64::from(s1) * if s1 > 0 { x } else { fmath::powi(x, k as i32 - 1) } + f64::from(s0);
        if approx < 0.0 || (x - 1.0) * approx < 1.0 - 1e-6 {
            continue;
        }
        let floor = rate.reduce(&genus_floor(k, s1, s0));
        if rate.sign_at_root(&floor) == Ordering::Less {
            continue;
        }
        let scaled = rate.reduce(&(&xm1 * &floor));
        if rate.cmp_at_root(&scaled, &Poly::one()) != Ordering::Less {
            return Ok(k - 1);
        }
    }
    Err(invalid!("genus bound exceeds k = {MAX_GENUS_K}"))
}

/// All species of one genus up to its k-bound.
#[derive(Clone, Debug, PartialEq)]
pub struct GenusScan {
    pub s1: i8,
    pub s0: i8,
    pub k_bound: u32,
    pub species: Vec<Species>,
}

impl GenusScan {
    pub fn label(&self) -> String {
        genus_label(self.s1, self.s0)
    }

    pub fn mortal(&self) -> impl Iterator<Item = &Species> {
        self.species.iter().filter(|s| s.is_mortal())
    }

    pub fn count(&self, pred: impl Fn(&Species) -> bool) -> usize {
        self.species.iter().filter(|s| pred(s)).count()
    }

    /// Sum of the mortal contributions (reduced).
    pub fn mortal_total(&self, rate: &AlgebraicRate) -> Poly {
        let sum = self
            .mortal()
            .filter_map(Species::contribution)
            .fold(Poly::zero(), |acc, c| acc + c);
        rate.reduce(&sum)
    }
}

pub fn scan_genus(s1: i8, s0: i8, rate: &AlgebraicRate) -> Result<GenusScan> {
    let k_bound = genus_k_bound(s1, s0, rate)?;
    let mut species = Vec::new();
    for k in 2..=k_bound {
        for i in 1..k {
            species.push(classify_species(k, i, s1, s0, rate)?);
        }
    }
    Ok(GenusScan {
        s1,
        s0,
        k_bound,
        species,
    })
}

/// All four genera.
pub fn species_audit(rate: &AlgebraicRate) -> Result<Vec<GenusScan>> {
    GENERA.iter().map(|&(s1, s0)| scan_genus(s1, s0, rate)).collect()
}

/// Analytic `ψ(3;n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Psi3 {
    pub n: u32,
    pub value: f64,
    /// Exact value as an element of ℚ(x) plus `slope·n` (see `closed_form`).
    pub exact: Poly,
    /// False when `n` is below the horizon; the value is then the
    /// truncated species sum rather than the linear law.
    pub stabilized: bool,
    /// Smallest `n` from which the linear law holds.
    pub horizon: u32,
    /// Constant part `c(x)` of `ψ(3;n) = c(x)/4 + slope·n` for `n ≥ horizon`.
    pub constant: Poly,
    /// `|𝒫|/4`.
    pub slope: f64,
    pub zero_pairs: ZeroPairSet,
}

impl Psi3 {
    /// E.g. `(-12x^2-17x+79)/4 + n/2`.
    pub fn closed_form(&self) -> String {
        let quarters = fmath::round(self.slope * 4.0) as i64;
        let lin = match quarters {
            0 => String::new(),
            4 => " + n".into(),
            2 => " + n/2".into(),
            1 => " + n/4".into(),
            q if q % 4 == 0 => format!(" + {}n", q / 4),
            q if q % 2 == 0 => format!(" + {}n/2", q / 2),
            q => format!(" + {q}n/4"),
        };
        format!("({})/4{lin}", self.constant)
    }
}

/// Species sum for `ψ(3;n)`:
/// `¼·Σ_genera Σ_{k<n} Σ_{i<k} Σ_{j=1}^{min(J, n−k)} (1 − (x − 1)x^{j−1}|species|)`.
pub fn psi3_analytic(rate: &AlgebraicRate, n: u32) -> Result<Psi3> {
    let audit = species_audit(rate)?;
    let zero_pairs = find_zero_pairs(RateRef::Exact(rate))?;
    let mut immortal: Vec<(u32, u32)> = Vec::new();
    let mut horizon = 0u32;
    let mut constant = Poly::zero();
    let mut truncated = Poly::zero();
    let one = Poly::one();
    for genus in &audit {
        for s in &genus.species {
            match &s.class {
                SpeciesClass::Extinct => {}
                SpeciesClass::Immortal => {
                    immortal.push((s.i, s.k - s.i));
                    horizon = horizon.max(s.k);
                    constant = constant - Poly::from_int(i64::from(s.k));
                    if n > s.k {
                        truncated = truncated + Poly::from_int(i64::from(n - s.k));
                    }
                }
                SpeciesClass::Mortal {
                    lifespan,
                    contribution,
                } => {
                    horizon = horizon.max(s.k + lifespan);
                    constant = constant + contribution;
                    if n > s.k {
                        let gens = (*lifespan).min(n - s.k);
                        if gens == *lifespan {
                            truncated = truncated + contribution;
                        } else {
                            let mag = if s.negative { -&s.reduced } else { s.reduced.clone() };
                            let partial = Poly::from_int(i64::from(gens))
                                - &mag * &(rate.x_pow(gens as usize) - &one);
                            truncated = truncated + rate.reduce(&partial);
                        }
                    }
                }
            }
        }
    }
    immortal.sort_unstable();
    if immortal != zero_pairs.pairs {
        return Err(Error::Inconsistent(format!(
            "immortal species {immortal:?} differ from zero pairs {:?}",
            zero_pairs.pairs
        )));
    }
    let exact = rate.reduce(&truncated).scale(&quarter());
    Ok(Psi3 {
        n,
        value: rate.eval_f64(&exact),
        exact,
        stabilized: n >= horizon,
        horizon,
        constant: rate.reduce(&constant),
        slope: zero_pairs.pairs.len() as f64 / 4.0,
        zero_pairs,
    })
}

fn quarter() -> crate::algebra::Q {
    crate::algebra::Q::new(1.into(), 4.into())
}

/// Result of scanning `x^{j₃} − x^{j₂} − x^{j₁}` over `1 ≤ j₁ < j₂ < j₃ ≤ max`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignScan {
    pub min_value: f64,
    pub min_is_zero: bool,
    pub negative_count: usize,
    /// Triples attaining an exact zero.
    pub zeros: Vec<(u32, u32, u32)>,
}

/// Sign scan with exact zero and sign decisions.
pub fn sign_pattern_scan(rate: &AlgebraicRate, max: u32) -> SignScan {
    let powers: Vec<Poly> = (0..=max as usize).map(|k| rate.x_pow(k)).collect();
    let mut out = SignScan {
        min_value: f64::INFINITY,
        min_is_zero: false,
        negative_count: 0,
        zeros: vec![],
    };
    for j3 in 3..=max {
        for j2 in 2..j3 {
            for j1 in 1..j2 {
                let v = &(&powers[j3 as usize] - &powers[j2 as usize]) - &powers[j1 as usize];
                let val = match rate.sign_at_root(&v) {
                    Ordering::Equal => {
                        out.zeros.push((j1, j2, j3));
                        0.0
                    }
                    Ordering::Less => {
                        out.negative_count += 1;
                        rate.eval_f64(&v).min(-f64::MIN_POSITIVE)
                    }
                    Ordering::Greater => rate.eval_f64(&v).max(f64::MIN_POSITIVE),
                };
                out.min_value = out.min_value.min(val);
            }
        }
    }
    out.min_is_zero = out.negative_count == 0 && !out.zeros.is_empty();
    out
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.polynomial())
    }
}
