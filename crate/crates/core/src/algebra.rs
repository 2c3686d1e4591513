//! Exact arithmetic in ℚ[x] and in the real number field ℚ(θ) generated by
//! the root θ = 2^r ∈ (1,2) of an integer polynomial α.
//!
//! Values of ℚ(θ) are represented by polynomials reduced modulo α. Signs at
//! θ are decided exactly: an exact zero is detected through gcd(p, α), and
//! a nonzero sign through rational interval evaluation on a root bracket
//! that is bisected until the sign is unambiguous.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fmath;

/// Rational scalar.
pub type Q = BigRational;

fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

fn q_to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        v.numer().to_f64().unwrap_or(f64::NAN) / v.denom().to_f64().unwrap_or(f64::NAN)
    })
}

/// Polynomial with rational coefficients, stored lowest degree first and
/// kept free of trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    c: Vec<Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn x() -> Self {
        Self::monomial(1, Q::one())
    }

    pub fn constant(v: Q) -> Self {
        Self::from_coeffs(vec![v])
    }

    pub fn from_int(v: i64) -> Self {
        Self::constant(q_int(v))
    }

    /// `coef · x^k`.
    pub fn monomial(k: usize, coef: Q) -> Self {
        let mut c = vec![Q::zero(); k + 1];
        c[k] = coef;
        Self::from_coeffs(c)
    }

    /// Build from coefficients listed lowest degree first.
    pub fn from_coeffs(c: Vec<Q>) -> Self {
        let mut p = Poly { c };
        p.trim();
        p
    }

    /// Build from integer coefficients listed lowest degree first.
    pub fn from_i64s(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&v| q_int(v)).collect())
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(Zero::is_zero) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.c.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn leading(&self) -> Option<&Q> {
        self.c.last()
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::from_coeffs(self.c.iter().map(|v| v * s).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Q::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, v)| v * q_int(k as i64))
                .collect(),
        )
    }

    /// Euclidean division. Panics if `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.c[dd].recip();
        let mut rem = self.c.clone();
        let mut quot = vec![Q::zero(); self.c.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let f = &rem[top] * &lead_inv;
            if !f.is_zero() {
                let off = top - dd;
                for (k, dk) in d.c.iter().enumerate() {
                    rem[off + k] -= &f * dk;
                }
                quot[off] = f;
            }
            rem.pop();
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval_q(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for v in self.c.iter().rev() {
            acc = acc * x + v;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for v in self.c.iter().rev() {
            acc = acc * x + q_to_f64(v);
        }
        acc
    }

    /// Enclosure of the polynomial's range over `[a, b]` with `0 < a ≤ b`.
    fn eval_interval_positive(&self, a: &Q, b: &Q) -> (Q, Q) {
        let (mut lo, mut hi) = (Q::zero(), Q::zero());
        let (mut pa, mut pb) = (Q::one(), Q::one());
        for v in &self.c {
            if v.is_positive() {
                lo += v * &pa;
                hi += v * &pb;
            } else if v.is_negative() {
                lo += v * &pb;
                hi += v * &pa;
            }
            pa *= a;
            pb *= b;
        }
        (lo, hi)
    }
}

impl fmt::Display for Poly {
    /// Compact form with descending powers, e.g. `-12x^2-17x+79`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for k in (0..self.c.len()).rev() {
            let v = &self.c[k];
            if v.is_zero() {
                continue;
            }
            let neg = v.is_negative();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            let a = v.abs();
            let unit = a.is_one() && k > 0;
            if !unit {
                if a.is_integer() {
                    write!(f, "{}", a.numer())?;
                } else {
                    write!(f, "({}/{})", a.numer(), a.denom())?;
                }
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Poly {
    type Err = Error;

    /// Parses integer polynomials in `x` such as `x^3-x-1`, `2*x^2 + 3x - 1`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |msg: &str| Error::Parse(alloc::format!("{msg} in polynomial {s:?}"));
        let src: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(err("empty input"));
        }
        let mut pos = 0;
        let mut terms: Vec<(usize, Q)> = Vec::new();
        let read_int = |pos: &mut usize| -> Option<BigInt> {
            let start = *pos;
            while *pos < src.len() && src[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if start == *pos {
                return None;
            }
            let txt: String = src[start..*pos].iter().collect();
            BigInt::from_str(&txt).ok()
        };
        while pos < src.len() {
            let mut sign = BigInt::one();
            if src[pos] == '+' || src[pos] == '-' {
                if src[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
            } else if !terms.is_empty() {
                return Err(err("expected '+' or '-'"));
            }
            let coef = read_int(&mut pos);
            let mut has_x = false;
            if pos < src.len() && src[pos] == '*' {
                if coef.is_none() {
                    return Err(err("dangling '*'"));
                }
                pos += 1;
                if pos >= src.len() || src[pos] != 'x' {
                    return Err(err("expected 'x' after '*'"));
                }
            }
            let mut power = 0usize;
            if pos < src.len() && (src[pos] == 'x' || src[pos] == 'X') {
                has_x = true;
                pos += 1;
                power = 1;
                if pos < src.len() && src[pos] == '^' {
                    pos += 1;
                    power = read_int(&mut pos)
                        .and_then(|v| v.to_usize())
                        .ok_or_else(|| err("bad exponent"))?;
                }
            }
            if coef.is_none() && !has_x {
                return Err(err("expected a term"));
            }
            let c = coef.unwrap_or_else(BigInt::one) * sign;
            terms.push((power, Q::from_integer(c)));
        }
        let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut c = vec![Q::zero(); deg + 1];
        for (k, v) in terms {
            c[k] += v;
        }
        Ok(Poly::from_coeffs(c))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                let f: fn(&Poly, &Poly) -> Poly = $body;
                f(self, rhs)
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| {
    let n = a.c.len().max(b.c.len());
    Poly::from_coeffs((0..n).map(|k| a.coeff(k) + b.coeff(k)).collect())
});
forward_binop!(Sub, sub, |a, b| {
    let n = a.c.len().max(b.c.len());
    Poly::from_coeffs((0..n).map(|k| a.coeff(k) - b.coeff(k)).collect())
});
forward_binop!(Mul, mul, |a, b| {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut c = vec![Q::zero(); a.c.len() + b.c.len() - 1];
    for (i, u) in a.c.iter().enumerate() {
        for (j, v) in b.c.iter().enumerate() {
            c[i + j] += u * v;
        }
    }
    Poly::from_coeffs(c)
});

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.c.into_iter().map(|v| -v).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -(self.clone())
    }
}

/// Remainder of `p` modulo `alpha` (any nonzero `alpha`; the result is the
/// same as for the monic associate).
pub fn reduce_mod_alpha(p: &Poly, alpha: &Poly) -> Poly {
    p.rem(alpha)
}

fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-r);
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &Q) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let v = p.eval_q(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

fn sign_of(v: &Q) -> Ordering {
    if v.is_positive() {
        Ordering::Greater
    } else if v.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

/// Width below which the stored bracket is not refined further at build time.
const BRACKET_BITS: u32 = 96;
const MAX_REFINEMENTS: u32 = 4096;

/// A rate given implicitly by the real root θ = 2^r ∈ (1,2) of `alpha`.
#[derive(Clone, Debug)]
pub struct AlgebraicRate {
    alpha: Poly,
    modulus: Poly,
    lo: Q,
    hi: Q,
    rational_root: bool,
    root: f64,
    r: f64,
}

impl PartialEq for AlgebraicRate {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

impl AlgebraicRate {
    /// Isolates the unique root of `alpha` in (1,2). `alpha` must be
    /// squarefree, nonzero at 1 and 2, and have exactly one root there.
    pub fn new(alpha: Poly) -> Result<Self> {
        let deg = alpha
            .degree()
            .ok_or_else(|| Error::NoRootIsolation("zero polynomial".to_string()))?;
        if deg == 0 {
            return Err(Error::NoRootIsolation("constant polynomial".to_string()));
        }
        let modulus = alpha.monic();
        if Poly::gcd(&modulus, &modulus.derivative()).degree() != Some(0) {
            return Err(Error::NoRootIsolation(alloc::format!(
                "{alpha} has a repeated factor"
            )));
        }
        let (one, two) = (q_int(1), q_int(2));
        if modulus.eval_q(&one).is_zero() || modulus.eval_q(&two).is_zero() {
            return Err(Error::NoRootIsolation(alloc::format!(
                "{alpha} vanishes at an endpoint of (1,2)"
            )));
        }
        let seq = sturm_sequence(&modulus);
        let roots = sign_changes(&seq, &one) - sign_changes(&seq, &two);
        if roots != 1 {
            return Err(Error::NoRootIsolation(alloc::format!(
                "{alpha} has {roots} roots in (1,2)"
            )));
        }
        let mut rate = AlgebraicRate {
            alpha,
            modulus,
            lo: one,
            hi: two,
            rational_root: false,
            root: f64::NAN,
            r: f64::NAN,
        };
        for _ in 0..BRACKET_BITS {
            if !rate.bisect() {
                break;
            }
        }
        rate.root = q_to_f64(&((&rate.lo + &rate.hi) / q_int(2)));
        rate.r = fmath::log2(rate.root);
        Ok(rate)
    }

    /// Halve the bracket. Returns false once the root is known exactly.
    fn bisect(&mut self) -> bool {
        if self.rational_root {
            return false;
        }
        let mid = (&self.lo + &self.hi) / q_int(2);
        let vm = self.modulus.eval_q(&mid);
        if vm.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
            self.rational_root = true;
            return false;
        }
        let vl = self.modulus.eval_q(&self.lo);
        if vl.is_positive() == vm.is_positive() {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
        true
    }

    /// Rate polynomial as supplied.
    pub fn alpha(&self) -> &Poly {
        &self.alpha
    }

    /// Monic form of the rate polynomial used for reductions.
    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// Isolating bracket `[lo, hi]` of θ.
    pub fn bracket(&self) -> (&Q, &Q) {
        (&self.lo, &self.hi)
    }

    /// θ = 2^r as a double.
    pub fn root(&self) -> f64 {
        self.root
    }

    /// r = log2 θ as a double.
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        p.rem(&self.modulus)
    }

    /// θ^k reduced.
    pub fn x_pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one();
        let x = Poly::x();
        for _ in 0..k {
            acc = self.reduce(&(&acc * &x));
        }
        acc
    }

    /// Value of `p` at θ as a double (reduced first, which keeps the
    /// magnitudes of the evaluated coefficients small).
    pub fn eval_f64(&self, p: &Poly) -> f64 {
        self.reduce(p).eval_f64(self.root)
    }

    /// Exact sign of `p(θ)`.
    pub fn sign_at_root(&self, p: &Poly) -> Ordering {
        let red = self.reduce(p);
        if red.is_zero() {
            return Ordering::Equal;
        }
        if self.rational_root {
            return sign_of(&red.eval_q(&self.lo));
        }
        let g = Poly::gcd(&red, &self.modulus);
        if g.degree().unwrap_or(0) > 0 {
            let gl = g.eval_q(&self.lo);
            let gh = g.eval_q(&self.hi);
            if gl.is_positive() != gh.is_positive() {
                return Ordering::Equal;
            }
        }
        let mut local = self.clone();
        for _ in 0..MAX_REFINEMENTS {
            let (lo, hi) = red.eval_interval_positive(&local.lo, &local.hi);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            if !local.bisect() {
                return sign_of(&red.eval_q(&local.lo));
            }
        }
        // The sign is nonzero, so refinement always terminates well before
        // the cap; fall back to the float value for robustness.
        if red.eval_f64(self.root) < 0.0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Exact zero test at θ.
    pub fn is_zero_at_root(&self, p: &Poly) -> bool {
        self.sign_at_root(p) == Ordering::Equal
    }

    /// Exact comparison of `a(θ)` and `b(θ)`.
    pub fn cmp_at_root(&self, a: &Poly, b: &Poly) -> Ordering {
        self.sign_at_root(&(a - b))
    }

    /// Recognise `r = p/q` (`q ≤ max_den`) and build `x^q − 2^p`.
    pub fn from_rational_rate(r: f64, max_den: u32) -> Option<Self> {
        for q in 1..=max_den {
            let p = fmath::round(r * f64::from(q));
            if p < 1.0 || p >= f64::from(q) {
                continue;
            }
            if (r - p / f64::from(q)).abs() > 1e-12 {
                continue;
            }
            let p = p as u32;
            if num_integer::gcd(p, q) != 1 || p > 62 {
                continue;
            }
            let alpha = Poly::monomial(q as usize, Q::one()) - Poly::from_int(1i64 << p);
            return AlgebraicRate::new(alpha).ok();
        }
        None
    }
}

impl FromStr for AlgebraicRate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AlgebraicRate::new(s.parse()?)
    }
}
