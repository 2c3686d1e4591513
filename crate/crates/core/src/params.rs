use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::AlgebraicRate;
use crate::error::{invalid, Error, Result};
use crate::fmath;

/// Relative tolerance used to snap near-integers (coset index, quantized
/// shifts) and to trigger exact re-checks near |τ| = 1.
pub const INTEGER_GUARD: f64 = 1e-9;

/// Largest denominator recognised when a decimal rate is promoted to an
/// exact algebraic rate `x^q − 2^p`.
const AUTO_EXACT_MAX_DEN: u32 = 12;

/// Block length and rate of a code.
#[derive(Clone, Debug)]
pub struct CodeParams {
    n: u32,
    r: f64,
    exact: Option<Arc<AlgebraicRate>>,
}

impl PartialEq for CodeParams {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.r == other.r
    }
}

impl CodeParams {
    /// Decimal rate. A rate equal to a fraction with a small denominator
    /// also receives an exact algebraic companion used for boundary checks.
    pub fn new(n: u32, r: f64) -> Result<Self> {
        Self::check_n(n)?;
        if !(r > 0.0 && r <= 1.0) {
            return Err(invalid!("rate {r} outside (0, 1]"));
        }
        let exact = AlgebraicRate::from_rational_rate(r, AUTO_EXACT_MAX_DEN).map(Arc::new);
        Ok(CodeParams { n, r, exact })
    }

    /// Rate given as an algebraic number θ = 2^r.
    pub fn with_rate(n: u32, rate: AlgebraicRate) -> Result<Self> {
        Self::check_n(n)?;
        Ok(CodeParams {
            n,
            r: rate.r(),
            exact: Some(Arc::new(rate)),
        })
    }

    fn check_n(n: u32) -> Result<()> {
        if !(1..=64).contains(&n) {
            return Err(invalid!("block length {n} outside [1, 64]"));
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// θ = 2^r.
    pub fn x(&self) -> f64 {
        self.exact.as_ref().map_or_else(|| fmath::exp2(self.r), |a| a.root())
    }

    pub fn exact(&self) -> Option<&AlgebraicRate> {
        self.exact.as_deref()
    }

    pub fn nr(&self) -> f64 {
        f64::from(self.n) * self.r
    }

    pub fn nr_integral(&self) -> bool {
        let v = self.nr();
        (v - fmath::round(v)).abs() < INTEGER_GUARD
    }

    /// `n·r` as an integer, or `NonIntegralRate`.
    pub fn nr_int(&self) -> Result<u32> {
        if self.nr_integral() {
            Ok(fmath::round(self.nr()) as u32)
        } else {
            Err(Error::NonIntegralRate(self.nr()))
        }
    }

    /// Number of cosets `2^{nr}`.
    pub fn coset_count(&self) -> Result<u64> {
        let nr = self.nr_int()?;
        if nr >= 64 {
            return Err(invalid!("2^{nr} cosets do not fit in 64 bits"));
        }
        Ok(1u64 << nr)
    }

    /// `1 − 2^{−r}`.
    pub fn step(&self) -> f64 {
        1.0 - fmath::exp2(-self.r)
    }

    /// Weight of word bit `k−1` for `k = 1..=n`: `(1 − 2^{−r})·2^{kr}`.
    pub fn weights(&self) -> Vec<f64> {
        let s = self.step();
        (1..=self.n)
            .map(|k| s * fmath::exp2(f64::from(k) * self.r))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(CodeParams::new(0, 0.5).is_err());
        assert!(CodeParams::new(65, 0.5).is_err());
        assert!(CodeParams::new(4, 0.0).is_err());
        assert!(CodeParams::new(4, 1.5).is_err());
        assert!(CodeParams::new(4, f64::NAN).is_err());
        let p = CodeParams::new(5, 0.5).unwrap();
        assert!(!p.nr_integral());
        assert!(matches!(p.nr_int(), Err(Error::NonIntegralRate(_))));
        let p = CodeParams::new(20, 0.5).unwrap();
        assert_eq!(p.coset_count().unwrap(), 1024);
        assert!(p.exact().is_some());
        assert!(CodeParams::new(20, 1.0).unwrap().exact().is_none());
    }
}
