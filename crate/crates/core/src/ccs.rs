//! Coset cardinality spectrum.
//!
//! Densities live on a grid of `B` bins over `[0, 1)` with samples at the
//! bin centres `(b + ½)/B`. Off-grid evaluation interpolates linearly
//! between centres and extrapolates linearly (clamped at zero) inside the
//! outer half bins; arguments outside `[0, 1)` evaluate to zero.
//!
//! The recursion operator is
//! `T(f)(u) = 2^{r−1}·(f(u·2^r) + f((u − (1 − 2^{−r}))·2^r))`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitseq::{self, EllTable};
use crate::budget::Budget;
use crate::error::{invalid, Error, Result};
use crate::fmath;
use crate::params::CodeParams;

pub const MIN_BINS: usize = 64;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITERS: usize = 10_000;

/// A probability density on `[0, 1)` sampled at bin centres.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumGrid {
    values: Vec<f64>,
    level: Option<u32>,
}

impl SpectrumGrid {
    pub fn uniform(bins: usize) -> Self {
        SpectrumGrid {
            values: vec![1.0; bins],
            level: None,
        }
    }

    /// Samples `f` at the bin centres (no normalisation).
    pub fn from_fn(bins: usize, f: impl Fn(f64) -> f64) -> Self {
        SpectrumGrid {
            values: (0..bins).map(|b| f((b as f64 + 0.5) / bins as f64)).collect(),
            level: None,
        }
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(invalid!("grid values must be finite, nonnegative and nonempty"));
        }
        Ok(SpectrumGrid {
            values,
            level: None,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn bins(&self) -> usize {
        self.values.len()
    }

    pub fn bin_width(&self) -> f64 {
        1.0 / self.values.len() as f64
    }

    pub fn level(&self) -> Option<u32> {
        self.level
    }

    pub fn with_level(mut self, level: u32) -> Self {
        self.level = Some(level);
        self
    }

    pub fn center(&self, b: usize) -> f64 {
        (b as f64 + 0.5) * self.bin_width()
    }

    /// `(u, f(u))` at every bin centre.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(b, &v)| (self.center(b), v))
    }

    /// Riemann sum of the samples.
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.bin_width()
    }

    pub fn normalize(&mut self) {
        let m = self.mass();
        if m > 0.0 {
            for v in &mut self.values {
                *v /= m;
            }
        }
    }

    /// Interpolated density at `u`.
    pub fn eval(&self, u: f64) -> f64 {
        if !(0.0..1.0).contains(&u) {
            return 0.0;
        }
        let n = self.values.len();
        if n == 1 {
            return self.values[0];
        }
        let t = u * n as f64 - 0.5;
        let (i, frac) = if t < 0.0 {
            (0, t)
        } else if t >= (n - 1) as f64 {
            (n - 2, t - (n - 2) as f64)
        } else {
            let i = t as usize;
            (i, t - i as f64)
        };
        let v = self.values[i] + (self.values[i + 1] - self.values[i]) * frac;
        v.max(0.0)
    }

    /// `max_b |f_b − g_b|` (grids must share the bin count).
    pub fn linf_distance(&self, other: &SpectrumGrid) -> f64 {
        assert_eq!(self.bins(), other.bins(), "grid sizes differ");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `Σ_b |f_b − g_b| / B`.
    pub fn l1_distance(&self, other: &SpectrumGrid) -> f64 {
        assert_eq!(self.bins(), other.bins(), "grid sizes differ");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * self.bin_width()
    }
}

/// One application of the recursion operator, without normalisation.
pub fn apply_operator(f: &SpectrumGrid, r: f64) -> SpectrumGrid {
    let theta = fmath::exp2(r);
    let shift = 1.0 - 1.0 / theta;
    let pre = fmath::exp2(r - 1.0);
    SpectrumGrid {
        values: (0..f.bins())
            .map(|b| {
                let u = f.center(b);
                pre * (f.eval(u * theta) + f.eval((u - shift) * theta))
            })
            .collect(),
        level: None,
    }
}

/// `‖f − T(f)‖_∞` after renormalising `T(f)`.
pub fn fixed_point_residual(f: &SpectrumGrid, r: f64) -> f64 {
    let mut t = apply_operator(f, r);
    t.normalize();
    f.linf_distance(&t)
}

fn check_rate_and_bins(r: f64, bins: usize) -> Result<()> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(invalid!("rate {r} outside (0, 1]"));
    }
    if bins < MIN_BINS {
        return Err(invalid!("at least {MIN_BINS} bins are required, got {bins}"));
    }
    Ok(())
}

/// Fixed-point solver settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: DEFAULT_TOL,
            max_iters: DEFAULT_MAX_ITERS,
        }
    }
}

/// Asymptotic CCS with the default iteration cap.
pub fn solve_asymptotic_ccs(r: f64, bins: usize, tol: f64) -> Result<SpectrumGrid> {
    solve_asymptotic_ccs_with(
        r,
        bins,
        SolverOptions {
            tol,
            ..SolverOptions::default()
        },
    )
}

/// Iterates `f ← T(f)/‖T(f)‖₁` from the uniform density until successive
/// iterates differ by at most `tol` in the sup norm.
pub fn solve_asymptotic_ccs_with(r: f64, bins: usize, opts: SolverOptions) -> Result<SpectrumGrid> {
    check_rate_and_bins(r, bins)?;
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(invalid!("tolerance must be positive"));
    }
    let mut f = SpectrumGrid::uniform(bins);
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iters {
        let mut g = apply_operator(&f, r);
        g.normalize();
        residual = f.linf_distance(&g);
        f = g;
        if residual <= opts.tol {
            return Ok(f);
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iters,
        residual,
    })
}

/// Level-`i` spectra for `i = 0..=n`; element `i` of the result is level `i`.
/// Level `n` is uniform and each lower level is one normalised operator
/// step from the level above.
pub fn backward_ccs(p: &CodeParams, bins: usize) -> Result<Vec<SpectrumGrid>> {
    p.nr_int()?;
    check_rate_and_bins(p.r(), bins)?;
    let n = p.n();
    let mut levels = Vec::with_capacity(n as usize + 1);
    let mut f = SpectrumGrid::uniform(bins).with_level(n);
    levels.push(f.clone());
    for i in (0..n).rev() {
        f = apply_operator(&f, p.r()).with_level(i);
        f.normalize();
        levels.push(f.clone());
    }
    levels.reverse();
    Ok(levels)
}

/// Histogram counts of `l(x^n)` over all words.
pub fn empirical_ccs_counts(p: &CodeParams, bins: usize, budget: &Budget) -> Result<Vec<u64>> {
    Budget::check("word", 1u128 << p.n(), budget.words)?;
    let nr = p.nr_int()?;
    if bins == 0 {
        return Err(invalid!("bin count must be positive"));
    }
    let table = EllTable::new(p);
    let scale = fmath::exp2(-f64::from(nr)) * bins as f64;
    let parts = bitseq::map_word_chunks(p.n(), |a, b| {
        let mut h = vec![0u64; bins];
        for w in a..b {
            let idx = ((table.ell(w) * scale) as usize).min(bins - 1);
            h[idx] += 1;
        }
        h
    });
    Ok(merge_histograms(bins, parts))
}

pub(crate) fn merge_histograms(bins: usize, parts: Vec<Vec<u64>>) -> Vec<u64> {
    parts.into_iter().fold(vec![0u64; bins], |mut acc, h| {
        for (a, v) in acc.iter_mut().zip(h) {
            *a += v;
        }
        acc
    })
}

/// Density of `l(x^n)` under uniform words, by full enumeration.
pub fn empirical_ccs(p: &CodeParams, bins: usize) -> Result<SpectrumGrid> {
    let counts = empirical_ccs_counts(p, bins, &Budget::default())?;
    Ok(counts_to_density(&counts, 1u64 << p.n()))
}

fn counts_to_density(counts: &[u64], total: u64) -> SpectrumGrid {
    let bins = counts.len() as f64;
    SpectrumGrid {
        values: counts
            .iter()
            .map(|&c| c as f64 * bins / total as f64)
            .collect(),
        level: None,
    }
}

/// Density of the final projection `U_n = m − ℓ` over all words.
pub fn final_projection_density(p: &CodeParams, bins: usize, budget: &Budget) -> Result<SpectrumGrid> {
    Budget::check("word", 1u128 << p.n(), budget.words)?;
    let count = p.coset_count()?;
    let table = EllTable::new(p);
    let parts = bitseq::map_word_chunks(p.n(), |a, b| {
        let mut h = vec![0u64; bins];
        for w in a..b {
            let ell = table.ell(w);
            let u = bitseq::coset_index(ell, count) as f64 - ell;
            let idx = ((u.max(0.0) * bins as f64) as usize).min(bins - 1);
            h[idx] += 1;
        }
        h
    });
    Ok(counts_to_density(&merge_histograms(bins, parts), 1u64 << p.n()))
}

/// Riemann approximation of `∫₀¹ f²`.
pub fn ccs_square_integral(f: &SpectrumGrid) -> f64 {
    f.values.iter().map(|v| v * v).sum::<f64>() * f.bin_width()
}

/// `f(m·2^{−nr})·2^{n(1−r)}`, the approximate size of coset `m`.
pub fn coset_size_estimate(m: u64, p: &CodeParams, f: &SpectrumGrid) -> Result<f64> {
    let count = p.coset_count()?;
    if m >= count {
        return Err(Error::IndexOutOfRange {
            index: i128::from(m),
            lo: 0,
            hi: i128::from(count),
        });
    }
    let nr = f64::from(p.nr_int()?);
    Ok(f.eval(m as f64 / count as f64) * fmath::exp2(f64::from(p.n()) - nr))
}

/// Asymptotic CCS at `r = 1/2` in closed form: a trapezoid rising linearly
/// on `[0, √2 − 1)`, flat at `1/(2 − √2)` up to `2 − √2`, then falling.
pub fn closed_form_half_rate(u: f64) -> f64 {
    let s2 = fmath::sqrt(2.0);
    let slope = 1.0 / (3.0 * s2 - 4.0);
    if !(0.0..1.0).contains(&u) {
        0.0
    } else if u < s2 - 1.0 {
        u * slope
    } else if u < 2.0 - s2 {
        1.0 / (2.0 - s2)
    } else {
        (1.0 - u) * slope
    }
}

/// `∫ f²` for the closed form at `r = 1/2`.
pub fn closed_form_half_rate_square_integral() -> f64 {
    1.0 / (3.0 * (fmath::sqrt(2.0) - 1.0)) + 0.5
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_interpolates_and_extrapolates() {
        let g = SpectrumGrid::from_values(vec![1.0, 3.0]).unwrap();
        assert_eq!(g.eval(0.25), 1.0);
        assert_eq!(g.eval(0.5), 2.0);
        assert_eq!(g.eval(0.0), 0.0);
        assert_eq!(g.eval(0.99), 3.0 + 2.0 * 0.48);
        assert_eq!(g.eval(1.0), 0.0);
        assert_eq!(g.eval(-0.1), 0.0);
    }

    #[test]
    fn closed_form_has_unit_mass() {
        let g = SpectrumGrid::from_fn(1 << 16, closed_form_half_rate);
        assert!((g.mass() - 1.0).abs() < 1e-6);
        assert!((ccs_square_integral(&g) - closed_form_half_rate_square_integral()).abs() < 1e-6);
        assert!((closed_form_half_rate(0.5) - 1.0 / (2.0 - 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn rate_one_is_uniform() {
        let f = solve_asymptotic_ccs(1.0, 128, 1e-12).unwrap();
        assert!(f.values().iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn rejects_small_grids() {
        assert!(solve_asymptotic_ccs(0.5, 32, 1e-9).is_err());
        assert!(solve_asymptotic_ccs(0.0, 128, 1e-9).is_err());
    }
}
