//! Float helpers that work without `std`.

#[inline]
pub fn exp2(x: f64) -> f64 {
    libm::exp2(x)
}

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// Ceiling that snaps values within the relative guard of an integer onto
/// that integer, so exact integers perturbed by rounding stay put.
#[inline]
pub fn guarded_ceil(x: f64, guard: f64) -> f64 {
    let r = round(x);
    if (x - r).abs() < guard * x.abs().max(1.0) {
        r
    } else {
        ceil(x)
    }
}

/// Binomial coefficient as `u128`. Exact for every `n ≤ 64`.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

#[inline]
pub fn powi(x: f64, k: i32) -> f64 {
    libm::pow(x, f64::from(k))
}
