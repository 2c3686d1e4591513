mod common;

use oac_core::algebra::AlgebraicRate;
use oac_core::bitseq::{encode, BitBlock};
use oac_core::hds::hds_exhaustive;
use oac_core::shift::{active_set_size, tau, IndexSet};
use oac_core::CodeParams;
use proptest::prelude::*;

fn run(check: common::Check) {
    if let Err(e) = check {
        panic!("{e}");
    }
}

#[test]
fn exhaustive_half_rate_up_to_twelve_bits() {
    for n in (2..=12).step_by(2) {
        run(common::exhaustive(&CodeParams::new(n, 0.5).unwrap()));
    }
}

#[test]
fn exhaustive_other_rates() {
    for (n, r) in [(8u32, 0.25), (12, 0.25), (9, 1.0 / 3.0), (12, 0.75), (10, 0.9), (7, 1.0)] {
        run(common::exhaustive(&CodeParams::new(n, r).unwrap()));
    }
}

#[test]
fn exhaustive_algebraic_rate() {
    // 2^r = √2 given as an exact rate.
    let rate: AlgebraicRate = "x^2-2".parse().unwrap();
    run(common::exhaustive(&CodeParams::with_rate(10, rate).unwrap()));
}

#[test]
fn randomized_twenty_bits() {
    let p = CodeParams::new(20, 0.5).unwrap();
    let cases = common::randomized(&p, common::RANDOM_SAMPLES, common::SEED).unwrap();
    assert_eq!(cases, 5 * common::RANDOM_SAMPLES as u64);
}

#[test]
fn identities_across_sizes() {
    for (n, r) in [(4u32, 0.5), (6, 0.5), (8, 0.25), (12, 0.5), (14, 0.5), (15, 0.2)] {
        run(common::identities(&CodeParams::new(n, r).unwrap()));
    }
}

fn rates() -> impl Strategy<Value = (u32, f64)> {
    prop_oneof![
        (1u32..=10).prop_map(|k| (2 * k, 0.5)),
        (1u32..=5).prop_map(|k| (4 * k, 0.25)),
        (1u32..=6).prop_map(|k| (3 * k, 1.0 / 3.0)),
        (1u32..=5).prop_map(|k| (4 * k, 0.75)),
        (1u32..=20).prop_map(|n| (n, 1.0)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tau_flips_sign_under_complement((n, r) in rates(), jseed: u64, bseed: u64) {
        let p = CodeParams::new(n, r).unwrap();
        let j = jseed & ((1u64 << n) - 1);
        let b = bseed & ((1u64 << j.count_ones()) - 1);
        prop_assert!(common::tau_antisymmetry(&p, j, b).is_ok());
    }

    #[test]
    fn flipping_shifts_ell_by_tau((n, r) in rates(), xseed: u64, jseed: u64) {
        let p = CodeParams::new(n, r).unwrap();
        let mask = (1u64 << n) - 1;
        let (x, j) = (xseed & mask, jseed & mask);
        let xb = BitBlock::new(x, n).unwrap();
        let yb = BitBlock::new(x ^ j, n).unwrap();
        let js = IndexSet::from_mask(j);
        let t = tau(&js, &xb.restrict(&js).unwrap(), &p).unwrap();
        let (ex, ey) = (encode(&xb, &p).unwrap(), encode(&yb, &p).unwrap());
        prop_assert!((ey.ell - ex.ell - t).abs() <= 1e-9 * ex.ell.abs().max(1.0));
    }

    #[test]
    fn coexistence_never_disagrees((n, r) in rates(), xseed: u64, jseed: u64) {
        let p = CodeParams::new(n, r).unwrap();
        let mask = (1u64 << n) - 1;
        let x = xseed & mask;
        let j = (jseed & mask).max(1);
        prop_assert!(common::coexistence(&p, x, x ^ j).is_ok());
    }

    #[test]
    fn complement_and_projection((n, r) in rates(), xseed: u64) {
        let p = CodeParams::new(n, r).unwrap();
        let x = xseed & ((1u64 << n) - 1);
        prop_assert!(common::complement_and_trace(&p, x).is_ok());
    }

    #[test]
    fn mirror_intervals_are_shifts((n, r) in rates(), jseed: u64, bseed: u64, mseed: u64) {
        let p = CodeParams::new(n, r).unwrap();
        let count = p.coset_count().unwrap();
        prop_assume!(count > 1);
        let j = jseed & ((1u64 << n) - 1);
        let b = bseed & ((1u64 << j.count_ones()) - 1);
        let m = 1 + mseed % (count - 1);
        prop_assert!(common::mirror(&p, m, j, b).is_ok());
    }

    #[test]
    fn active_sets_are_closed_under_complement((n, r) in rates(), jseed: u64) {
        let p = CodeParams::new(n, r).unwrap();
        let j = IndexSet::from_mask(jseed & ((1u64 << n) - 1));
        let size = active_set_size(&j, &p).unwrap();
        prop_assert!(size <= 1u64 << j.d());
        prop_assert!(j.d() == 0 || size.is_multiple_of(2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spectrum_sum_dominates_uniform_bound((n, r) in rates()) {
        prop_assume!(n <= 14);
        let p = CodeParams::new(n, r).unwrap();
        let t = hds_exhaustive(&p).unwrap();
        let bound = 2f64.powf(f64::from(n) * (1.0 - r));
        prop_assert!(t.total() >= bound * (1.0 - 1e-12));
        prop_assert_eq!(t.psi(0), Some(1.0));
        prop_assert!(t.rows().all(|(_, v, _)| v >= 0.0));
    }
}
