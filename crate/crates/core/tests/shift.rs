use oac_core::bitseq::{encode, BitBlock};
use oac_core::ccs::{closed_form_half_rate, solve_asymptotic_ccs, SpectrumGrid};
use oac_core::shift::*;
use oac_core::CodeParams;

fn half(n: u32) -> CodeParams {
    CodeParams::new(n, 0.5).unwrap()
}

fn set(v: &[u32]) -> IndexSet {
    IndexSet::new(v.to_vec()).unwrap()
}

fn bits(s: &str) -> BitBlock {
    s.parse().unwrap()
}

#[test]
fn tau_examples() {
    let p = half(2);
    assert_eq!(tau(&IndexSet::empty(), &BitBlock::zeros(0), &p).unwrap(), 0.0);
    let t = tau(&set(&[1, 2]), &bits("00"), &p).unwrap();
    assert!((t - 1.0).abs() < 1e-12);
    assert!(!is_active(&set(&[1, 2]), &bits("00"), &p).unwrap());
    assert!(!is_active(&set(&[1, 2]), &bits("11"), &p).unwrap());
    assert!(is_active(&set(&[1, 2]), &bits("01"), &p).unwrap());
    assert_eq!(active_set_size(&set(&[1, 2]), &p).unwrap(), 2);
    assert_eq!(active_set_size(&IndexSet::empty(), &p).unwrap(), 1);
}

#[test]
fn index_set_rules() {
    assert!(IndexSet::new(vec![2, 1]).is_err());
    assert!(IndexSet::new(vec![0]).is_err());
    assert_eq!(set(&[1, 3]).to_string(), "{1,3}");
    let g = IndexSet::gap_at(5, 2).unwrap();
    assert_eq!(g.positions(), &[1, 2, 3, 5]);
    assert!(tau(&set(&[1, 9]), &bits("00"), &half(4)).is_err());
}

#[test]
fn coexisting_interval_branches() {
    let p = half(8);
    let full = coexisting_interval(3, &IndexSet::empty(), &BitBlock::zeros(0), &p).unwrap();
    assert_eq!((full.lo, full.hi, full.length()), (2.0, 3.0, 1.0));
    let j = set(&[1, 2, 3, 4, 5, 6, 7, 8]);
    let e = coexisting_interval(3, &j, &BitBlock::zeros(8), &p).unwrap();
    assert!(e.empty && e.length() == 0.0);
    assert!(coexisting_interval(0, &j, &BitBlock::zeros(8), &p).is_err());
    assert!(coexisting_interval(16, &j, &BitBlock::zeros(8), &p).is_err());

    let j = set(&[2, 3]);
    for b in ["01", "10"] {
        let b = bits(b);
        let t = tau(&j, &b, &p).unwrap();
        let a = coexisting_interval(7, &j, &b, &p).unwrap();
        let m = coexisting_interval(7, &j, &b.complement(), &p).unwrap();
        assert!((a.length() - (1.0 - t.abs())).abs() < 1e-12);
        assert!((m.lo - (a.lo + t)).abs() < 1e-12 && (m.hi - (a.hi + t)).abs() < 1e-12);
        assert!(((a.lo + m.hi) - 13.0).abs() < 1e-9);
    }
}

#[test]
fn coexistence_examples() {
    let p = half(4);
    assert!(coexists(&bits("0001"), &bits("0010"), &p).unwrap());
    assert!(!coexists(&bits("0000"), &bits("0100"), &p).unwrap());
    assert!(coexists(&bits("0001"), &bits("0001"), &p).is_err());
    let p2 = half(2);
    assert!(coexists(&bits("01"), &bits("10"), &p2).unwrap());
    assert!(!coexists(&bits("00"), &bits("11"), &p2).unwrap());
}

#[test]
fn census_small_case() {
    let h = shift_census(2, &half(2), &CensusScope::All).unwrap();
    assert_eq!(h.count(1), 2);
    assert_eq!(h.count(-1), 2);
    assert_eq!(h.total(), 4);
    assert!(h.is_symmetric());
}

#[test]
fn census_totals_and_symmetry() {
    for (n, d) in [(8u32, 3u32), (10, 10), (12, 5)] {
        let p = half(n);
        let h = shift_census(d, &p, &CensusScope::All).unwrap();
        assert_eq!(h.total(), h.expected_total());
        let binom: u128 = (0..d).fold(1u128, |a, i| a * u128::from(n - i) / u128::from(i + 1));
        assert_eq!(h.total(), binom << d);
        assert!(h.is_symmetric());
        let one = shift_census(d, &p, &CensusScope::One(IndexSet::full(d))).unwrap();
        assert_eq!(one.total(), 1u128 << d);
    }
}

#[test]
fn tau_is_bounded_by_the_coset_range() {
    let p = half(10);
    let j = IndexSet::full(10);
    let limit = 2f64.powi(5) - 1.0;
    for b in 0..1u64 << 10 {
        let t = tau(&j, &BitBlock::new(b, 10).unwrap(), &p).unwrap();
        if b == 0 || b == 1023 {
            assert!((t.abs() - limit).abs() < 1e-9);
        } else {
            assert!(t.abs() < limit - 1e-9);
        }
    }
}

#[test]
fn full_density_at_center() {
    let f = SpectrumGrid::from_fn(4096, closed_form_half_rate);
    let w = theoretical_w_pdf(WProfile::Full, &f, &half(20)).unwrap();
    assert!((w.eval(0.0) - 1.0 / (2.0 * (2.0 - 2f64.sqrt()))).abs() < 1e-3);
    assert!(w.eval(0.9999) < 1e-2);
    assert_eq!(w.eval(1.0), 0.0);
}

#[test]
fn gap_density_plateau() {
    let f = solve_asymptotic_ccs(0.5, 4096, 1e-9).unwrap();
    let w = theoretical_w_pdf(WProfile::GapAt(1), &f, &half(20)).unwrap();
    let peak = w.sample(512).iter().map(|s| s.1).fold(0.0, f64::max);
    assert!((peak - 1.0 / (2.0 * 2f64.sqrt() - 2.0)).abs() < 5e-3, "{peak}");
    let mass: f64 = w.sample(2048).iter().map(|s| s.1).sum::<f64>() * (2.0 / 2048.0);
    assert!((mass - 1.0).abs() < 1e-2);
    assert!(theoretical_w_pdf(WProfile::Generic { d: 5 }, &f, &half(20)).is_err());
}

#[test]
fn census_matches_theory_at_full_distance() {
    let p = half(16);
    let f = solve_asymptotic_ccs(0.5, 4096, 1e-9).unwrap();
    let th = theoretical_w_pdf(WProfile::Full, &f, &p).unwrap();
    let h = shift_census(16, &p, &CensusScope::All).unwrap();
    let l1: f64 = h.rebin(64).iter().map(|(w, v)| (v - th.eval(*w)).abs()).sum::<f64>() * (2.0 / 64.0);
    assert!(l1 <= 0.05, "{l1}");
}

#[test]
fn translation_identity_example() {
    let p = half(6);
    let x = bits("011010");
    let j = set(&[2, 3, 6]);
    let y = BitBlock::new(x.bits() ^ j.mask(), 6).unwrap();
    let t = tau(&j, &x.restrict(&j).unwrap(), &p).unwrap();
    let (ex, ey) = (encode(&x, &p).unwrap(), encode(&y, &p).unwrap());
    assert!((ey.ell - (ex.ell + t)).abs() < 1e-12);
}
