use oac_core::bitseq::{encode, partition_cosets, BitBlock};
use oac_core::ccs::{solve_asymptotic_ccs, ccs_square_integral};
use oac_core::hds::*;
use oac_core::{Budget, CodeParams};

/// `Σ_x Σ_y 1[m(x) = m(y), d(x, y) = d]` by the quadratic definition.
fn brute_counts(p: &CodeParams) -> Vec<u128> {
    let n = p.n();
    let m: Vec<u64> = (0..1u64 << n)
        .map(|b| encode(&BitBlock::new(b, n).unwrap(), p).unwrap().m)
        .collect();
    let mut c = vec![0u128; n as usize + 1];
    for x in 0..m.len() {
        for y in 0..m.len() {
            if m[x] == m[y] {
                c[(x ^ y).count_ones() as usize] += 1;
            }
        }
    }
    c
}

#[test]
fn four_bit_example_is_exact() {
    let p = CodeParams::new(4, 0.5).unwrap();
    let t = hds_exhaustive(&p).unwrap();
    let counts: Vec<u128> = (0..=4).map(|d| t.pair_count(d).unwrap()).collect();
    // [1, 5/4, 7/4, 3/4, 3/8] over the denominator 16.
    assert_eq!(counts, vec![16, 20, 28, 12, 6]);
    assert_eq!(t.psi(4), Some(0.375));
    assert_eq!(t.total(), 82.0 / 16.0);
}

#[test]
fn exhaustive_matches_quadratic_definition() {
    for (n, r) in [(6u32, 0.5), (8, 0.5), (8, 0.25), (9, 1.0 / 3.0), (10, 0.8), (10, 0.5)] {
        let p = CodeParams::new(n, r).unwrap();
        let t = hds_exhaustive(&p).unwrap();
        let want = brute_counts(&p);
        for d in 0..=n {
            assert_eq!(t.pair_count(d), Some(want[d as usize]), "n={n} r={r} d={d}");
        }
    }
}

#[test]
fn codeword_counts_from_example() {
    let p = CodeParams::new(4, 0.5).unwrap();
    let cp = partition_cosets(&p).unwrap();
    let k = |w: &str, d| codeword_hds(&w.parse().unwrap(), d, &cp).unwrap();
    assert_eq!([k("0001", 1), k("0001", 2), k("0001", 3), k("0001", 4)], [1, 2, 0, 0]);
    assert_eq!([k("0011", 1), k("0011", 2), k("0011", 3)], [2, 0, 1]);
    assert_eq!([k("0100", 1), k("0100", 2), k("0100", 3)], [0, 2, 1]);
    assert_eq!(k("0100", 0), 1);
}

#[test]
fn sixteen_bit_reference_values() {
    // Counts from an independent high-precision enumeration.
    let p = CodeParams::new(16, 0.5).unwrap();
    let t = hds_exhaustive(&p).unwrap();
    let reference = [
        (1u32, 1.17157),
        (2, 2.25745),
        (3, 5.58789),
        (8, 62.5453),
        (13, 2.04651),
        (14, 0.481018),
        (16, 0.006653),
    ];
    for (d, want) in reference {
        let got = t.psi(d).unwrap();
        assert!((got - want).abs() < 5e-6 * want.max(1.0), "d={d}: {got}");
    }
    assert_eq!(t.pair_count(15), Some(2500));
}

#[test]
fn identities_hold() {
    for n in [4u32, 8, 12] {
        let p = CodeParams::new(n, 0.5).unwrap();
        let cp = partition_cosets(&p).unwrap();
        let t = hds_exhaustive_from(&cp, &Budget::default()).unwrap();
        let rep = hds_identities_check(&t, &cp, None).unwrap();
        assert!(rep.strict);
        assert!(rep.sum_psi > rep.lower_bound);
        assert_eq!(rep.cosets_checked, cp.coset_count());
    }
}

#[test]
fn hard_is_exact_at_full_distance() {
    for n in [8u32, 12, 16] {
        let p = CodeParams::new(n, 0.5).unwrap();
        let t = hds_exhaustive(&p).unwrap();
        let h = hds_hard(&p, n..=n, &Budget::default()).unwrap();
        assert!((h.psi(n).unwrap() - t.psi(n).unwrap()).abs() < 1e-15, "n={n}");
    }
}

#[test]
fn soft_tracks_exhaustive_for_small_distances() {
    let p = CodeParams::new(16, 0.5).unwrap();
    let t = hds_exhaustive(&p).unwrap();
    let s = hds_soft(&p, 1..=13, &Budget::default()).unwrap();
    for d in 1..=13 {
        let (a, b) = (s.psi(d).unwrap(), t.psi(d).unwrap());
        assert!((a - b).abs() <= 0.1 * b, "d={d}: soft {a} exhaustive {b}");
    }
}

#[test]
fn soft_and_hard_agree_for_large_distances() {
    let p = CodeParams::new(14, 0.5).unwrap();
    let (s, h) = hds_soft_hard(&p, 8..=14, &Budget::default()).unwrap();
    for d in 8..=14 {
        let (a, b) = (s.psi(d).unwrap(), h.psi(d).unwrap());
        assert!((a - b).abs() <= 0.1 * a.max(b) + 1e-12, "d={d}: {a} {b}");
    }
}

#[test]
fn fast_and_binomial_formulas() {
    let f = solve_asymptotic_ccs(0.5, 4096, 1e-9).unwrap();
    let p = CodeParams::new(20, 0.5).unwrap();
    let fast = hds_fast(&p, &f, 15..=20, None).unwrap();
    let psi20 = fast.psi(20).unwrap();
    assert!((psi20 - 0.0017).abs() <= 5e-5, "{psi20}");
    // 2^{1−nr−1}·f(1/2) with f(1/2) = 1/(2 − √2)
    let want = 2f64.powi(-10) / (2.0 - 2f64.sqrt());
    assert!((psi20 - want).abs() < 1e-3 * want);
    let b = hds_binomial(&p, &f);
    let sq = ccs_square_integral(&f);
    assert!((b.psi(10).unwrap() - 184756.0 * sq / 1024.0).abs() < 1e-9);
    assert!(hds_fast(&p, &f, 3..=3, None).is_err());
}

#[test]
fn mixed_plan_selects_methods() {
    let f = solve_asymptotic_ccs(0.5, 4096, 1e-9).unwrap();
    let p = CodeParams::new(16, 0.5).unwrap();
    let plan = MixedPlan::for_n(16);
    let t = hds_mixed(&p, &f, plan, &Budget::default()).unwrap();
    assert_eq!(t.method_at(2), Some(Method::Soft));
    assert_eq!(t.method_at(8), Some(Method::Binomial));
    assert_eq!(t.method_at(16), Some(Method::Fast));
    assert_eq!(t.rows().count(), 17);
}

#[test]
fn flip_route_at_twenty_four_bits_small_d() {
    let p = CodeParams::new(24, 0.5).unwrap();
    let (psi1, _) = hds_exhaustive_at(&p, 1, &Budget::default()).unwrap();
    let c1 = oac_core::convergence::psi1_closed(0.5).unwrap().value;
    assert!((psi1 - c1).abs() <= 0.02, "{psi1} vs {c1}");
}
