use oac_core::bitseq::{partition_cosets, projection_trace, BitBlock};
use oac_core::ccs::*;
use oac_core::{Budget, CodeParams};

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[test]
fn closed_form_shape() {
    assert_eq!(closed_form_half_rate(0.0), 0.0);
    assert!((closed_form_half_rate(0.5) - 1.0 / (2.0 - SQRT2)).abs() < 1e-12);
    assert!((closed_form_half_rate(0.25) - closed_form_half_rate(0.75)).abs() < 1e-12);
    let want = 1.0 / (3.0 * (SQRT2 - 1.0)) + 0.5;
    assert!((closed_form_half_rate_square_integral() - want).abs() < 1e-12);
    assert!((want - 1.30474).abs() < 1e-5);
}

#[test]
fn solver_matches_closed_form() {
    let f = solve_asymptotic_ccs(0.5, 4096, 1e-9).unwrap();
    let cf = SpectrumGrid::from_fn(4096, closed_form_half_rate);
    assert!(f.linf_distance(&cf) <= 1e-3);
    assert!((ccs_square_integral(&f) - 1.30474).abs() <= 1e-3);
    assert!((f.mass() - 1.0).abs() < 1e-9);
    for b in 0..4096 {
        assert!((f.values()[b] - f.values()[4095 - b]).abs() < 1e-6);
    }
    assert!(fixed_point_residual(&f, 0.5) <= 1e-9 * 10.0);
}

#[test]
fn rate_one_is_uniform() {
    let f = solve_asymptotic_ccs(1.0, 256, 1e-9).unwrap();
    assert!(f.values().iter().all(|&v| (v - 1.0).abs() < 1e-9));
    assert!((ccs_square_integral(&f) - 1.0).abs() < 1e-9);
    let p = CodeParams::new(8, 1.0).unwrap();
    for level in backward_ccs(&p, 128).unwrap() {
        assert!(level.values().iter().all(|&v| (v - 1.0).abs() < 1e-9));
    }
    assert!((coset_size_estimate(17, &p, &f).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn third_rate_is_stable_under_refinement() {
    let a = ccs_square_integral(&solve_asymptotic_ccs(1.0 / 3.0, 4096, 1e-9).unwrap());
    let b = ccs_square_integral(&solve_asymptotic_ccs(1.0 / 3.0, 8192, 1e-9).unwrap());
    assert!(a >= 1.0);
    assert!((a - b).abs() <= 1e-4, "{a} {b}");
}

#[test]
fn backward_recursion_reaches_the_fixed_point() {
    let p = CodeParams::new(20, 0.5).unwrap();
    let levels = backward_ccs(&p, 4096).unwrap();
    assert_eq!(levels.len(), 21);
    for g in &levels {
        assert!((g.mass() - 1.0).abs() < 1e-9);
    }
    let f = solve_asymptotic_ccs(0.5, 4096, 1e-9).unwrap();
    assert!(levels[0].linf_distance(&f) <= 5e-3);
    assert!(levels[20].values().iter().all(|&v| (v - 1.0).abs() < 1e-12));
}

#[test]
fn empirical_spectrum() {
    let p = CodeParams::new(20, 0.5).unwrap();
    let counts = empirical_ccs_counts(&p, 1024, &Budget::default()).unwrap();
    assert_eq!(counts.iter().sum::<u64>(), 1 << 20);
    let e = empirical_ccs(&p, 1024).unwrap();
    let cf = SpectrumGrid::from_fn(1024, closed_form_half_rate);
    assert!(e.l1_distance(&cf) <= 0.02);
}

#[test]
fn single_bit_rate_one_has_two_atoms() {
    let p = CodeParams::new(1, 1.0).unwrap();
    let counts = empirical_ccs_counts(&p, 64, &Budget::default()).unwrap();
    assert_eq!(counts[0], 1);
    assert_eq!(counts[32], 1);
    assert_eq!(counts.iter().sum::<u64>(), 2);
}

#[test]
fn final_projection_is_uniform() {
    let p = CodeParams::new(20, 0.5).unwrap();
    let u = final_projection_density(&p, 64, &Budget::default()).unwrap();
    assert!(u.l1_distance(&SpectrumGrid::uniform(64)) <= 0.05);
}

#[test]
fn projection_trace_example() {
    let p = CodeParams::new(4, 0.5).unwrap();
    let t = projection_trace(&"0001".parse().unwrap(), &p).unwrap();
    assert!((t.u[0] - 0.25).abs() < 1e-15);
    assert!((t.u[4] - (1.0 - (SQRT2 - 1.0))).abs() < 1e-12);
    let z = projection_trace(&BitBlock::zeros(6), &CodeParams::new(6, 0.5).unwrap()).unwrap();
    assert!(z.u.iter().all(|&v| v == 0.0));
}

#[test]
fn coset_size_estimate_against_partition() {
    let p = CodeParams::new(20, 0.5).unwrap();
    let f = solve_asymptotic_ccs(0.5, 4096, 1e-9).unwrap();
    let est = coset_size_estimate(512, &p, &f).unwrap();
    assert!((est - 1748.0).abs() < 2.0, "{est}");
    let exact = partition_cosets(&p).unwrap().size(512) as f64;
    assert!((est - exact).abs() <= 0.1 * exact);
    assert_eq!(coset_size_estimate(0, &p, &f).unwrap(), 0.0);
}

#[test]
fn grid_validation() {
    assert!(SpectrumGrid::from_values(vec![]).is_err());
    assert!(solve_asymptotic_ccs(0.5, 8, 1e-9).is_err());
    assert!(SpectrumGrid::from_values(vec![-1.0; 64]).is_err());
    let g = SpectrumGrid::uniform(64);
    assert_eq!(g.eval(-0.1), 0.0);
    assert_eq!(g.eval(1.0), 0.0);
    assert!((g.eval(0.3) - 1.0).abs() < 1e-12);
}
