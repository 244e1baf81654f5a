//! Sweep shape, determinism and the decomposition audit.

use cisc_core::mi::qpsk_mi;
use cisc_core::rates::{
    audit_decomposition, rate_b_contrib, rate_delta, rate_q_contrib, rate_total,
    rhombic_mi_monte_carlo, sweep, GridSpec,
};
use proptest::prelude::*;

#[test]
fn log_grid_gain_is_positive_inside() {
    let curve = sweep(&"log:1e-3:1e3:61".parse().unwrap()).unwrap();
    let n = curve.points.len();
    for p in &curve.points[1..n - 1] {
        assert!(p.delta > 0.0, "gamma={} delta={}", p.gamma, p.delta);
    }
}

#[test]
fn db_grid_total_is_monotone() {
    let curve = sweep(&"db:-20:20:1".parse().unwrap()).unwrap();
    assert_eq!(curve.points.len(), 41);
    for w in curve.points.windows(2) {
        assert!(
            w[1].r_total >= w[0].r_total,
            "{} -> {}",
            w[0].gamma,
            w[1].gamma
        );
    }
    assert!((curve.points[20].gamma - 1.0).abs() < 1e-12);
}

#[test]
fn sweep_is_bit_identical() {
    let g = GridSpec::default_linear();
    assert_eq!(sweep(&g).unwrap().to_csv(), sweep(&g).unwrap().to_csv());
}

#[test]
fn audit_at_unit_snr_cross_checked() {
    let a = audit_decomposition(1.0).unwrap();
    assert_eq!(a.nominal_total, rate_total(1.0).unwrap());
    assert!((a.rhombic_mi_plus_step2 - (0.8 * a.rhombic_mi + 0.2 * a.step2_mi)).abs() < 1e-15);
    let mc = rhombic_mi_monte_carlo(1.0, 1_000_000, 31).unwrap();
    assert!((a.rhombic_mi - mc.value).abs() <= 3.0 * mc.std_error);
    // Both numbers are reported; neither is asserted against the other.
    assert!(a.nominal_total > 0.0 && a.rhombic_mi_plus_step2 > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn structural_identities(gamma in 0.0f64..200.0) {
        let q = rate_q_contrib(gamma).unwrap();
        let b = rate_b_contrib(gamma).unwrap();
        let t = rate_total(gamma).unwrap();
        prop_assert_eq!(t, q + b);
        prop_assert!((rate_delta(gamma).unwrap() - (t - qpsk_mi(gamma).unwrap().value)).abs() <= 1e-15);
        prop_assert!(q >= 0.0 && b >= 0.0 && t <= 2.0 + 1e-12);
    }

    #[test]
    fn total_is_monotone(a in 0.0f64..60.0, b in 0.0f64..60.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(rate_total(lo).unwrap() <= rate_total(hi).unwrap());
    }
}
