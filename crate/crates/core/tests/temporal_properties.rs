//! Walk-off budget identities over random chips and fibres.

use pairsource::temporal::{
    compensation_fiber_length, effective_length, fiber_delay, residual_delay, residual_indistinguishability,
    walkoff_delay, GroupIndices, WalkoffBudget, WalkoffSpec,
};
use pairsource::units::{Length, TimeSpan, SPEED_OF_LIGHT};
use proptest::prelude::*;

fn spec(chip_mm: f64, poled_frac: f64, dn: f64, b: f64) -> WalkoffSpec {
    WalkoffSpec {
        group_indices: GroupIndices::Difference(dn),
        chip_length: Length::from_mm(chip_mm),
        poled_length: Length::from_mm(chip_mm * poled_frac),
        fiber_birefringence: b,
        coherence_time: TimeSpan::from_ps(5.0),
    }
}

#[test]
fn fabricated_chip_by_hand() {
    let s = WalkoffSpec::fabricated(TimeSpan::from_ps(10.0));
    // 0.07544 · 0.037 m / c
    let by_hand = 0.07544 * 0.037 / 299_792_458.0 * 1e12;
    assert!((walkoff_delay(&s).ps() - by_hand).abs() < 1e-12);
    let l = compensation_fiber_length(walkoff_delay(&s), 4.016e-4).unwrap();
    assert!((l.m() - by_hand * 1e-12 * 299_792_458.0 / 4.016e-4).abs() < 1e-12);
}

#[test]
fn pair_and_difference_agree() {
    let mut a = WalkoffSpec::fabricated(TimeSpan::from_ps(10.0));
    let mut b = a;
    a.group_indices = GroupIndices::Pair { h: 2.2, v: 2.2 - 0.07544 };
    b.group_indices = GroupIndices::Difference(0.07544);
    assert!((walkoff_delay(&a).ps() - walkoff_delay(&b).ps()).abs() < 1e-9);
}

proptest! {
    #[test]
    fn effective_length_is_chip_minus_half_poled(chip in 1.0..100.0f64, frac in 0.01..1.0f64) {
        let s = spec(chip, frac, 0.07, 4e-4);
        prop_assert!((effective_length(&s).mm() - chip * (1.0 - frac / 2.0)).abs() < 1e-9);
    }

    #[test]
    fn compensating_fibre_cancels_delay(chip in 1.0..100.0f64, frac in 0.01..1.0f64, dn in 0.001..0.2f64, b in 1e-5..1e-3f64) {
        let s = spec(chip, frac, dn, b);
        let budget = WalkoffBudget::compute(&s, None).unwrap();
        prop_assert!(budget.residual_delay.ps().abs() <= 1e-12 * budget.walkoff_delay.ps());
        prop_assert!((budget.residual_indistinguishability - 1.0).abs() < 1e-12);
        let expected_m = dn * effective_length(&s).m() / b;
        prop_assert!((budget.fiber_length.m() - expected_m).abs() < 1e-9 * expected_m);
    }

    #[test]
    fn fibre_delay_is_linear(len in 0.0..50.0f64, b in 1e-5..1e-3f64) {
        let d = fiber_delay(Length::from_m(len), b).ps();
        prop_assert!((d - b * len / SPEED_OF_LIGHT * 1e12).abs() < 1e-9 * (1.0 + d));
    }

    #[test]
    fn indistinguishability_falls_with_residual(a in 0.0..20.0f64, extra in 0.001..20.0f64, tau in 0.5..30.0f64) {
        let tc = TimeSpan::from_ps(tau);
        let near = residual_indistinguishability(TimeSpan::from_ps(a), tc).unwrap();
        let far = residual_indistinguishability(TimeSpan::from_ps(a + extra), tc).unwrap();
        let neg = residual_indistinguishability(TimeSpan::from_ps(-a), tc).unwrap();
        prop_assert!(near <= 1.0 && (0.0..=near).contains(&far));
        // strict until exp(−x²/2) underflows to 0
        if far > 0.0 {
            prop_assert!(far < near);
        }
        prop_assert!((near - neg).abs() < 1e-15);
    }

    #[test]
    fn miscut_fibre_leaves_proportional_residual(cm in -50.0..50.0f64) {
        let s = WalkoffSpec::fabricated(TimeSpan::from_ps(10.0));
        let chip = walkoff_delay(&s);
        let ideal = compensation_fiber_length(chip, s.fiber_birefringence).unwrap();
        let cut = Length::from_m(ideal.m() + cm / 100.0);
        let r = residual_delay(chip, cut, s.fiber_birefringence).ps();
        prop_assert!((r + fiber_delay(Length::from_m(cm / 100.0), s.fiber_birefringence).ps()).abs() < 1e-9);
    }
}
