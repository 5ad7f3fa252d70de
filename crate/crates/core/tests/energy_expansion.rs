use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use yamabe_core::curvature_model::{random_admissible, BoundaryCurvature};
use yamabe_core::energy_expansion::{
    amplitude_drop, certify, certify_with, coefficient_at, eval_rational, expansion, gamma,
    optimal_a, p_polynomial, w2_coefficient, Channel, ErrorClass,
};
use yamabe_core::exact_integrals::ScaledRational;
use yamabe_core::quadrature_oracle::QuadratureConfig;
use yamabe_core::Error;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `16(n+1)A² - 48(n-2)A + 2(8-n)(n-2)²`, lowest power first.
fn displayed_p(n: i64) -> Vec<BigRational> {
    vec![
        rat(2 * (8 - n) * (n - 2) * (n - 2), 1),
        rat(-48 * (n - 2), 1),
        rat(16 * (n + 1), 1),
    ]
}

/// The n = 6 form `(6(n-3)-4)/((n-1)(n-3)) A² - 2(n-2)/(n-1) A + (n-2)²(n-5)/(2(n-1)(n-3))`.
fn displayed_p6() -> Vec<BigRational> {
    let n = 6;
    vec![
        rat((n - 2) * (n - 2) * (n - 5), 2 * (n - 1) * (n - 3)),
        rat(-2 * (n - 2), n - 1),
        rat(6 * (n - 3) - 4, (n - 1) * (n - 3)),
    ]
}

/// `S` coefficient assembled by hand from the displayed closed forms of
/// I1..I4, in units of `σ I`, lowest power of `A` first. `D` is eliminated
/// through `D = -N2/2 - S`.
fn hand_assembled_s(
    n: i64,
    i1: BigRational,
    i2: BigRational,
    i3: BigRational,
    i4: BigRational,
) -> Vec<BigRational> {
    let pm = (n + 1) * (n - 1);
    let a0 = rat(-(n - 2) * (n - 2), pm) * &i1 + rat((n - 2) * (n - 2), 2 * (n - 1)) * &i4;
    let a1 = rat(-4 * n * (n - 2), pm) * &i3;
    let a2 = rat(-4, pm) * &i1 + rat(8 * n, pm) * &i2 + rat(12 * n, pm) * &i3;
    vec![a0, a1, a2]
}

#[test]
fn polynomial_matches_displayed_form_for_large_n() {
    for n in 7..=14i64 {
        let i1 = rat(2 * (n + 1), (n - 3) * (n - 4) * (n - 5) * (n - 6));
        let i2 = rat(3 * (n + 1), n * (n - 2) * (n - 3) * (n - 4) * (n - 5));
        let i3 = rat(
            12 * (n + 1),
            n * (n - 2) * (n - 3) * (n - 4) * (n - 5) * (n - 6),
        );
        let i4 = rat(24, (n - 2) * (n - 3) * (n - 4) * (n - 5) * (n - 6));
        let g = gamma(n as u32).unwrap();
        let hand: Vec<BigRational> = hand_assembled_s(n, i1, i2, i3, i4)
            .into_iter()
            .map(|c| c / &g)
            .collect();
        assert_eq!(hand, displayed_p(n), "n={n}");
        assert_eq!(p_polynomial(n as u32).unwrap(), hand, "n={n}");
    }
}

#[test]
fn polynomial_matches_displayed_form_for_n6() {
    let n = 6;
    let hand = hand_assembled_s(n, rat(7, 3), BigRational::zero(), rat(7, 12), rat(1, 1));
    assert_eq!(hand, displayed_p6());
    assert_eq!(p_polynomial(6).unwrap(), hand);
}

#[test]
fn w2_coefficients() {
    assert_eq!(
        w2_coefficient(7).unwrap(),
        ScaledRational::sigma_i(rat(-25, 576))
    );
    assert_eq!(
        w2_coefficient(8).unwrap(),
        ScaledRational::sigma_i(rat(-1, 70))
    );
    // -(n-2)/(48(n-1)²) · 4(n-1)(n-2)/((n-3)(n-5)) at n = 6
    let six = rat(-4, 48 * 25) * rat(4 * 5 * 4, 3);
    assert_eq!(
        w2_coefficient(6).unwrap(),
        ScaledRational::sigma_i_log(six.clone())
    );
    assert_eq!(six, rat(-4, 45));
}

#[test]
fn endgame_values() {
    let one = BigRational::one();
    assert_eq!(coefficient_at(7, &one).unwrap(), rat(-62, 1));
    assert_eq!(coefficient_at(8, &one).unwrap(), rat(-144, 1));
    assert_eq!(coefficient_at(6, &one).unwrap(), rat(-2, 15));
    assert!(matches!(
        coefficient_at(9, &one),
        Err(Error::PreconditionViolation(_))
    ));
    let opt: Vec<_> = [7, 8, 6].iter().map(|&n| optimal_a(n).unwrap()).collect();
    assert_eq!(
        (opt[0].a.clone(), opt[1].a.clone(), opt[2].a.clone()),
        (rat(15, 16), rat(1, 1), rat(6, 7))
    );
    assert_eq!(opt[0].p_value, rat(-125, 2));
}

#[test]
fn error_classes() {
    assert_eq!(expansion(6).unwrap().error_class, ErrorClass::Eps4DeltaM4);
    assert_eq!(expansion(7).unwrap().error_class, ErrorClass::Eps5Log);
    assert_eq!(expansion(8).unwrap().error_class, ErrorClass::Eps5);
    assert!(expansion(6).unwrap().log_channel);
    assert!(!expansion(7).unwrap().log_channel);
}

#[test]
fn certify_random_and_refusals() {
    let cfg = QuadratureConfig::default();
    for n in 6..=8 {
        let curv = random_admissible(n, 21, &rat(1, 1)).unwrap();
        let cert = certify(n, &curv, &cfg).unwrap();
        assert!(cert.verdict);
        assert!(cert.energy_coefficient.q().is_negative());
        assert!(cert.active_channels.contains(&Channel::S));
        assert!(cert.quadrature_residuals.iter().all(|r| r.passed));
        let json = serde_json::to_value(&cert).unwrap();
        assert!(json.get("P_value").is_some() && json.get("A_used").is_some());
    }
    let cfg = QuadratureConfig::default();
    let flat = BoundaryCurvature::zero(7).unwrap();
    assert!(matches!(
        certify(7, &flat, &cfg),
        Err(Error::PreconditionViolation(_))
    ));
    let curv = random_admissible(7, 1, &rat(1, 1)).unwrap();
    assert!(matches!(
        certify(8, &curv, &cfg),
        Err(Error::InvalidInput(_))
    ));
    let curv9 = random_admissible(9, 1, &rat(1, 1)).unwrap();
    assert!(matches!(
        certify(9, &curv9, &cfg),
        Err(Error::PreconditionViolation(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evaluate_matches_channel_sum(n in 6u32..9, seed in any::<u64>(), p in -6i64..6, q in 1i64..6) {
        let a = rat(p, q);
        let curv = random_admissible(n, seed, &rat(1, 1)).unwrap();
        let report = expansion(n).unwrap();
        let full = report.evaluate(&a, &curv).unwrap();
        let by_hand = report.c_s.eval(&a).unwrap().mul_rational(&curv.s()).unwrap()
            .checked_add(&report.c_w2.eval(&a).unwrap().mul_rational(&curv.w2()).unwrap()).unwrap();
        prop_assert_eq!(full, by_hand);
    }

    #[test]
    fn drop_is_antisymmetric_and_additive(n in 6u32..9, seed in any::<u64>(), a in -4i64..4, b in -4i64..4, c in -4i64..4) {
        let curv = random_admissible(n, seed, &rat(1, 1)).unwrap();
        let (a, b, c) = (rat(a, 2), rat(b, 2), rat(c, 2));
        let ab = amplitude_drop(n, &curv, &a, &b).unwrap();
        let bc = amplitude_drop(n, &curv, &b, &c).unwrap();
        prop_assert_eq!(ab.checked_add(&bc).unwrap(), amplitude_drop(n, &curv, &a, &c).unwrap());
        prop_assert!(ab.checked_add(&amplitude_drop(n, &curv, &b, &a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn vertex_minimizes(n in 6u32..9, p in -20i64..20, q in 1i64..10) {
        let o = optimal_a(n).unwrap();
        let poly = p_polynomial(n).unwrap();
        prop_assert!(eval_rational(&poly, &rat(p, q)) >= o.p_value);
    }

    #[test]
    fn certificate_holds_at_unit_amplitude(n in 6u32..9, seed in 0u64..1000) {
        // P(1) < 0 and W ≠ 0 make the coefficient negative at A = 1
        let curv = random_admissible(n, seed, &rat(1, 1)).unwrap();
        let cert = certify_with(n, &curv, &BigRational::one(), &QuadratureConfig::default()).unwrap();
        prop_assert!(cert.verdict);
        prop_assert!(cert.p_value < BigRational::zero());
    }
}
