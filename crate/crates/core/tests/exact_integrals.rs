use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

use yamabe_core::exact_integrals::{
    boundary_bubble_integral, expansion_integrals, half_line_normal_form, half_line_ratio,
    halfspace_closed_form, unit_interval_power_integral, Convergence, IntegralSpec, ScaledRational,
};
use yamabe_core::{Divergence, Error};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn factorial(k: i64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Composite Gauss-Legendre (5 points) on `[a, b]` with `panels` panels.
fn gauss(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let c = a + (p as f64 + 0.5) * h;
            X.iter()
                .zip(W)
                .map(|(x, w)| w * f(c + 0.5 * h * x))
                .sum::<f64>()
                * 0.5
                * h
        })
        .sum()
}

/// `J(α, m) = ∫₀^∞ s^α/(1+s²)^m ds` via `s = tan θ`.
fn j_numeric(alpha: i64, m: i64) -> f64 {
    let p = alpha as i32;
    let q = (2 * m - alpha - 2) as i32;
    gauss(
        |t| t.sin().powi(p) * t.cos().powi(q),
        0.0,
        std::f64::consts::FRAC_PI_2,
        200,
    )
}

#[test]
fn half_line_matches_quadrature() {
    let j = |p: i64| j_numeric(p, p + 1);
    for alpha in 0..12i64 {
        for m in (alpha / 2 + 1 + alpha % 2)..(alpha / 2 + 6) {
            let (q, p) = half_line_normal_form(alpha, m).unwrap();
            let want = j_numeric(alpha, m);
            let got = q.to_f64().unwrap() * j(i64::from(p));
            assert!(
                (got - want).abs() < 1e-12 * want,
                "J({alpha},{m}): {got} vs {want}"
            );
        }
    }
}

#[test]
fn unit_interval_divergence_classes() {
    assert!(matches!(
        unit_interval_power_integral(2, 3),
        Err(Error::DivergentIntegral(Divergence::Logarithmic))
    ));
    assert!(matches!(
        unit_interval_power_integral(2, 2),
        Err(Error::DivergentIntegral(Divergence::Power))
    ));
    assert!(matches!(
        half_line_normal_form(5, 3),
        Err(Error::DivergentIntegral(Divergence::Logarithmic))
    ));
    assert!(matches!(
        half_line_ratio(2, 3, 3, 3),
        Err(Error::ParityMismatch { .. })
    ));
}

#[test]
fn known_table_values() {
    let unit = |n: u32| {
        expansion_integrals(n)
            .unwrap()
            .into_iter()
            .map(|e| e.value)
            .collect::<Vec<_>>()
    };
    let s = |p, q| ScaledRational::sigma_i(rat(p, q));
    assert_eq!(
        unit(7),
        vec![s(2, 3), s(1, 35), s(4, 35), s(1, 5), s(5, 3), s(15, 1)]
    );
    assert_eq!(
        unit(8),
        vec![s(3, 20), s(3, 320), s(3, 160), s(1, 30), s(2, 5), s(28, 5)]
    );
    let six = expansion_integrals(6).unwrap();
    assert_eq!(six[1].value, s(7, 48));
    assert!(six[1].log_coefficient().unwrap().is_zero());
    for e in &six {
        let want = if e.label == "I2" {
            Convergence::Convergent
        } else {
            Convergence::LogDivergent
        };
        assert_eq!(e.spec.convergence(), want, "{}", e.label);
    }
    assert!(matches!(
        expansion_integrals(5),
        Err(Error::PreconditionViolation(_))
    ));
}

#[test]
fn boundary_bubble_integral_matches_quadrature() {
    for n in 4..10u32 {
        let q = boundary_bubble_integral(n).unwrap();
        let i = j_numeric(i64::from(n), i64::from(n));
        let want = j_numeric(i64::from(n) - 2, i64::from(n) - 1) / i;
        assert!((q.q().to_f64().unwrap() - want).abs() < 1e-12);
    }
}

#[test]
fn closed_form_matches_two_dimensional_quadrature() {
    // y_n on [0, ∞) via t = u/(1-u); ȳ radial via s = tan θ.
    for n in [4u32, 5, 7, 9] {
        for (a, b, c) in [(0, 0, n), (1, 2, n + 1), (2, 0, n), (0, 2, n + 1)] {
            let spec = IntegralSpec::new(a, b, c, n).unwrap();
            if spec.convergence() != Convergence::Convergent {
                continue;
            }
            let exact = halfspace_closed_form(spec).unwrap().q().to_f64().unwrap()
                * j_numeric(i64::from(n), i64::from(n));
            let num = gauss(
                |u| {
                    let t = u / (1.0 - u);
                    let jac = 1.0 / ((1.0 - u) * (1.0 - u));
                    gauss(
                        |th| {
                            let r = th.tan();
                            let sec2 = 1.0 + r * r;
                            spec.integrand(t, r) * r.powi(n as i32 - 2) * sec2
                        },
                        0.0,
                        std::f64::consts::FRAC_PI_2,
                        400,
                    ) * jac
                },
                0.0,
                1.0,
                400,
            );
            assert!(
                (num - exact).abs() < 1e-7 * exact,
                "{spec:?}: {num} vs {exact}"
            );
        }
    }
}

proptest! {
    #[test]
    fn unit_interval_is_a_beta_value(k in 0u32..10, extra in 2i64..10) {
        let m = i64::from(k) + extra;
        let beta = BigRational::new(factorial(i64::from(k)) * factorial(m - i64::from(k) - 2), factorial(m - 1));
        prop_assert_eq!(unit_interval_power_integral(k, m).unwrap(), beta);
    }

    #[test]
    fn alpha_recursion(alpha in 2i64..20, extra in 1i64..6) {
        let m = (alpha + 1) / 2 + extra;
        let r = half_line_ratio(alpha, m, alpha - 2, m - 1).unwrap();
        prop_assert_eq!(r, rat(alpha - 1, 2 * (m - 1)));
    }

    #[test]
    fn m_recursion(alpha in 0i64..20, extra in 2i64..6) {
        let m = (alpha + 1) / 2 + extra;
        let r = half_line_ratio(alpha, m, alpha, m - 1).unwrap();
        prop_assert_eq!(r, rat(2 * m - alpha - 3, 2 * (m - 1)));
    }

    #[test]
    fn ratio_is_multiplicative(a in 0i64..8, b in 0i64..8, c in 0i64..8) {
        let (a, b, c) = (2 * a, 2 * b, 2 * c);
        let m = |x: i64| x / 2 + 3;
        let ab = half_line_ratio(a, m(a), b, m(b)).unwrap();
        let bc = half_line_ratio(b, m(b), c, m(c)).unwrap();
        prop_assert_eq!(ab * bc, half_line_ratio(a, m(a), c, m(c)).unwrap());
    }

    #[test]
    fn table_values_are_positive(n in 7u32..20) {
        for e in expansion_integrals(n).unwrap() {
            prop_assert!(e.value.q() > &BigRational::zero());
            prop_assert!(!e.value.log_flag());
        }
    }
}
