use num_traits::ToPrimitive;
use proptest::prelude::*;

use yamabe_core::bubble_functions::{sharp_constant, BubbleParams};
use yamabe_core::exact_integrals::{halfspace_closed_form, Convergence, IntegralSpec};
use yamabe_core::quadrature_oracle::{
    halfball_qmc, least_squares, reduced_2d, reduced_2d_log, sphere_mc, QuadratureConfig,
};

/// `σ_{n-2} · I` with `I = ∫₀^∞ s^n/(1+s²)^n ds`, from Beta values:
/// `I = Γ((n+1)/2) Γ((n-1)/2) / (2 Γ(n))`, `σ_k = 2π^{(k+1)/2}/Γ((k+1)/2)`.
fn unit(n: u32) -> f64 {
    let g = |x: f64| gamma(x);
    let nf = f64::from(n);
    let i = g((nf + 1.0) / 2.0) * g((nf - 1.0) / 2.0) / (2.0 * g(nf));
    let k = nf - 2.0;
    let sigma = 2.0 * std::f64::consts::PI.powf((k + 1.0) / 2.0) / g((k + 1.0) / 2.0);
    sigma * i
}

/// Gamma at integers and half-integers.
fn gamma(x: f64) -> f64 {
    if x.fract() == 0.0 {
        (1..x as u64).map(|k| k as f64).product()
    } else {
        let mut v = std::f64::consts::PI.sqrt();
        let mut t = 0.5;
        while t < x - 0.25 {
            v *= t;
            t += 1.0;
        }
        v
    }
}

fn convergent_specs() -> Vec<IntegralSpec> {
    let mut out = Vec::new();
    for n in [4u32, 5, 6, 7, 8, 9] {
        for (a, b, dc) in [(0, 0, 0), (2, 2, 1), (1, 4, 2), (3, 0, 1), (4, 4, 1)] {
            let spec = IntegralSpec::new(a, b, n + dc, n).unwrap();
            if spec.convergence() == Convergence::Convergent && out.len() < 20 {
                out.push(spec);
            }
        }
    }
    out
}

#[test]
fn error_estimates_are_honest() {
    let cfg = QuadratureConfig::default();
    let specs = convergent_specs();
    assert_eq!(specs.len(), 20);
    for spec in specs {
        let est = reduced_2d(spec, &cfg).unwrap();
        let exact = halfspace_closed_form(spec).unwrap().q().to_f64().unwrap() * unit(spec.n);
        let err = (est.value - exact).abs();
        assert!(
            err <= est.error.max(1e-15 * exact),
            "{spec:?}: actual {err:e}, claimed {:e}",
            est.error
        );
        assert!(
            est.error <= 1e-6 * exact,
            "{spec:?}: error bound {:e} too loose",
            est.error
        );
    }
}

#[test]
fn divergent_specs_are_refused() {
    let cfg = QuadratureConfig::default();
    let log = IntegralSpec::new(2, 4, 6, 6).unwrap();
    assert!(reduced_2d(log, &cfg).is_err());
    let conv = IntegralSpec::new(2, 4, 7, 7).unwrap();
    assert!(reduced_2d_log(conv, &[1e2, 1e3], &cfg).is_err());
    assert!(reduced_2d_log(log, &[1e3], &cfg).is_err());
    assert!(reduced_2d_log(log, &[1e3, 1e2], &cfg).is_err());
}

#[test]
fn log_slope_reproduces_coefficient() {
    let cfg = QuadratureConfig::default();
    let spec = IntegralSpec::new(0, 2, 4, 6).unwrap();
    let fit = reduced_2d_log(spec, &[1e4, 1e5, 1e6], &cfg).unwrap();
    let exact = halfspace_closed_form(spec).unwrap().q().to_f64().unwrap() * unit(6);
    assert!(
        (fit.slope - exact).abs() < 1e-2 * exact,
        "{fit:?} vs {exact}"
    );
}

#[test]
fn bubble_dirichlet_energy_over_half_ball() {
    // ∫_{B_δ⁺} |∇U_ε|² → (n-2) ∫_{∂ℝⁿ₊} U^{2(n-1)/(n-2)} as ε/δ → 0, with
    // relative defect of order (ε/δ)^{n-2}
    let n = 7;
    let cfg = QuadratureConfig {
        mc_samples: 1_000_000,
        radial_scale: Some(1e-3),
        ..Default::default()
    };
    let b = BubbleParams::flat(n, 1e-3, 0.25);
    let est = halfball_qmc(|x| b.grad_u(x).iter().map(|g| g * g).sum(), n, 0.25, &cfg).unwrap();
    let want = 5.0 * sharp_constant(n).unwrap().boundary_integral_value;
    assert!((est.value - want).abs() < 1e-2 * want, "{est:?} vs {want}");
}

#[test]
fn sampling_is_deterministic() {
    let cfg = QuadratureConfig {
        mc_samples: 50_000,
        seed: 17,
        ..Default::default()
    };
    let f = |x: &[f64]| x.iter().map(|v| v * v * v * v).sum::<f64>();
    let a = sphere_mc(f, 6, 1.0, &cfg).unwrap();
    let b = sphere_mc(f, 6, 1.0, &cfg).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    let c = halfball_qmc(f, 7, 1.0, &cfg).unwrap();
    let d = halfball_qmc(f, 7, 1.0, &cfg).unwrap();
    assert_eq!(c.value.to_bits(), d.value.to_bits());
    let other = sphere_mc(f, 6, 1.0, &QuadratureConfig { seed: 18, ..cfg }).unwrap();
    assert_ne!(a.value.to_bits(), other.value.to_bits());
}

#[test]
fn invalid_config_is_rejected() {
    let bad = QuadratureConfig {
        replicates: 1,
        ..Default::default()
    };
    assert!(sphere_mc(|_| 1.0, 3, 1.0, &bad).is_err());
    let bad = QuadratureConfig {
        rel_tol: 0.0,
        ..Default::default()
    };
    assert!(reduced_2d(IntegralSpec::new(0, 0, 7, 7).unwrap(), &bad).is_err());
}

proptest! {
    #[test]
    fn least_squares_recovers_lines(m in -10.0f64..10.0, b in -10.0f64..10.0, k in 2usize..8) {
        let xs: Vec<f64> = (0..k).map(|i| i as f64 * 0.7 + 1.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| m * x + b).collect();
        let (m2, b2, r) = least_squares(&xs, &ys);
        prop_assert!((m2 - m).abs() < 1e-9 && (b2 - b).abs() < 1e-9 && r < 1e-9);
    }
}
