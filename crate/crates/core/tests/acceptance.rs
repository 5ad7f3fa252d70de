//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line
//! with its measured figures; the test fails if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use yamabe_core::bubble_functions::{sharp_constant, BubbleParams};
use yamabe_core::curvature_model::{
    random_admissible, random_admissible_with_jets, weyl_decompose, BoundaryCurvature,
    JetEvaluator, Tensor,
};
use yamabe_core::discrete_quotient::{evaluate_quotient, sweep, QuotientConfig};
use yamabe_core::energy_expansion::{
    coefficient_at, eval_rational, expansion, optimal_a, p_polynomial,
};
use yamabe_core::exact_integrals::{expansion_integrals, find, ScaledRational};
use yamabe_core::quadrature_oracle::{reduced_2d, reduced_2d_log, sphere_mc, QuadratureConfig};
use yamabe_core::sphere_moments::curvature_moments;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

type Outcome = Result<String, String>;
type Integrand<'a> = Box<dyn Fn(&[f64]) -> f64 + Sync + 'a>;
type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let one = BigRational::one();
    let got: Vec<BigRational> = [7, 8, 6]
        .iter()
        .map(|&n| coefficient_at(n, &one).unwrap())
        .collect();
    let want = [rat(-62, 1), rat(-144, 1), rat(-2, 15)];
    check(got == want, || format!("P(1) = {got:?}"))?;
    Ok(format!(
        "P(1): n=7 {}, n=8 {}, n=6 {}",
        got[0], got[1], got[2]
    ))
}

/// Closed forms as displayed for n ≥ 7, in units of σI.
fn displayed_table(n: i64) -> [BigRational; 5] {
    let f = |p: i64, q: i64| rat(p, q);
    [
        f(2 * (n + 1), (n - 3) * (n - 4) * (n - 5) * (n - 6)),
        f(3 * (n + 1), n * (n - 2) * (n - 3) * (n - 4) * (n - 5)),
        f(
            12 * (n + 1),
            n * (n - 2) * (n - 3) * (n - 4) * (n - 5) * (n - 6),
        ),
        f(24, (n - 2) * (n - 3) * (n - 4) * (n - 5) * (n - 6)),
        f(8 * (n - 2), (n - 3) * (n - 4) * (n - 5) * (n - 6)),
    ]
}

fn criterion_2() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst = 0.0f64;
    for n in [7u32, 8] {
        let table = expansion_integrals(n).map_err(|e| e.to_string())?;
        for (k, want) in displayed_table(i64::from(n)).iter().enumerate() {
            let label = format!("I{}", k + 1);
            let e = find(&table, &label).unwrap();
            check(e.value == ScaledRational::sigma_i(want.clone()), || {
                format!("n={n} {label}: {} vs {want}", e.value)
            })?;
            let est = reduced_2d(e.spec, &cfg).map_err(|e| e.to_string())?;
            let exact = e.value.to_f64(n, 1.0).unwrap();
            let rel = (est.value - exact).abs() / exact;
            worst = worst.max(rel);
            check(rel < 1e-6, || {
                format!("n={n} {label}: quadrature rel error {rel:e}")
            })?;
        }
    }
    // n = 6: (n+1)/(n-3), O(1), (n+1)/(2n), 1, 4(n-2)/(n-3), 4(n-1)(n-2)/((n-3)(n-5))
    let want6 = [
        rat(7, 3),
        rat(0, 1),
        rat(7, 12),
        rat(1, 1),
        rat(16, 3),
        rat(80, 3),
    ];
    let table = expansion_integrals(6).map_err(|e| e.to_string())?;
    let mut worst_slope = 0.0f64;
    for (k, want) in want6.iter().enumerate() {
        let e = &table[k];
        let log = e.log_coefficient().map_err(|e| e.to_string())?;
        check(log == ScaledRational::sigma_i_log(want.clone()), || {
            format!("n=6 {}: log coefficient {log} vs {want}", e.label)
        })?;
        if want.is_zero() {
            continue;
        }
        let fit = reduced_2d_log(e.spec, &[1e4, 1e5, 1e6], &cfg).map_err(|e| e.to_string())?;
        let exact = log.to_f64(6, 1.0).unwrap();
        let rel = (fit.slope - exact).abs() / exact;
        worst_slope = worst_slope.max(rel);
        check(rel < 0.01, || {
            format!("n=6 {}: slope rel error {rel}", e.label)
        })?;
    }
    Ok(format!(
        "table exact; worst quadrature rel error {worst:.1e}, worst n=6 slope rel error {worst_slope:.1e}"
    ))
}

fn criterion_3() -> Outcome {
    for n in [6, 7, 8] {
        let r = expansion(n).map_err(|e| e.to_string())?;
        check(r.c_d.is_zero() && r.c_n2.is_zero(), || {
            format!("n={n}: D={} N2={}", r.c_d, r.c_n2)
        })?;
    }
    Ok("c_D = c_N2 = 0 as polynomials in A for n = 6, 7, 8".into())
}

#[derive(Default)]
struct MomentStats {
    worst: f64,
    rechecked: Vec<String>,
    failures: Vec<String>,
}

/// Independent streams for dataset `seed`, average `k`; the confirmation
/// run uses a disjoint seed range.
fn moment_cfg(seed: u64, k: u64, confirm: bool) -> QuadratureConfig {
    QuadratureConfig {
        mc_samples: if confirm { 200_000 } else { 20_000 },
        seed: seed * 4 + k + if confirm { 1 << 40 } else { 0 },
        ..Default::default()
    }
}

/// Monte Carlo of the three spherical averages at one `(ε, y_n, r)`,
/// against the full truncated-jet value (leading plus higher order).
///
/// A comparison beyond 3σ is repeated once on an independent stream with
/// ten times the samples, and passes only if that run is within 3σ too.
/// A genuine bias grows by √10 in σ units on the repeat.
fn moment_mc(curv: &BoundaryCurvature, seed: u64, stats: &mut MomentStats) -> Result<(), String> {
    let n = curv.n();
    let m = curv.m();
    let moments = curvature_moments(curv).map_err(|e| e.to_string())?;
    for (name, c) in [
        ("metric", &moments.metric),
        ("weighted", &moments.weighted),
        ("scalar", &moments.scalar),
    ] {
        check(c.from_jet == c.closed_form, || {
            format!("n={n} seed={seed} {name}: jet and closed form differ")
        })?;
    }
    let jet = JetEvaluator::new(curv, 4).map_err(|e| e.to_string())?;
    let rn = curv.rn().to_f64();
    let (eps, yn, r) = (0.3, 0.7, 1.1);
    let x_of = |y: &[f64]| y.iter().map(|v| eps * v).collect::<Vec<f64>>();
    let form = |y: &[f64]| -> f64 {
        (0..m)
            .map(|i| (0..m).map(|j| rn[i * m + j] * y[i] * y[j]).sum::<f64>())
            .sum()
    };
    let metric = |y: &[f64]| {
        let mut sc = jet.scratch();
        jet.metric_correction(&x_of(y), eps * yn, y, &mut sc)
    };
    let cases: [(&str, Integrand, _); 3] = [
        ("metric", Box::new(metric), &moments.metric),
        (
            "weighted",
            Box::new(move |y: &[f64]| metric(y) * form(y)),
            &moments.weighted,
        ),
        (
            "scalar",
            Box::new(|y: &[f64]| jet.scalar_curvature(&x_of(y), eps * yn)),
            &moments.scalar,
        ),
    ];
    for (k, (name, f, mc)) in cases.into_iter().enumerate() {
        let exact = mc.from_jet.eval(n, eps, yn, r) + mc.dropped.eval(n, eps, yn, r);
        let z_of = |confirm: bool| -> Result<f64, String> {
            let est = sphere_mc(|y| f(y), m, r, &moment_cfg(seed, k as u64, confirm))
                .map_err(|e| e.to_string())?;
            Ok(if est.stderr > 0.0 {
                (est.value - exact).abs() / est.stderr
            } else {
                0.0
            })
        };
        let z = z_of(false)?;
        stats.worst = stats.worst.max(z);
        if z > 3.0 {
            let z2 = z_of(true)?;
            let label = format!("n={n} seed={seed} {name}: {z:.2}σ, repeat {z2:.2}σ");
            if z2 > 3.0 {
                stats.failures.push(label);
            } else {
                stats.rechecked.push(label);
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let mut stats = MomentStats::default();
    for n in [6u32, 7, 8] {
        for k in 0..50u64 {
            let seed = u64::from(n) * 1000 + k;
            let curv = random_admissible_with_jets(n, seed, &BigRational::one())
                .map_err(|e| e.to_string())?;
            moment_mc(&curv, seed, &mut stats)?;
        }
    }
    check(stats.failures.is_empty(), || {
        format!("MC disagreement confirmed: {:?}", stats.failures)
    })?;
    Ok(format!(
        "150 datasets exact; 450 MC comparisons, worst {:.2}σ; repeated at 10x samples: {:?}",
        stats.worst, stats.rechecked
    ))
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.5..1.5)).collect();
    x[n - 1] = rng.random_range(0.0..1.5);
    x
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_u, mut worst_b, mut worst_phi) = (0.0f64, 0.0f64, 0.0f64);
    for n in [6u32, 7, 8] {
        let curv = random_admissible(n, 5, &BigRational::one()).map_err(|e| e.to_string())?;
        let p = BubbleParams::new(n, 0.7, 1.0, 0.25, &curv).map_err(|e| e.to_string())?;
        // fourth-order five-point stencil; its O(h⁴) and O(u/h²) errors are
        // both near 1e-12, so near-zeros of Δφ stay resolvable
        let h = 1e-3;
        for _ in 0..100 {
            let x = random_point(&mut rng, n as usize);
            worst_u = worst_u.max(p.laplacian_u_residual(&x));
            worst_b = worst_b.max(p.boundary_residual(&x[..n as usize - 1]));
            let mut fd = 0.0;
            for a in 0..n as usize {
                let at = |t: f64| {
                    let mut y = x.clone();
                    y[a] += t;
                    p.phi(&y)
                };
                fd += (-at(2.0 * h) + 16.0 * at(h) - 30.0 * at(0.0) + 16.0 * at(-h) - at(-2.0 * h))
                    / (12.0 * h * h);
            }
            let lap = p.laplacian_phi(&x);
            worst_phi = worst_phi.max((lap - fd).abs() / lap.abs());
        }
    }
    check(worst_u < 1e-8 && worst_b < 1e-8 && worst_phi < 1e-5, || {
        format!("residuals ΔU {worst_u:e}, boundary {worst_b:e}, Δφ {worst_phi:e}")
    })?;
    Ok(format!(
        "300 points: ΔU {worst_u:.1e}, boundary {worst_b:.1e}, Δφ vs finite differences {worst_phi:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    let mut seen = [0usize; 4];
    for k in 0..100u64 {
        let n = 6 + (k % 3) as u32;
        let base = random_admissible(n, 600 + k, &BigRational::one()).map_err(|e| e.to_string())?;
        let m = base.m();
        let case = (k / 3 % 4) as usize;
        let rn = if case & 1 == 0 {
            base.rn().clone()
        } else {
            Tensor::zeros(m, 2)
        };
        let wbar = if case & 2 == 0 {
            base.wbar().clone()
        } else {
            Tensor::zeros(m, 4)
        };
        let curv = BoundaryCurvature::new(n, rn.clone(), wbar.clone(), base.n2().clone())
            .map_err(|e| e.to_string())?;
        let w = curv.weyl_reconstruct().map_err(|e| e.to_string())?;
        let input_zero = rn.is_zero() && wbar.is_zero();
        check(w.is_zero() == input_zero, || {
            format!(
                "dataset {k}: W zero {} vs input zero {input_zero}",
                w.is_zero()
            )
        })?;
        let (rn_back, wbar_back) = weyl_decompose(&w).map_err(|e| e.to_string())?;
        check(rn_back == rn && wbar_back == wbar, || {
            format!("dataset {k}: decomposition does not invert")
        })?;
        seen[case] += 1;
    }
    Ok(format!(
        "100 datasets, sector counts {seen:?}, W = 0 exactly when (Rn, W̄) = 0"
    ))
}

fn criterion_7() -> Outcome {
    let mut lines = Vec::new();
    for n in [6u32, 7, 8] {
        let start = Instant::now();
        let flat = QuotientConfig::new(BoundaryCurvature::zero(n).map_err(|e| e.to_string())?);
        let q = evaluate_quotient(&flat, 0.0, flat.delta / 32.0).map_err(|e| e.to_string())?;
        let sharp = sharp_constant(n).map_err(|e| e.to_string())?.value;
        let flat_rel = (q.q - sharp).abs() / sharp;
        check(flat_rel < 0.02, || {
            format!("n={n}: flat Q {} vs {sharp}", q.q)
        })?;

        let cfg = QuotientConfig::new(
            random_admissible(n, 1, &BigRational::one()).map_err(|e| e.to_string())?,
        );
        check(cfg.curv.weyl_nonzero(), || {
            "curved instance has W = 0".into()
        })?;
        let table = sweep(&cfg).map_err(|e| e.to_string())?;
        check(table.monotone_improvement, || {
            format!("n={n}: Q(A=1) < Q(A=0) fails: {:?}", table.drops)
        })?;
        let fit = &table.fits[0];
        check(fit.rel_error <= 0.25, || {
            format!("n={n}: drop off by {:.3}: {fit:?}", fit.rel_error)
        })?;
        let elapsed = start.elapsed();
        check(elapsed < Duration::from_secs(600), || {
            format!("n={n}: took {elapsed:?}")
        })?;
        lines.push(format!(
            "n={n}: flat {flat_rel:.1e}, drop rel error {:.3}, exponent {:.2}, {:.0?}",
            fit.rel_error, fit.exponent, elapsed
        ));
    }
    Ok(lines.join("; "))
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    for n in [6, 7, 8] {
        let o = optimal_a(n).map_err(|e| e.to_string())?;
        let p = p_polynomial(n).map_err(|e| e.to_string())?;
        check(eval_rational(&p, &o.a) == o.p_value, || {
            "vertex value".into()
        })?;
        check(
            o.p_value <= o.p_at_one && o.p_at_one < BigRational::zero(),
            || format!("n={n}: P(opt) {} P(1) {}", o.p_value, o.p_at_one),
        )?;
        parts.push(format!(
            "n={n}: A*={} P(A*)={} ≤ P(1)={}",
            o.a, o.p_value, o.p_at_one
        ));
    }
    Ok(parts.join("; "))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        (
            1,
            "exact endgame values",
            criterion_1,
            Duration::from_secs(1),
        ),
        (
            2,
            "closed-form integral table",
            criterion_2,
            Duration::from_secs(30),
        ),
        (
            3,
            "cancellation identity",
            criterion_3,
            Duration::from_secs(1),
        ),
        (
            4,
            "sphere moment identities",
            criterion_4,
            Duration::from_secs(120),
        ),
        (
            5,
            "bubble PDE residuals",
            criterion_5,
            Duration::from_secs(10),
        ),
        (6, "Weyl dichotomy", criterion_6, Duration::MAX),
        (7, "quotient drop", criterion_7, Duration::from_secs(1800)),
        (8, "optimal amplitude", criterion_8, Duration::from_secs(1)),
    ];
    let mut failed = Vec::new();
    for (k, name, f, limit) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|s| {
            if elapsed <= limit {
                Ok(s)
            } else {
                Err(format!("{s}; runtime {elapsed:?} over {limit:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {k} PASS {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                println!("criterion {k} FAIL {name} ({elapsed:.2?}): {detail}");
                failed.push(k);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
