use std::fs;
use std::io::Write;
use std::path::Path;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;
use yamabe_core::curvature_model::{parse_rational, random_admissible, BoundaryCurvature};
use yamabe_core::discrete_quotient::{sweep, QuotientConfig, SweepTable};
use yamabe_core::energy_expansion::{
    certify_with, expansion, integral_residuals, Certificate, ExpansionReport, Residual,
};
use yamabe_core::exact_integrals::{expansion_integrals, ExpansionIntegral};
use yamabe_core::quadrature_oracle::QuadratureConfig;
use yamabe_core::Error;

use crate::report::{RunReport, Summary, Tagged};
use crate::{
    CertifyArgs, CurvatureSource, IntegralsArgs, QuotientArgs, DEFAULT_SEED, EXIT_FAILURE, EXIT_OK,
};

pub(crate) enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<i32, Failure>;

fn io<E: std::fmt::Display>(path: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn load_curvature(
    n: u32,
    src: &CurvatureSource,
) -> Result<(BoundaryCurvature, serde_json::Value), Failure> {
    match &src.curv {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(io(path))?;
            let curv = BoundaryCurvature::from_json_str(&text)?;
            if curv.n() != n {
                return Err(Error::InvalidInput(format!(
                    "{} holds data for n = {}, not {n}",
                    path.display(),
                    curv.n()
                ))
                .into());
            }
            Ok((curv, json!({ "curv_file": path.display().to_string() })))
        }
        None => {
            let seed = src.random.unwrap_or(DEFAULT_SEED);
            let curv = random_admissible(n, seed, &BigRational::from_integer(1.into()))?;
            Ok((curv, json!({ "random_seed": seed })))
        }
    }
}

fn write_json<T: Serialize>(path: Option<&Path>, report: &RunReport<T>) -> Result<(), Failure> {
    if let Some(path) = path {
        let mut text = serde_json::to_string_pretty(report).map_err(io(path))?;
        text.push('\n');
        fs::write(path, text).map_err(io(path))?;
    }
    Ok(())
}

fn w(out: &mut dyn Write, s: std::fmt::Arguments<'_>) -> Result<(), Failure> {
    out.write_fmt(s).map_err(|e| Failure::Io(e.to_string()))
}

#[derive(Serialize)]
struct CertifyResults {
    certificate: Tagged<Certificate>,
    expansion: Tagged<ExpansionReport>,
    curvature: serde_json::Value,
}

pub(crate) fn certify(args: &CertifyArgs, out: &mut dyn Write) -> Outcome {
    let a = parse_rational(&args.a)?;
    let (curv, mut inputs) = load_curvature(args.n, &args.source)?;
    inputs["n"] = json!(args.n);
    inputs["A"] = json!(a.to_string());
    let cert = certify_with(args.n, &curv, &a, &QuadratureConfig::default())?;
    let report = expansion(args.n)?;

    w(out, format_args!("n = {}, A = {}\n", cert.n, cert.a_used))?;
    w(
        out,
        format_args!("P(A) = {}   (unit {})\n", cert.p_value, cert.p_unit),
    )?;
    w(
        out,
        format_args!(
            "optimal A = {}   P(optimal A) = {}   P(1) = {}\n",
            cert.optimal.a, cert.optimal.p_value, cert.optimal.p_at_one
        ),
    )?;
    w(
        out,
        format_args!(
            "{:<8} {:<30} {:>12}\n",
            "channel", "coefficient", "invariant"
        ),
    )?;
    w(
        out,
        format_args!(
            "{:<8} {:<30} {:>12}\n",
            "S",
            cert.s_coefficient.to_string(),
            cert.s.to_string()
        ),
    )?;
    w(
        out,
        format_args!(
            "{:<8} {:<30} {:>12}\n",
            "W2",
            cert.w2_coefficient.to_string(),
            cert.w2.to_string()
        ),
    )?;
    w(
        out,
        format_args!(
            "{:<8} {:<30} {:>12}\n",
            "D",
            "0 (cancelled)",
            curv.d().to_string()
        ),
    )?;
    w(
        out,
        format_args!(
            "{:<8} {:<30} {:>12}\n",
            "N2",
            "0 (cancelled)",
            curv.n2().to_string()
        ),
    )?;
    w(
        out,
        format_args!(
            "energy coefficient = {}   remainder {}\n",
            cert.energy_coefficient, report.error_class
        ),
    )?;
    for r in &cert.quadrature_residuals {
        w(
            out,
            format_args!(
                "{:<4} {:<10} rel residual {:.2e} (tol {:.0e})\n",
                r.label, r.provenance, r.rel_residual, r.tolerance
            ),
        )?;
    }
    let verdict = cert.verdict;
    w(
        out,
        format_args!(
            "verdict: {}\n",
            if verdict {
                "strict inequality certified"
            } else {
                "not certified"
            }
        ),
    )?;

    let summary = Summary {
        passed: verdict,
        message: if verdict {
            "certified".into()
        } else {
            "energy coefficient is not negative".into()
        },
    };
    let results = CertifyResults {
        certificate: Tagged::exact(cert),
        expansion: Tagged::exact(report),
        curvature: curv.to_json(),
    };
    write_json(
        args.json.as_deref(),
        &RunReport::new("certify", inputs, results, summary),
    )?;
    Ok(if verdict { EXIT_OK } else { EXIT_FAILURE })
}

#[derive(Serialize)]
struct IntegralResults {
    table: Tagged<Vec<ExpansionIntegral>>,
    residuals: Vec<Tagged<Residual>>,
}

pub(crate) fn integrals(args: &IntegralsArgs, out: &mut dyn Write) -> Outcome {
    let table = expansion_integrals(args.n)?;
    let log = args.n == 6;
    w(
        out,
        format_args!(
            "n = {}{}\n{:<4} {:>3} {:>3} {:>3}  value\n",
            args.n,
            if log {
                " (log(δ/ε) coefficients)"
            } else {
                ""
            },
            "",
            "a",
            "b",
            "c"
        ),
    )?;
    for e in &table {
        w(
            out,
            format_args!(
                "{:<4} {:>3} {:>3} {:>3}  {}\n",
                e.label, e.spec.a, e.spec.b, e.spec.c, e.value
            ),
        )?;
    }
    let mut residuals = Vec::new();
    if args.check {
        for r in integral_residuals(args.n, &QuadratureConfig::default())? {
            w(
                out,
                format_args!(
                    "{:<4} {:<10} exact {:.12e} numeric {:.12e} rel {:.2e} {}\n",
                    r.label,
                    r.provenance,
                    r.exact,
                    r.numeric,
                    r.rel_residual,
                    if r.passed { "ok" } else { "FAIL" }
                ),
            )?;
            residuals.push(if r.provenance == "fitted" {
                Tagged::fitted(r)
            } else {
                Tagged::quadrature(r)
            });
        }
    }
    let passed = residuals.iter().all(|r| r.value.passed);
    let summary = Summary {
        passed,
        message: match (args.check, passed) {
            (false, _) => "exact table only".into(),
            (true, true) => "all residuals within tolerance".into(),
            (true, false) => "residual above tolerance".into(),
        },
    };
    let inputs = json!({ "n": args.n, "check": args.check });
    let results = IntegralResults {
        table: Tagged::exact(table),
        residuals,
    };
    write_json(
        args.json.as_deref(),
        &RunReport::new("integrals", inputs, results, summary),
    )?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILURE })
}

#[derive(Serialize)]
struct CsvRow {
    eps: f64,
    a: f64,
    q: f64,
    q_stderr: f64,
    energy: f64,
    energy_stderr: f64,
    flat: f64,
    metric: f64,
    scalar: f64,
    annulus: f64,
    boundary: f64,
    boundary_stderr: f64,
    energy_drop: Option<f64>,
    energy_drop_stderr: Option<f64>,
    q_drop: Option<f64>,
    predicted_energy_drop: Option<f64>,
}

fn csv_rows(t: &SweepTable) -> Vec<CsvRow> {
    t.rows
        .iter()
        .map(|r| {
            let d = t.drops.iter().find(|d| d.eps == r.eps && d.a == r.a);
            CsvRow {
                eps: r.eps,
                a: r.a,
                q: r.q,
                q_stderr: r.q_stderr,
                energy: r.energy.total.value,
                energy_stderr: r.energy.total.stderr,
                flat: r.energy.flat.value,
                metric: r.energy.metric.value,
                scalar: r.energy.scalar.value,
                annulus: r.energy.annulus.value,
                boundary: r.boundary.value,
                boundary_stderr: r.boundary.stderr,
                energy_drop: d.map(|d| d.energy_drop.value),
                energy_drop_stderr: d.map(|d| d.energy_drop.stderr),
                q_drop: d.map(|d| d.q_drop),
                predicted_energy_drop: d.map(|d| d.predicted_energy_drop),
            }
        })
        .collect()
}

pub(crate) fn quotient(args: &QuotientArgs, out: &mut dyn Write) -> Outcome {
    let (curv, mut inputs) = load_curvature(args.n, &args.source)?;
    let mut cfg = QuotientConfig::new(curv);
    if !args.sweep {
        cfg.eps = vec![cfg.delta / 32.0, cfg.delta / 64.0];
    }
    cfg.sampler.mc_samples = args.samples;
    cfg.jet_order = args.jet_order;
    inputs["n"] = json!(args.n);
    inputs["eps"] = json!(cfg.eps);
    inputs["A"] = json!(cfg.a);
    inputs["delta"] = json!(cfg.delta);
    inputs["sampler"] =
        serde_json::to_value(&cfg.sampler).map_err(|e| Failure::Io(e.to_string()))?;
    inputs["jet_order"] = json!(cfg.jet_order);
    let claims = cfg.curv.weyl_nonzero() && cfg.curv.s() > BigRational::from_integer(0.into());
    let table = sweep(&cfg)?;

    w(
        out,
        format_args!(
            "n = {}, δ = {}, sharp constant {:.8}\n",
            table.n, table.delta, table.sharp_constant
        ),
    )?;
    w(
        out,
        format_args!("{:>12} {:>6} {:>16} {:>10}\n", "eps", "A", "Q", "stderr"),
    )?;
    for r in &table.rows {
        w(
            out,
            format_args!(
                "{:>12.6e} {:>6} {:>16.10} {:>10.2e}\n",
                r.eps, r.a, r.q, r.q_stderr
            ),
        )?;
    }
    for d in &table.drops {
        w(
            out,
            format_args!(
                "drop eps {:.6e} A {}: ΔQ {:.4e} ± {:.1e}, ΔE/predicted {:.4}\n",
                d.eps, d.a, d.q_drop, d.q_drop_stderr, d.ratio
            ),
        )?;
    }
    for f in &table.fits {
        w(
            out,
            format_args!(
                "fit A {}: exponent {:.3}, coefficient {:.5e} vs predicted {:.5e} (rel {:.3})\n",
                f.a, f.exponent, f.measured_coefficient, f.predicted_coefficient, f.rel_error
            ),
        )?;
    }
    let (passed, message) = if !claims {
        (
            true,
            "no S-channel curvature: no improvement claimed".to_string(),
        )
    } else if table.monotone_improvement {
        (true, "Q(A=1) < Q(A=0) at the two smallest ε".to_string())
    } else {
        (false, "monotone improvement fails".to_string())
    };
    w(out, format_args!("{message}\n"))?;

    if let Some(path) = &args.csv {
        let mut wtr = csv::Writer::from_path(path).map_err(io(path))?;
        for row in csv_rows(&table) {
            wtr.serialize(row).map_err(io(path))?;
        }
        wtr.flush().map_err(io(path))?;
    }
    let summary = Summary { passed, message };
    write_json(
        args.json.as_deref(),
        &RunReport::new("quotient", inputs, Tagged::quadrature(table), summary),
    )?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILURE })
}
