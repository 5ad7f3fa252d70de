//! Numerical integration independent of the exact engine: nested adaptive
//! Gauss–Kronrod for the reduced two-dimensional form of the half-space
//! integrals, Monte Carlo on spheres, and randomized lattice rules on
//! half-balls and balls.

pub mod gk;
mod sampling;

use serde::{Deserialize, Serialize};

pub use sampling::{
    ball_qmc, design_points, halfball_qmc, halfball_qmc_multi, random_rotation, sphere_mc,
    sphere_mc_poly, McEstimate, SphereDesign,
};

use crate::error::{Error, Result};
use crate::exact_integrals::{Convergence, IntegralSpec};
use crate::numeric::sphere_area;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Outer truncation radius for improper integrals; chosen from the
    /// analytic tail bound when absent.
    pub truncation_radius: Option<f64>,
    /// Total number of integrand evaluations for the sampling estimators.
    pub mc_samples: usize,
    pub seed: u64,
    /// Independent randomizations used to estimate sampling error.
    pub replicates: usize,
    /// Length scale `s` of the radial map `ρ = s((1+R/s)^u - 1)` used by the
    /// ball samplers; uniform in `ρ` when absent.
    pub radial_scale: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-11,
            abs_tol: 1e-14,
            max_subdivisions: 4000,
            truncation_radius: None,
            mc_samples: 2_000_000,
            seed: 1,
            replicates: 8,
            radial_scale: None,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_subdivisions > 0
            && self.replicates >= 2
            && self.mc_samples > 0
            && self.truncation_radius.is_none_or(|r| r > 0.0)
            && self.radial_scale.is_none_or(|s| s > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "invalid quadrature configuration: {self:?}"
            )))
        }
    }
}

/// A deterministic quadrature result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    /// Quadrature error estimate plus truncation tail bounds.
    pub error: f64,
    pub subdivisions: usize,
    pub truncation_radius: f64,
    pub tail_bound: f64,
}

/// Least-squares fit `V(L) ≈ slope · log L + intercept` over several radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogFit {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Fit residual plus propagated quadrature error, in slope units.
    pub slope_error: f64,
}

/// `∫₀^∞ t^β (1+t²)^{-c} dt ≤ 1/(β+1) + 1/(2c-β-1)`.
fn radial_bound(beta: f64, c: f64) -> f64 {
    1.0 / (beta + 1.0) + 1.0 / (2.0 * c - beta - 1.0)
}

/// `∫₀^∞ r^β Z(y, r)^{-c} dr` for fixed `y`, with `Z = (1+y)² + r²`.
///
/// With `w = 1+y` the integral is at least `w^{β+1-2c} 2^{-c}/(β+1)` and the
/// tail beyond `R = wT` at most `(wT)^{β+1-2c}/(2c-β-1)`, so `T` is chosen to
/// keep the tail below `rel` of the value. Returns `(value, error)`.
fn inner_radial(y: f64, beta: i32, c: i32, cfg: &QuadratureConfig, rel: f64) -> Result<(f64, f64)> {
    let p = f64::from(2 * c - beta - 1);
    let w = 1.0 + y;
    let t = (2f64.powi(c) * f64::from(beta + 1) / (p * rel)).powf(1.0 / p);
    let tail = (w * t).powf(-p) / p;
    let f = |s: f64| {
        let es = s.exp();
        let r = w * (es - 1.0);
        let z = w * w + r * r;
        r.powi(beta) * z.powi(-c) * w * es
    };
    let res = gk::integrate(f, 0.0, (1.0 + t).ln(), rel, 0.0, cfg.max_subdivisions)?;
    Ok((res.value, res.error + tail))
}

/// The half-space integral of `spec` by nested adaptive quadrature of
/// `σ_{n-2} ∫₀^∞ ∫₀^∞ y^a r^{b+n-2} ((1+y)² + r²)^{-c} dr dy`.
///
/// Both directions are mapped logarithmically and truncated where the
/// analytic power-counting tail bound is below `abs_tol/10`; the bound is
/// included in the reported error.
pub fn reduced_2d(spec: IntegralSpec, cfg: &QuadratureConfig) -> Result<Estimate> {
    cfg.validate()?;
    if spec.convergence() != Convergence::Convergent {
        return Err(Error::InvalidInput(format!(
            "{spec:?} does not converge; use reduced_2d_log"
        )));
    }
    let a = spec.a as i32;
    let beta = (spec.b + spec.n - 2) as i32;
    let c = spec.c as i32;
    let sigma = sphere_area(spec.n - 2);
    let k = radial_bound(f64::from(beta), f64::from(c));
    // outer decay: y^a (1+y)^{β+1-2c} ≤ (1+y)^{-q-1}
    let q = f64::from(2 * c - a - beta - 2);
    let tail_target = cfg.abs_tol / 10.0 / sigma;
    let y_max = match cfg.truncation_radius {
        Some(r) => r,
        None => (k / (q * tail_target)).powf(1.0 / q),
    };
    let outer_tail = k * (1.0 + y_max).powf(-q) / q;
    let inner_rel_target = cfg.rel_tol * 1e-2;

    // the integrand is positive, so max(e/v) over inner calls bounds the
    // propagated relative error
    let mut inner_rel: f64 = 0.0;
    let mut failure = None;
    let s_max = (1.0 + y_max).ln();
    let f = |s: f64| {
        let es = s.exp();
        let y = es - 1.0;
        match inner_radial(y, beta, c, cfg, inner_rel_target) {
            Ok((v, e)) => {
                if v > 0.0 {
                    inner_rel = inner_rel.max(e / v);
                }
                y.powi(a) * v * es
            }
            Err(err) => {
                failure.get_or_insert(err);
                0.0
            }
        }
    };
    let outer = gk::integrate(
        f,
        0.0,
        s_max,
        cfg.rel_tol,
        tail_target,
        cfg.max_subdivisions,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let outer = outer?;
    let inner_contrib = inner_rel * outer.value.abs();
    Ok(Estimate {
        value: sigma * outer.value,
        error: sigma * (outer.error + outer_tail + inner_contrib),
        subdivisions: outer.subdivisions,
        truncation_radius: y_max,
        tail_bound: sigma * outer_tail,
    })
}

/// Integral of `spec` over the half-ball of radius `L` in polar form,
/// `σ ∫₀^L ρ^{a+β+1} ∫₀^{π/2} cos^aθ sin^βθ (1 + 2ρ cosθ + ρ²)^{-c} dθ dρ`.
fn polar_shell(spec: IntegralSpec, cfg: &QuadratureConfig, l0: f64, l1: f64) -> Result<(f64, f64)> {
    let a = spec.a as i32;
    let beta = (spec.b + spec.n - 2) as i32;
    let c = spec.c as i32;
    let mut failure = None;
    let angular = |rho: f64, failure: &mut Option<Error>| {
        let g = |th: f64| {
            let (s, co) = th.sin_cos();
            co.powi(a) * s.powi(beta) * (1.0 + 2.0 * rho * co + rho * rho).powi(-c)
        };
        match gk::integrate(
            g,
            0.0,
            std::f64::consts::FRAC_PI_2,
            cfg.rel_tol * 1e-2,
            0.0,
            cfg.max_subdivisions,
        ) {
            Ok(r) => r.value,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let f = |s: f64| {
        let es = s.exp();
        let rho = es - 1.0;
        rho.powi(a + beta + 1) * angular(rho, &mut failure) * es
    };
    let res = gk::integrate(
        f,
        (1.0 + l0).ln(),
        (1.0 + l1).ln(),
        cfg.rel_tol,
        0.0,
        cfg.max_subdivisions,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let res = res?;
    Ok((res.value, res.error))
}

/// For a log-divergent spec, integrates over half-balls of the given radii
/// and fits `slope · log L + intercept`. The slope estimates the
/// `log(δ/ε)` coefficient. The finite-radius correction decays like `1/L`,
/// so radii should be large.
pub fn reduced_2d_log(spec: IntegralSpec, radii: &[f64], cfg: &QuadratureConfig) -> Result<LogFit> {
    cfg.validate()?;
    if spec.convergence() != Convergence::LogDivergent {
        return Err(Error::InvalidInput(format!(
            "{spec:?} is not log-divergent"
        )));
    }
    if radii.len() < 2 || radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] <= 0.0 {
        return Err(Error::InvalidInput(
            "need at least two increasing radii".into(),
        ));
    }
    let sigma = sphere_area(spec.n - 2);
    let mut values = Vec::with_capacity(radii.len());
    let mut acc = 0.0;
    let mut acc_err = 0.0;
    let mut prev = 0.0;
    let mut errs = Vec::new();
    for &l in radii {
        let (v, e) = polar_shell(spec, cfg, prev, l)?;
        acc += v;
        acc_err += e;
        values.push(sigma * acc);
        errs.push(sigma * acc_err);
        prev = l;
    }
    let xs: Vec<f64> = radii.iter().map(|l| l.ln()).collect();
    let (slope, intercept, resid) = least_squares(&xs, &values);
    let span = xs[xs.len() - 1] - xs[0];
    let quad = errs.iter().cloned().fold(0.0, f64::max) * 2.0 / span;
    Ok(LogFit {
        radii: radii.to_vec(),
        values,
        slope,
        intercept,
        slope_error: resid / span + quad,
    })
}

/// Ordinary least squares `y ≈ m x + b`; returns `(m, b, max |residual|)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let m = sxy / sxx;
    let b = my - m * mx;
    let resid = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - m * x - b).abs())
        .fold(0.0, f64::max);
    (m, b, resid)
}
