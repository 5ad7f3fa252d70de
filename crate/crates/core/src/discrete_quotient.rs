//! Numerical evaluation of the quotient
//! `Q(ψ) = E(ψ) / (∫_{∂} ψ^{2(n-1)/(n-2)})^{(n-2)/(n-1)}` on the model
//! half-ball `B⁺_{2δ}`, with the metric taken from the curvature jet.
//!
//! The model gauge has `dv_g = dx` and vanishing mean curvature, so
//! `E(ψ) = ∫ g^{ij} ∂_iψ ∂_jψ + (∂_nψ)² + (n-2)/(4(n-1)) R_g ψ²`. Energy
//! differences between amplitudes are integrated pointwise on shared
//! sample points.

use num_rational::BigRational;
use serde::Serialize;

use crate::bubble_functions::{chi, chi_prime, norm, sharp_constant, BubbleParams, DEFAULT_DELTA};
use crate::curvature_model::{BoundaryCurvature, JetEvaluator};
use crate::energy_expansion::amplitude_drop;
use crate::error::{Error, Result};
use crate::quadrature_oracle::{
    ball_qmc, halfball_qmc_multi, least_squares, McEstimate, QuadratureConfig,
};

/// Largest admissible `ε/δ`.
pub const MAX_EPS_RATIO: f64 = 0.125;

#[derive(Debug, Clone)]
pub struct QuotientConfig {
    pub n: u32,
    pub delta: f64,
    pub eps: Vec<f64>,
    pub a: Vec<f64>,
    pub curv: BoundaryCurvature,
    pub sampler: QuadratureConfig,
    pub jet_order: u32,
}

impl QuotientConfig {
    /// `δ = 1/4`, `ε ∈ δ/{8, 16, 32, 64}`, `A ∈ {0, 1}`, jet order 4.
    pub fn new(curv: BoundaryCurvature) -> Self {
        let delta = DEFAULT_DELTA;
        QuotientConfig {
            n: curv.n(),
            delta,
            eps: [8.0, 16.0, 32.0, 64.0].iter().map(|k| delta / k).collect(),
            a: vec![0.0, 1.0],
            curv,
            sampler: QuadratureConfig::default(),
            jet_order: 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.curv.n() != self.n {
            return Err(Error::InvalidInput(format!(
                "curvature is for n = {}, not {}",
                self.curv.n(),
                self.n
            )));
        }
        self.curv.validate()?;
        self.sampler.validate()?;
        if self.delta.is_nan() || self.delta <= 0.0 {
            return Err(Error::InvalidInput("δ must be positive".into()));
        }
        if let Some(e) = self
            .eps
            .iter()
            .find(|&&e| !(e > 0.0 && e / self.delta <= MAX_EPS_RATIO))
        {
            return Err(Error::InvalidInput(format!("ε = {e} outside (0, δ/8]")));
        }
        if self.a.is_empty() || self.a.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidInput(
                "need at least one finite amplitude".into(),
            ));
        }
        if !(2..=4).contains(&self.jet_order) {
            return Err(Error::UnsupportedOrder(self.jet_order));
        }
        Ok(())
    }
}

/// Energy split by origin. `total = flat + metric + scalar`; `annulus` is the
/// part of `total` from `δ < |x| < 2δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyEstimate {
    pub a: f64,
    pub flat: McEstimate,
    pub metric: McEstimate,
    pub scalar: McEstimate,
    pub total: McEstimate,
    pub annulus: McEstimate,
}

const COMPONENTS: usize = 5;

/// Energies for every amplitude in `amps` at one `ε`, all on the same
/// points, plus `E(amps[k]) - E(amps[0])` integrated pointwise for `k ≥ 1`.
pub fn evaluate_energies(
    cfg: &QuotientConfig,
    amps: &[f64],
    eps: f64,
) -> Result<(Vec<EnergyEstimate>, Vec<McEstimate>)> {
    cfg.validate()?;
    if amps.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let n = cfg.n;
    let m = (n - 1) as usize;
    let delta = cfg.delta;
    let bubble = BubbleParams::new(n, eps, 1.0, delta, &cfg.curv)?;
    let jet = JetEvaluator::new(&cfg.curv, cfg.jet_order)?;
    let conformal = (f64::from(n) - 2.0) / (4.0 * (f64::from(n) - 1.0));
    let na = amps.len();
    let k = COMPONENTS * na + na - 1;
    let mut sampler = cfg.sampler.clone();
    sampler.radial_scale = Some(sampler.radial_scale.unwrap_or(eps));

    let integrand = |x: &[f64], out: &mut [f64]| {
        let r = norm(x);
        let c = chi(r, delta);
        let dc = chi_prime(r, delta);
        let v = bubble.values(x);
        // ψ_A = w0 + A w1
        let w0 = c * v.u;
        let w1 = c * v.phi;
        let g0: Vec<f64> = (0..=m)
            .map(|i| dc * x[i] / r * v.u + c * v.grad_u[i])
            .collect();
        let g1: Vec<f64> = (0..=m)
            .map(|i| dc * x[i] / r * v.phi + c * v.grad_phi[i])
            .collect();
        let rg = jet.scalar_curvature(&x[..m], x[m]);
        let annulus = r > delta;
        let mut scratch = jet.scratch();
        let mut tangential = vec![0.0; m];
        let mut density = |a: f64| -> [f64; 3] {
            for (t, (p, q)) in tangential.iter_mut().zip(g0.iter().zip(&g1)) {
                *t = p + a * q;
            }
            let flat: f64 = (0..=m).map(|i| (g0[i] + a * g1[i]).powi(2)).sum();
            let metric = jet.metric_correction(&x[..m], x[m], &tangential, &mut scratch);
            let psi = w0 + a * w1;
            [flat, metric, conformal * rg * psi * psi]
        };
        let base = density(amps[0]);
        for (t, &a) in amps.iter().enumerate() {
            let d = if t == 0 { base } else { density(a) };
            let total = d[0] + d[1] + d[2];
            let o = &mut out[COMPONENTS * t..COMPONENTS * (t + 1)];
            o[0] = d[0];
            o[1] = d[1];
            o[2] = d[2];
            o[3] = total;
            o[4] = if annulus { total } else { 0.0 };
            if t > 0 {
                // cross terms only, so the O(1) parts cancel exactly
                let da = a - amps[0];
                let a0 = amps[0];
                let flat: f64 = (0..=m)
                    .map(|i| {
                        let p = g0[i] + a0 * g1[i];
                        da * g1[i] * (2.0 * p + da * g1[i])
                    })
                    .sum();
                let psi0 = w0 + a0 * w1;
                let scalar = conformal * rg * da * w1 * (2.0 * psi0 + da * w1);
                out[COMPONENTS * na + t - 1] = flat + (d[1] - base[1]) + scalar;
            }
        }
    };
    let est = halfball_qmc_multi(integrand, k, n, 2.0 * delta, &sampler)?;
    let energies = amps
        .iter()
        .enumerate()
        .map(|(t, &a)| {
            let e = &est[COMPONENTS * t..COMPONENTS * (t + 1)];
            EnergyEstimate {
                a,
                flat: e[0],
                metric: e[1],
                scalar: e[2],
                total: e[3],
                annulus: e[4],
            }
        })
        .collect();
    Ok((energies, est[COMPONENTS * na..].to_vec()))
}

/// `E(ψ)` at one amplitude.
pub fn evaluate_energy(cfg: &QuotientConfig, a: f64, eps: f64) -> Result<EnergyEstimate> {
    Ok(evaluate_energies(cfg, &[a], eps)?.0[0])
}

/// `∫_{|x̄| < 2δ} ψ(x̄, 0)^{2(n-1)/(n-2)} dx̄`. The perturbation vanishes on
/// the boundary, so this does not depend on `A`.
pub fn boundary_integral(cfg: &QuotientConfig, eps: f64) -> Result<McEstimate> {
    cfg.validate()?;
    let n = cfg.n;
    let m = (n - 1) as usize;
    let p = 2.0 * (f64::from(n) - 1.0) / (f64::from(n) - 2.0);
    let bubble = BubbleParams::flat(n, eps, cfg.delta);
    let mut sampler = cfg.sampler.clone();
    sampler.radial_scale = Some(sampler.radial_scale.unwrap_or(eps));
    ball_qmc(
        |xbar| {
            let mut x = xbar.to_vec();
            x.push(0.0);
            bubble.psi(&x).powf(p)
        },
        m,
        2.0 * cfg.delta,
        &sampler,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuotientEstimate {
    pub eps: f64,
    pub a: f64,
    pub energy: EnergyEstimate,
    pub boundary: McEstimate,
    pub q: f64,
    pub q_stderr: f64,
}

fn quotient(n: u32, eps: f64, energy: EnergyEstimate, boundary: McEstimate) -> QuotientEstimate {
    let p = (f64::from(n) - 2.0) / (f64::from(n) - 1.0);
    let q = energy.total.value / boundary.value.powf(p);
    let rel = ((energy.total.stderr / energy.total.value).powi(2)
        + (p * boundary.stderr / boundary.value).powi(2))
    .sqrt();
    QuotientEstimate {
        eps,
        a: energy.a,
        energy,
        boundary,
        q,
        q_stderr: q.abs() * rel,
    }
}

pub fn evaluate_quotient(cfg: &QuotientConfig, a: f64, eps: f64) -> Result<QuotientEstimate> {
    let e = evaluate_energy(cfg, a, eps)?;
    let b = boundary_integral(cfg, eps)?;
    Ok(quotient(cfg.n, eps, e, b))
}

/// `Q(A) - Q(A₀)` at one `ε`, with the analytic leading-order value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DropRow {
    pub eps: f64,
    pub a0: f64,
    pub a: f64,
    pub energy_drop: McEstimate,
    pub q_drop: f64,
    pub q_drop_stderr: f64,
    /// `ε⁴ (c_S(A) - c_S(A₀)) S`, times `log(δ/ε)` for `n = 6`.
    pub predicted_energy_drop: f64,
    pub ratio: f64,
}

/// Fit of the measured drop against the leading-order prediction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DropFit {
    pub a: f64,
    /// Least-squares slope of `log(|ΔE| / L(ε))` against `log ε`, with
    /// `L = log(δ/ε)` for `n = 6` and `L = 1` otherwise.
    pub exponent: f64,
    /// Measured and predicted leading coefficient: `ΔE/ε⁴` at the smallest
    /// `ε` for `n ≥ 7`, and for `n = 6` the slope of `ΔE/ε⁴` in
    /// `log(δ/ε)` between the two smallest `ε`.
    pub measured_coefficient: f64,
    pub measured_coefficient_stderr: f64,
    pub predicted_coefficient: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub n: u32,
    pub delta: f64,
    pub jet_order: u32,
    pub sharp_constant: f64,
    pub rows: Vec<QuotientEstimate>,
    pub drops: Vec<DropRow>,
    pub fits: Vec<DropFit>,
    /// `Q(A) < Q(A₀)` for every `A ≠ A₀` at the two smallest `ε`.
    pub monotone_improvement: bool,
}

fn log_factor(n: u32, delta: f64, eps: f64) -> f64 {
    if n == 6 {
        (delta / eps).ln()
    } else {
        1.0
    }
}

fn predicted_drop(cfg: &QuotientConfig, a0: f64, a: f64, eps: f64) -> Result<f64> {
    if !(6..=8).contains(&cfg.n) {
        return Ok(f64::NAN);
    }
    let to_q = |v: f64| {
        BigRational::from_float(v)
            .ok_or_else(|| Error::InvalidInput(format!("amplitude {v} is not finite")))
    };
    let c = amplitude_drop(cfg.n, &cfg.curv, &to_q(a0)?, &to_q(a)?)?;
    Ok(eps.powi(4) * c.to_f64(cfg.n, (cfg.delta / eps).ln())?)
}

/// Evaluates `Q` over the `(ε, A)` grid. The first amplitude is the
/// baseline for the drops.
pub fn sweep(cfg: &QuotientConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let mut eps = cfg.eps.clone();
    eps.sort_by(|a, b| b.total_cmp(a));
    let p = (f64::from(cfg.n) - 2.0) / (f64::from(cfg.n) - 1.0);
    let mut rows = Vec::new();
    let mut drops = Vec::new();
    for &e in &eps {
        let (energies, diffs) = evaluate_energies(cfg, &cfg.a, e)?;
        let b = boundary_integral(cfg, e)?;
        let norm = b.value.powf(p);
        for en in &energies {
            rows.push(quotient(cfg.n, e, *en, b));
        }
        for (t, d) in diffs.into_iter().enumerate() {
            let a = cfg.a[t + 1];
            let predicted = predicted_drop(cfg, cfg.a[0], a, e)?;
            drops.push(DropRow {
                eps: e,
                a0: cfg.a[0],
                a,
                energy_drop: d,
                q_drop: d.value / norm,
                q_drop_stderr: d.stderr / norm,
                predicted_energy_drop: predicted,
                ratio: d.value / predicted,
            });
        }
    }
    let fits = cfg.a[1..]
        .iter()
        .filter_map(|&a| {
            let rows: Vec<&DropRow> = drops.iter().filter(|d| d.a == a).collect();
            fit_drop(cfg, &rows)
        })
        .collect();
    let smallest: Vec<f64> = eps.iter().rev().take(2).copied().collect();
    let monotone_improvement = cfg.a.len() > 1
        && drops
            .iter()
            .filter(|d| smallest.contains(&d.eps))
            .all(|d| d.q_drop < 0.0);
    Ok(SweepTable {
        n: cfg.n,
        delta: cfg.delta,
        jet_order: cfg.jet_order,
        sharp_constant: sharp_constant(cfg.n)?.value,
        rows,
        drops,
        fits,
        monotone_improvement,
    })
}

/// Rows must be sorted by decreasing `ε`.
fn fit_drop(cfg: &QuotientConfig, rows: &[&DropRow]) -> Option<DropFit> {
    if rows.len() < 2 {
        return None;
    }
    let n = cfg.n;
    let xs: Vec<f64> = rows.iter().map(|d| d.eps.ln()).collect();
    let ys: Vec<f64> = rows
        .iter()
        .map(|d| (d.energy_drop.value.abs() / log_factor(n, cfg.delta, d.eps)).ln())
        .collect();
    let (exponent, _, _) = least_squares(&xs, &ys);
    let last = rows[rows.len() - 1];
    let (measured, stderr, predicted) = if n == 6 {
        let prev = rows[rows.len() - 2];
        let span = (prev.eps / last.eps).ln();
        let scaled = |d: &DropRow| d.energy_drop.value / d.eps.powi(4);
        let s = (scaled(last) - scaled(prev)) / span;
        let se = (last.energy_drop.stderr / last.eps.powi(4))
            .hypot(prev.energy_drop.stderr / prev.eps.powi(4))
            / span;
        let pred = last.predicted_energy_drop / last.eps.powi(4) / (cfg.delta / last.eps).ln();
        (s, se, pred)
    } else {
        let e4 = last.eps.powi(4);
        (
            last.energy_drop.value / e4,
            last.energy_drop.stderr / e4,
            last.predicted_energy_drop / e4,
        )
    };
    Some(DropFit {
        a: last.a,
        exponent,
        measured_coefficient: measured,
        measured_coefficient_stderr: stderr,
        predicted_coefficient: predicted,
        rel_error: (measured - predicted).abs() / predicted.abs(),
    })
}
