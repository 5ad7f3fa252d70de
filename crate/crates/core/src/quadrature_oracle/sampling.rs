//! Sampling estimators.
//!
//! All of them split the work into fixed-size chunks, evaluate chunks in
//! parallel, and combine chunk sums by a pairwise tree in chunk order, so
//! the result does not depend on the number of threads.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::QuadratureConfig;
use crate::error::Result;
use crate::numeric::sphere_area;
use crate::sphere_moments::HomPoly;

const CHUNK: usize = 256;

/// Mean and standard error of a sampling estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl McEstimate {
    pub const ZERO: McEstimate = McEstimate {
        value: 0.0,
        stderr: 0.0,
        samples: 0,
    };

    /// Within `k` standard errors of `target`.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.stderr
    }
}

fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

fn pairwise_sum_vec(v: &[Vec<f64>], k: usize) -> Vec<f64> {
    (0..k)
        .map(|j| pairwise_sum(&v.iter().map(|c| c[j]).collect::<Vec<_>>()))
        .collect()
}

fn mean_and_stderr(reps: &[f64], samples: usize) -> McEstimate {
    let r = reps.len() as f64;
    let mean = pairwise_sum(reps) / r;
    let var = reps.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1.0);
    McEstimate {
        value: mean,
        stderr: (var / r).sqrt(),
        samples,
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Plain Monte Carlo of `∫_{S_r} f dσ` over the sphere of radius `r` in
/// `ℝ^{nvars}`, from Gaussian points normalized to the sphere.
pub fn sphere_mc<F>(f: F, nvars: usize, r: f64, cfg: &QuadratureConfig) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate()?;
    let n = cfg.mc_samples;
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng_for(cfg.seed, c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            let (mut s, mut s2) = (0.0, 0.0);
            let mut x = vec![0.0; nvars];
            for _ in 0..len {
                let g = gaussian_vector(&mut rng, nvars);
                let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                for (xi, gi) in x.iter_mut().zip(&g) {
                    *xi = r * gi / norm;
                }
                let v = f(&x);
                s += v;
                s2 += v * v;
            }
            vec![s, s2]
        })
        .collect();
    let tot = pairwise_sum_vec(&parts, 2);
    let nf = n as f64;
    let mean = tot[0] / nf;
    let var = (tot[1] / nf - mean * mean).max(0.0) * nf / (nf - 1.0).max(1.0);
    let area = sphere_area(nvars as u32 - 1) * r.powi(nvars as i32 - 1);
    Ok(McEstimate {
        value: area * mean,
        stderr: area * (var / nf).sqrt(),
        samples: n,
    })
}

/// [`sphere_mc`] for a polynomial.
pub fn sphere_mc_poly(p: &HomPoly, r: f64, cfg: &QuadratureConfig) -> Result<McEstimate> {
    let terms = p.to_f64_terms();
    let deg = p.degree() as usize;
    sphere_mc(
        |x| {
            let pows: Vec<Vec<f64>> = x
                .iter()
                .map(|&v| {
                    let mut row = vec![1.0; deg + 1];
                    for k in 1..=deg {
                        row[k] = row[k - 1] * v;
                    }
                    row
                })
                .collect();
            terms
                .iter()
                .map(|(e, c)| {
                    c * e
                        .iter()
                        .enumerate()
                        .map(|(i, &k)| pows[i][k as usize])
                        .product::<f64>()
                })
                .sum()
        },
        p.nvars(),
        r,
        cfg,
    )
}

/// A positive-weight cubature on `S^{d-1}` exact for polynomials of degree
/// ≤ 5: the `2d` points `±e_i` with weight `1/(d(d+2))` and the `2^d`
/// points `(±1, …, ±1)/√d` with weight `d/(2^d (d+2))`. Weights sum to 1.
#[derive(Debug, Clone)]
pub struct SphereDesign {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

pub fn design_points(d: usize) -> SphereDesign {
    let df = d as f64;
    let mut points = Vec::with_capacity(2 * d + (1 << d));
    let mut weights = Vec::with_capacity(points.capacity());
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; d];
            e[i] = s;
            points.push(e);
            weights.push(1.0 / (df * (df + 2.0)));
        }
    }
    let corner = 1.0 / df.sqrt();
    let wc = df / (2f64.powi(d as i32) * (df + 2.0));
    for mask in 0..(1usize << d) {
        points.push(
            (0..d)
                .map(|i| if mask >> i & 1 == 1 { -corner } else { corner })
                .collect(),
        );
        weights.push(wc);
    }
    SphereDesign {
        dim: d,
        points,
        weights,
    }
}

impl SphereDesign {
    /// The design with every point multiplied by the orthogonal matrix `q`
    /// (row-major `d × d`).
    pub fn rotated(&self, q: &[f64]) -> SphereDesign {
        let d = self.dim;
        let points = self
            .points
            .iter()
            .map(|p| {
                (0..d)
                    .map(|i| (0..d).map(|j| q[i * d + j] * p[j]).sum())
                    .collect()
            })
            .collect();
        SphereDesign {
            dim: d,
            points,
            weights: self.weights.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Haar-random orthogonal matrix (row-major) by Gram–Schmidt on Gaussian
/// columns.
pub fn random_rotation(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v = gaussian_vector(rng, d);
        for c in &cols {
            let dot: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= dot * ci;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let mut q = vec![0.0; d * d];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..d {
            q[i * d + j] = c[i];
        }
    }
    q
}

/// Largest Fibonacci pair `(F_k, F_{k-1})` with `F_k ≤ budget` (at least
/// `(13, 8)`).
fn fibonacci_below(budget: usize) -> (usize, usize) {
    let (mut a, mut b) = (8usize, 13usize);
    while a + b <= budget {
        let c = a + b;
        a = b;
        b = c;
    }
    (b, a)
}

/// Tent map, which makes a shifted lattice rule second-order accurate for
/// non-periodic integrands.
fn baker(u: f64) -> f64 {
    1.0 - (2.0 * u - 1.0).abs()
}

/// `u ∈ [0,1] ↦ (ρ, dρ/du)` on `[0, R]`.
fn radial_map(u: f64, radius: f64, scale: Option<f64>) -> (f64, f64) {
    match scale {
        Some(s) => {
            let l = (radius / s).ln_1p();
            let rho = s * (u * l).exp_m1();
            (rho, (rho + s) * l)
        }
        None => (radius * u, radius),
    }
}

/// `∫_{B⁺_R} f dx` over the half-ball `{|x| < R, x_n > 0}` in `ℝⁿ`.
///
/// Coordinates are `x = (ρ sinθ ω, ρ cosθ)` with `ω ∈ S^{n-2}`. The
/// `(ρ, θ)` integral uses a randomly shifted Fibonacci lattice with the
/// tent transform, and the `ω` integral a randomly rotated degree-5
/// design. Each replicate draws its own shift and rotation; the reported
/// error is the standard error across replicates.
pub fn halfball_qmc<F>(f: F, n: u32, radius: f64, cfg: &QuadratureConfig) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let est = halfball_qmc_multi(|x, out| out[0] = f(x), 1, n, radius, cfg)?;
    Ok(est[0])
}

/// [`halfball_qmc`] for `k` integrands sharing the same points. `f` writes
/// its `k` values into the output slice.
pub fn halfball_qmc_multi<F>(
    f: F,
    k: usize,
    n: u32,
    radius: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<McEstimate>>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    cfg.validate()?;
    let m = (n - 1) as usize;
    let base = design_points(m);
    let per_rep = cfg.mc_samples / cfg.replicates;
    let (big_n, gen) = fibonacci_below(per_rep / base.len());
    let sigma = sphere_area(n - 2);
    let mut reps: Vec<Vec<f64>> = Vec::with_capacity(cfg.replicates);
    for rep in 0..cfg.replicates {
        let mut rng = rng_for(cfg.seed, 1_000_000 + rep as u64);
        let shift: [f64; 2] = [rng.random(), rng.random()];
        let q = random_rotation(m, &mut rng);
        let design = base.rotated(&q);
        let chunks = big_n.div_ceil(CHUNK);
        let parts: Vec<Vec<f64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = vec![0.0; k];
                let mut out = vec![0.0; k];
                let mut x = vec![0.0; m + 1];
                for i in c * CHUNK..((c + 1) * CHUNK).min(big_n) {
                    let u = baker((i as f64 / big_n as f64 + shift[0]).fract());
                    let v = baker(((i * gen % big_n) as f64 / big_n as f64 + shift[1]).fract());
                    let (rho, jac) = radial_map(u, radius, cfg.radial_scale);
                    let th = v * FRAC_PI_2;
                    let (s, co) = th.sin_cos();
                    let vol = rho.powi(m as i32) * s.powi(m as i32 - 1) * jac;
                    if vol == 0.0 {
                        continue;
                    }
                    x[m] = rho * co;
                    for (p, w) in design.points.iter().zip(&design.weights) {
                        for j in 0..m {
                            x[j] = rho * s * p[j];
                        }
                        f(&x, &mut out);
                        for (a, o) in acc.iter_mut().zip(&out) {
                            *a += w * vol * o;
                        }
                    }
                }
                acc
            })
            .collect();
        let tot = pairwise_sum_vec(&parts, k);
        reps.push(
            tot.iter()
                .map(|t| sigma * FRAC_PI_2 * t / big_n as f64)
                .collect(),
        );
    }
    let samples = big_n * base.len() * cfg.replicates;
    Ok((0..k)
        .map(|j| mean_and_stderr(&reps.iter().map(|r| r[j]).collect::<Vec<_>>(), samples))
        .collect())
}

/// `∫_{B_R} f dx` over a ball in `ℝ^d`: a shifted one-dimensional lattice in
/// the radius (tent-transformed) times a rotated degree-5 design.
pub fn ball_qmc<F>(f: F, d: usize, radius: f64, cfg: &QuadratureConfig) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate()?;
    let base = design_points(d);
    let per_rep = (cfg.mc_samples / cfg.replicates / base.len()).max(16);
    let sigma = sphere_area(d as u32 - 1);
    let mut reps = Vec::with_capacity(cfg.replicates);
    for rep in 0..cfg.replicates {
        let mut rng = rng_for(cfg.seed, 2_000_000 + rep as u64);
        let shift: f64 = rng.random();
        let q = random_rotation(d, &mut rng);
        let design = base.rotated(&q);
        let chunks = per_rep.div_ceil(CHUNK);
        let parts: Vec<f64> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = 0.0;
                let mut x = vec![0.0; d];
                for i in c * CHUNK..((c + 1) * CHUNK).min(per_rep) {
                    let u = baker((i as f64 / per_rep as f64 + shift).fract());
                    let (rho, jac) = radial_map(u, radius, cfg.radial_scale);
                    let vol = rho.powi(d as i32 - 1) * jac;
                    if vol == 0.0 {
                        continue;
                    }
                    for (p, w) in design.points.iter().zip(&design.weights) {
                        for j in 0..d {
                            x[j] = rho * p[j];
                        }
                        acc += w * vol * f(&x);
                    }
                }
                acc
            })
            .collect();
        reps.push(sigma * pairwise_sum(&parts) / per_rep as f64);
    }
    Ok(mean_and_stderr(
        &reps,
        per_rep * base.len() * cfg.replicates,
    ))
}
