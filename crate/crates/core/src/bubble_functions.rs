//! The bubble `U_ε`, its perturbation `φ_ε`, the cutoff `χ` and the test
//! function `ψ = χ(|x|)(U_ε + φ_ε)`, all evaluated in closed form.
//!
//! Points are slices `x = (x̄, x_n)` of length `n`; the last coordinate is
//! the normal one. Throughout, `Z_ε(x) = |x̄|² + (ε + x_n)²`.

use serde::Serialize;

use crate::curvature_model::BoundaryCurvature;
use crate::error::{Error, Result};
use crate::exact_integrals::{boundary_bubble_integral, ScaledRational};

/// Default inner cutoff radius.
pub const DEFAULT_DELTA: f64 = 0.25;

#[derive(Debug, Clone)]
pub struct BubbleParams {
    pub n: u32,
    pub eps: f64,
    pub a: f64,
    pub delta: f64,
    /// `R_ninj`, row-major `m × m`.
    rn: Vec<f64>,
}

/// Values and gradients of `U_ε` and `φ_ε` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointValues {
    pub u: f64,
    pub grad_u: Vec<f64>,
    pub phi: f64,
    pub grad_phi: Vec<f64>,
}

impl BubbleParams {
    pub fn new(n: u32, eps: f64, a: f64, delta: f64, curv: &BoundaryCurvature) -> Result<Self> {
        if curv.n() != n {
            return Err(Error::InvalidInput(format!(
                "curvature is for n = {}, bubble for n = {n}",
                curv.n()
            )));
        }
        if !(eps > 0.0 && delta > 0.0) {
            return Err(Error::InvalidInput("ε and δ must be positive".into()));
        }
        Ok(BubbleParams {
            n,
            eps,
            a,
            delta,
            rn: curv.rn().to_f64(),
        })
    }

    /// Bubble with no curvature attached (`φ ≡ 0`).
    pub fn flat(n: u32, eps: f64, delta: f64) -> Self {
        let m = (n - 1) as usize;
        BubbleParams {
            n,
            eps,
            a: 0.0,
            delta,
            rn: vec![0.0; m * m],
        }
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        BubbleParams {
            eps,
            ..self.clone()
        }
    }

    pub fn with_a(&self, a: f64) -> Self {
        BubbleParams { a, ..self.clone() }
    }

    fn m(&self) -> usize {
        (self.n - 1) as usize
    }

    fn k(&self) -> f64 {
        (f64::from(self.n) - 2.0) / 2.0
    }

    fn z(&self, x: &[f64]) -> f64 {
        let m = self.m();
        let r2: f64 = x[..m].iter().map(|v| v * v).sum();
        r2 + (self.eps + x[m]).powi(2)
    }

    /// `R_ninj x_i x_j` and `(R x̄)_i`.
    fn rn_form(&self, xbar: &[f64]) -> (f64, Vec<f64>) {
        let m = self.m();
        let mut rx = vec![0.0; m];
        let mut q = 0.0;
        for i in 0..m {
            let row = &self.rn[i * m..(i + 1) * m];
            let s: f64 = row.iter().zip(xbar).map(|(a, b)| a * b).sum();
            rx[i] = s;
            q += s * xbar[i];
        }
        (q, rx)
    }

    /// `U_ε(x) = (ε / Z_ε)^{(n-2)/2}`.
    pub fn u(&self, x: &[f64]) -> f64 {
        (self.eps / self.z(x)).powf(self.k())
    }

    pub fn grad_u(&self, x: &[f64]) -> Vec<f64> {
        let m = self.m();
        let z = self.z(x);
        let u = (self.eps / z).powf(self.k());
        let c = -2.0 * self.k() * u / z;
        let mut g: Vec<f64> = x[..m].iter().map(|v| c * v).collect();
        g.push(c * (self.eps + x[m]));
        g
    }

    /// The individual second derivatives `∂_aa U_ε`, whose sum is `ΔU_ε`.
    pub fn second_partials_u(&self, x: &[f64]) -> Vec<f64> {
        let m = self.m();
        let z = self.z(x);
        let k = self.k();
        let u = (self.eps / z).powf(k);
        let w = |a: usize| if a < m { x[a] } else { self.eps + x[m] };
        (0..=m)
            .map(|a| -2.0 * k * u / z + 4.0 * k * (k + 1.0) * u * w(a) * w(a) / (z * z))
            .collect()
    }

    /// `ΔU_ε` relative to the size of its terms.
    pub fn laplacian_u_residual(&self, x: &[f64]) -> f64 {
        let parts = self.second_partials_u(x);
        let sum: f64 = parts.iter().sum();
        let scale: f64 = parts.iter().map(|v| v.abs()).sum();
        if scale == 0.0 {
            0.0
        } else {
            sum.abs() / scale
        }
    }

    /// `∂U/∂x_n + (n-2) U^{n/(n-2)}` at the boundary point `(x̄, 0)`,
    /// relative to `(n-2) U^{n/(n-2)}`.
    pub fn boundary_residual(&self, xbar: &[f64]) -> f64 {
        let mut x = xbar.to_vec();
        x.push(0.0);
        let n = f64::from(self.n);
        let dn = self.grad_u(&x)[self.m()];
        let nonlinear = (n - 2.0) * self.u(&x).powf(n / (n - 2.0));
        (dn + nonlinear).abs() / nonlinear
    }

    /// `φ_ε(x) = ε^{(n-2)/2} A R_ninj x_i x_j x_n² Z_ε^{-n/2}`.
    pub fn phi(&self, x: &[f64]) -> f64 {
        let m = self.m();
        let (q, _) = self.rn_form(&x[..m]);
        let n = f64::from(self.n);
        self.eps.powf(self.k()) * self.a * q * x[m] * x[m] * self.z(x).powf(-n / 2.0)
    }

    pub fn grad_phi(&self, x: &[f64]) -> Vec<f64> {
        self.values(x).grad_phi
    }

    /// `Δφ_ε(x) = ε^{-(n-2)/2} (Δφ)(x/ε)`, via [`laplacian_phi_rescaled`].
    pub fn laplacian_phi(&self, x: &[f64]) -> f64 {
        let y: Vec<f64> = x.iter().map(|v| v / self.eps).collect();
        self.eps.powf(-self.k()) * self.laplacian_phi_rescaled(&y)
    }

    /// `φ(y) = A R_ninj y_i y_j y_n² ((1+y_n)² + |ȳ|²)^{-n/2}`.
    pub fn phi_rescaled(&self, y: &[f64]) -> f64 {
        let m = self.m();
        let (q, _) = self.rn_form(&y[..m]);
        let n = f64::from(self.n);
        let r2: f64 = y[..m].iter().map(|v| v * v).sum();
        let z = (1.0 + y[m]).powi(2) + r2;
        self.a * q * y[m] * y[m] * z.powf(-n / 2.0)
    }

    /// `Δφ(y) = A R_ninj y_i y_j [2 Z^{-n/2} - 4n y_n Z^{-(n+2)/2} - 6n y_n² Z^{-(n+2)/2}]`.
    pub fn laplacian_phi_rescaled(&self, y: &[f64]) -> f64 {
        let [t1, t2, t3] = self.laplacian_phi_terms(y);
        t1 + t2 + t3
    }

    /// The three terms of [`BubbleParams::laplacian_phi_rescaled`] separately.
    pub fn laplacian_phi_terms(&self, y: &[f64]) -> [f64; 3] {
        let m = self.m();
        let (q, _) = self.rn_form(&y[..m]);
        let n = f64::from(self.n);
        let r2: f64 = y[..m].iter().map(|v| v * v).sum();
        let yn = y[m];
        let z = (1.0 + yn).powi(2) + r2;
        let aq = self.a * q;
        [
            2.0 * aq * z.powf(-n / 2.0),
            -4.0 * n * aq * yn * z.powf(-(n + 2.0) / 2.0),
            -6.0 * n * aq * yn * yn * z.powf(-(n + 2.0) / 2.0),
        ]
    }

    /// `U_ε`, `φ_ε` and both gradients in one pass.
    pub fn values(&self, x: &[f64]) -> PointValues {
        let m = self.m();
        let n = f64::from(self.n);
        let k = self.k();
        let xbar = &x[..m];
        let xn = x[m];
        let z = self.z(x);
        let w_n = self.eps + xn;

        let u = (self.eps / z).powf(k);
        let cu = -2.0 * k * u / z;
        let mut grad_u: Vec<f64> = xbar.iter().map(|v| cu * v).collect();
        grad_u.push(cu * w_n);

        if self.a == 0.0 {
            return PointValues {
                u,
                grad_u,
                phi: 0.0,
                grad_phi: vec![0.0; m + 1],
            };
        }
        let (q, rx) = self.rn_form(xbar);
        // φ = c q x_n² Z^{-n/2}, c = A ε^k
        let c = self.a * self.eps.powf(k);
        let zp = z.powf(-n / 2.0);
        let phi = c * q * xn * xn * zp;
        let dz = -n * phi / z;
        let mut grad_phi: Vec<f64> = (0..m)
            .map(|i| c * 2.0 * rx[i] * xn * xn * zp + dz * xbar[i])
            .collect();
        grad_phi.push(c * q * 2.0 * xn * zp + dz * w_n);
        PointValues {
            u,
            grad_u,
            phi,
            grad_phi,
        }
    }

    /// `ψ(x) = χ(|x|)(U_ε + φ_ε)`.
    pub fn psi(&self, x: &[f64]) -> f64 {
        let r = norm(x);
        let c = chi(r, self.delta);
        if c == 0.0 {
            return 0.0;
        }
        c * (self.u(x) + self.phi(x))
    }

    pub fn grad_psi(&self, x: &[f64]) -> Vec<f64> {
        let r = norm(x);
        let v = self.values(x);
        let c = chi(r, self.delta);
        let dc = chi_prime(r, self.delta);
        let f = v.u + v.phi;
        (0..x.len())
            .map(|a| {
                let radial = if r > 0.0 { x[a] / r } else { 0.0 };
                dc * radial * f + c * (v.grad_u[a] + v.grad_phi[a])
            })
            .collect()
    }
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Cutoff: `1` on `[0, δ]`, `0` on `[2δ, ∞)`, and on `[δ, 2δ]` the quintic
/// `1 - (10t³ - 15t⁴ + 6t⁵)` with `t = (r-δ)/δ`. It is `C²`, monotone, and
/// `|χ'| ≤ 15/(8δ)`.
pub fn chi(r: f64, delta: f64) -> f64 {
    let t = ((r - delta) / delta).clamp(0.0, 1.0);
    1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
}

pub fn chi_prime(r: f64, delta: f64) -> f64 {
    let t = (r - delta) / delta;
    if !(0.0..=1.0).contains(&t) {
        return 0.0;
    }
    -30.0 * t * t * (1.0 - t) * (1.0 - t) / delta
}

/// `Q(Bⁿ, ∂B) = (n-2) (∫_{∂ℝⁿ₊} U^{2(n-1)/(n-2)} dx̄)^{1/(n-1)}` with the
/// boundary integral `σ_{n-2} J(n-2, n-1)` kept exact.
#[derive(Debug, Clone, Serialize)]
pub struct SharpConstant {
    pub n: u32,
    /// `∫_{∂ℝⁿ₊} U^{2(n-1)/(n-2)}` as a multiple of `σ_{n-2} I`.
    pub boundary_integral: ScaledRational,
    pub boundary_integral_value: f64,
    pub value: f64,
}

pub fn sharp_constant(n: u32) -> Result<SharpConstant> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("dimension {n} < 3")));
    }
    let b = boundary_bubble_integral(n)?;
    let bv = b.to_f64(n, 1.0)?;
    Ok(SharpConstant {
        n,
        boundary_integral: b,
        boundary_integral_value: bv,
        value: (f64::from(n) - 2.0) * bv.powf(1.0 / (f64::from(n) - 1.0)),
    })
}
