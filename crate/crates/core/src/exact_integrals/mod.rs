//! Exact reduction of the half-space integrals
//!
//! ```text
//! ∫_{ℝⁿ₊} y_n^a |ȳ|^b ((1+y_n)² + |ȳ|²)^{-c} dy
//! ```
//!
//! The substitution `ȳ = (1+y_n) z̄` splits every such integral into a
//! one-dimensional factor `∫₀^∞ t^a (1+t)^{-(2c-b-n+1)} dt` and a radial
//! factor `σ_{n-2} · J(b+n-2, c)`, where `J(α, m) = ∫₀^∞ s^α/(1+s²)^m ds`.
//! The first is a rational number, and the second is a rational multiple of
//! `σ_{n-2} · I` with `I = J(n, n)` whenever `α ≡ n (mod 2)`.

mod scaled;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

pub use scaled::{Scale, ScaledRational};

use crate::error::{Divergence, Error, Result};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `∫₀^∞ t^k/(1+t)^m dt = k!/((m-1)(m-2)···(m-1-k))`, valid for `m > k+1`.
pub fn unit_interval_power_integral(k: u32, m: i64) -> Result<BigRational> {
    let k = i64::from(k);
    if m == k + 1 {
        return Err(Error::DivergentIntegral(Divergence::Logarithmic));
    }
    if m < k + 1 {
        return Err(Error::DivergentIntegral(Divergence::Power));
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=k {
        num *= i;
    }
    for i in 1..=k + 1 {
        den *= m - i;
    }
    Ok(BigRational::new(num, den))
}

fn check_half_line(alpha: i64, m: i64) -> Result<()> {
    if alpha < 0 || m < 0 {
        return Err(Error::InvalidInput(format!(
            "J({alpha}, {m}) needs α, m ≥ 0"
        )));
    }
    if alpha + 1 >= 2 * m {
        let kind = if alpha + 1 == 2 * m {
            Divergence::Logarithmic
        } else {
            Divergence::Power
        };
        return Err(Error::DivergentIntegral(kind));
    }
    Ok(())
}

/// Writes `J(α, m) = q · J(p, p+1)` with `p = α mod 2`, returning `(q, p)`.
///
/// `α` is lowered two at a time with `J(α, m) = (α-1)/(2(m-1)) · J(α-2, m-1)`,
/// then `m` is lowered with `J(p, m) = (2m-p-3)/(2(m-1)) · J(p, m-1)`. Both
/// steps keep the pair convergent, so the chain always terminates at the
/// base case.
pub fn half_line_normal_form(alpha: i64, m: i64) -> Result<(BigRational, u32)> {
    check_half_line(alpha, m)?;
    let mut q = BigRational::one();
    let (mut a, mut m) = (alpha, m);
    while a >= 2 {
        q *= rat(a - 1, 2 * (m - 1));
        a -= 2;
        m -= 1;
    }
    while m > a + 1 {
        q *= rat(2 * m - a - 3, 2 * (m - 1));
        m -= 1;
    }
    Ok((q, a as u32))
}

/// The exact ratio `J(α₁, m₁) / J(α₂, m₂)`.
pub fn half_line_ratio(alpha1: i64, m1: i64, alpha2: i64, m2: i64) -> Result<BigRational> {
    check_half_line(alpha1, m1)?;
    check_half_line(alpha2, m2)?;
    if (alpha1 - alpha2).rem_euclid(2) != 0 {
        return Err(Error::ParityMismatch { alpha1, alpha2 });
    }
    let (q1, _) = half_line_normal_form(alpha1, m1)?;
    let (q2, _) = half_line_normal_form(alpha2, m2)?;
    Ok(q1 / q2)
}

/// Convergence class of an [`IntegralSpec`] over the whole half-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convergence {
    Convergent,
    /// The `y_n` factor decays like `1/y_n`; the truncated integral grows
    /// like `log(δ/ε)`.
    LogDivergent,
    Divergent,
}

/// `∫_{ℝⁿ₊} y_n^a |ȳ|^b ((1+y_n)² + |ȳ|²)^{-c} dy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct IntegralSpec {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub n: u32,
}

impl IntegralSpec {
    pub fn new(a: u32, b: u32, c: u32, n: u32) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidInput(
                "denominator power c must be positive".into(),
            ));
        }
        if n < 3 {
            return Err(Error::InvalidInput(format!("dimension {n} < 3")));
        }
        Ok(IntegralSpec { a, b, c, n })
    }

    /// Exponent `m` of `(1+t)^{-m}` in the `y_n` factor.
    pub fn normal_exponent(&self) -> i64 {
        2 * i64::from(self.c) - i64::from(self.b) - i64::from(self.n) + 1
    }

    /// `(α, m)` of the radial factor `J(α, m)`.
    pub fn radial_exponents(&self) -> (i64, i64) {
        (i64::from(self.b) + i64::from(self.n) - 2, i64::from(self.c))
    }

    pub fn convergence(&self) -> Convergence {
        let (alpha, m) = self.radial_exponents();
        if alpha + 1 >= 2 * m {
            return Convergence::Divergent;
        }
        let k = i64::from(self.a);
        let mn = self.normal_exponent();
        if mn > k + 1 {
            Convergence::Convergent
        } else if mn == k + 1 {
            Convergence::LogDivergent
        } else {
            Convergence::Divergent
        }
    }

    /// Pointwise value of the integrand at `(y_n, |ȳ|)`.
    pub fn integrand(&self, yn: f64, r: f64) -> f64 {
        let z = (1.0 + yn) * (1.0 + yn) + r * r;
        yn.powi(self.a as i32) * r.powi(self.b as i32) * z.powi(-(self.c as i32))
    }
}

/// Closed form of an [`IntegralSpec`] as a multiple of `σ_{n-2} · I`.
///
/// Log-divergent specs return the coefficient of `log(δ/ε)` (the integral
/// over the half-ball of radius `δ/ε`) with the log flag set; the O(1)
/// remainder is dropped.
pub fn halfspace_closed_form(spec: IntegralSpec) -> Result<ScaledRational> {
    let (alpha, m) = spec.radial_exponents();
    let n = i64::from(spec.n);
    check_half_line(alpha, m)?;
    if (alpha - n).rem_euclid(2) != 0 {
        return Err(Error::ParityMismatch {
            alpha1: alpha,
            alpha2: n,
        });
    }
    let radial = half_line_ratio(alpha, m, n, n)?;
    match unit_interval_power_integral(spec.a, spec.normal_exponent()) {
        Ok(normal) => Ok(ScaledRational::sigma_i(normal * radial)),
        Err(Error::DivergentIntegral(Divergence::Logarithmic)) => {
            // ∫₀^{L} t^k (1+t)^{-k-1} dt = log L + O(1)
            Ok(ScaledRational::sigma_i_log(radial))
        }
        Err(e) => Err(e),
    }
}

/// One row of the integral table used by the energy expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionIntegral {
    pub label: &'static str,
    pub spec: IntegralSpec,
    pub value: ScaledRational,
}

impl ExpansionIntegral {
    /// Coefficient of `log(δ/ε)`; zero for a convergent entry.
    pub fn log_coefficient(&self) -> Result<ScaledRational> {
        self.value.log_part()
    }
}

/// The six integrals of the ε⁴ expansion, keyed `I1`..`I6`:
///
/// | label | integrand                          | channel |
/// |-------|------------------------------------|---------|
/// | I1    | y_n² \|ȳ\|⁴ Z^{-n}                 | S, D    |
/// | I2    | y_n³ \|ȳ\|⁴ Z^{-n-1}               | S       |
/// | I3    | y_n⁴ \|ȳ\|⁴ Z^{-n-1}               | S       |
/// | I4    | y_n⁴ \|ȳ\|² Z^{-n}                 | S       |
/// | I5    | y_n² Z^{-n+2}                      | N2      |
/// | I6    | \|ȳ\|² Z^{-n+2}                    | W2      |
///
/// For `n ≥ 7` all six converge. For `n = 6` every entry except `I2` is
/// log-divergent and carries its `log(δ/ε)` coefficient; `I2` stays finite.
pub fn expansion_integrals(n: u32) -> Result<Vec<ExpansionIntegral>> {
    if n < 6 {
        return Err(Error::PreconditionViolation(format!(
            "n = {n}: the expansion needs n ≥ 6 (the (n-5)(n-6) denominators vanish or change sign)"
        )));
    }
    let table: [(&'static str, u32, u32, u32); 6] = [
        ("I1", 2, 4, n),
        ("I2", 3, 4, n + 1),
        ("I3", 4, 4, n + 1),
        ("I4", 4, 2, n),
        ("I5", 2, 0, n - 2),
        ("I6", 0, 2, n - 2),
    ];
    table
        .into_iter()
        .map(|(label, a, b, c)| {
            let spec = IntegralSpec::new(a, b, c, n)?;
            Ok(ExpansionIntegral {
                label,
                spec,
                value: halfspace_closed_form(spec)?,
            })
        })
        .collect()
}

/// Looks up an entry of [`expansion_integrals`] by label.
pub fn find<'a>(table: &'a [ExpansionIntegral], label: &str) -> Option<&'a ExpansionIntegral> {
    table.iter().find(|p| p.label == label)
}

/// `∫_{ℝ^{n-1}} U(x̄, 0)^{2(n-1)/(n-2)} dx̄ = σ_{n-2} · J(n-2, n-1)`, in units of `σ_{n-2} · I`.
pub fn boundary_bubble_integral(n: u32) -> Result<ScaledRational> {
    let n = i64::from(n);
    let q = half_line_ratio(n - 2, n - 1, n, n)?;
    Ok(ScaledRational::sigma_i(q))
}
