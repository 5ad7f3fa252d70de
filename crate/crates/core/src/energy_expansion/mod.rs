//! The ε⁴ coefficient of the test-function energy, its channel
//! cancellation, and the sign certificate.
//!
//! Every term is an exact integral from [`crate::exact_integrals`] times a
//! rational prefactor that is a polynomial in the amplitude `A`, attached to
//! one of four curvature channels:
//!
//! | channel | invariant                |
//! |---------|--------------------------|
//! | `S`     | `Σ (R_ninj)²`            |
//! | `W2`    | `Σ (W̄_ijkl)²`            |
//! | `D`     | `R_ninj;ij`              |
//! | `N2`    | `R_;nn`                  |
//!
//! For `n = 6` only the `log(δ/ε)` parts are kept.

mod apoly;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

pub use apoly::{eval_rational, APoly};

use crate::curvature_model::BoundaryCurvature;
use crate::error::{Error, Result};
use crate::exact_integrals::{expansion_integrals, find, Convergence, ScaledRational};
use crate::quadrature_oracle::{reduced_2d, reduced_2d_log, QuadratureConfig};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_rationals<S: Serializer>(q: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(q.iter().map(|v| v.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Channel {
    S,
    W2,
    D,
    N2,
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::S => "S",
            Channel::W2 => "W2",
            Channel::D => "D",
            Channel::N2 => "N2",
        })
    }
}

/// Order of the remainder left out of the expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ErrorClass {
    #[serde(rename = "eps^4 delta^-4")]
    Eps4DeltaM4,
    #[serde(rename = "eps^5 log")]
    Eps5Log,
    #[serde(rename = "eps^5")]
    Eps5,
}

impl ErrorClass {
    pub fn for_dimension(n: u32) -> Self {
        match n {
            6 => ErrorClass::Eps4DeltaM4,
            7 => ErrorClass::Eps5Log,
            _ => ErrorClass::Eps5,
        }
    }
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorClass::Eps4DeltaM4 => "O(ε⁴δ⁻⁴)",
            ErrorClass::Eps5Log => "O(ε⁵ log(δ/ε))",
            ErrorClass::Eps5 => "O(ε⁵)",
        })
    }
}

/// One summand: `prefactor(A) · integral · channel`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionTerm {
    pub integral: &'static str,
    pub channel: Channel,
    /// Rational prefactor, lowest power of `A` first.
    #[serde(serialize_with = "ser_rationals")]
    pub prefactor: Vec<BigRational>,
    pub value: APoly,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub n: u32,
    pub log_channel: bool,
    pub error_class: ErrorClass,
    pub terms: Vec<ExpansionTerm>,
    pub c_s: APoly,
    pub c_w2: APoly,
    pub c_d: APoly,
    pub c_n2: APoly,
    pub cancelled: bool,
}

impl ExpansionReport {
    pub fn channel(&self, ch: Channel) -> &APoly {
        match ch {
            Channel::S => &self.c_s,
            Channel::W2 => &self.c_w2,
            Channel::D => &self.c_d,
            Channel::N2 => &self.c_n2,
        }
    }

    fn channel_mut(&mut self, ch: Channel) -> &mut APoly {
        match ch {
            Channel::S => &mut self.c_s,
            Channel::W2 => &mut self.c_w2,
            Channel::D => &mut self.c_d,
            Channel::N2 => &mut self.c_n2,
        }
    }

    /// The channel sum `c_S S + c_W2 W2 + c_D D + c_N2 N2` at a given `A`.
    pub fn evaluate(&self, a: &BigRational, curv: &BoundaryCurvature) -> Result<ScaledRational> {
        let pairs = [
            (Channel::S, curv.s()),
            (Channel::W2, curv.w2()),
            (Channel::D, curv.d()),
            (Channel::N2, curv.n2().clone()),
        ];
        let mut acc = ScaledRational::zero();
        for (ch, v) in pairs {
            acc = acc.checked_add(&self.channel(ch).eval(a)?.mul_rational(&v)?)?;
        }
        Ok(acc)
    }
}

/// The rational prefactors of the eight summands, as
/// `(integral, channel, [A⁰, A¹, A²])`.
fn prefactors(n: u32) -> Vec<(&'static str, Channel, [BigRational; 3])> {
    let n = i64::from(n);
    let z = BigRational::zero;
    let pm = (n + 1) * (n - 1);
    vec![
        ("I1", Channel::S, [z(), z(), rat(-4, pm)]),
        ("I1", Channel::D, [rat((n - 2) * (n - 2), pm), z(), z()]),
        ("I2", Channel::S, [z(), z(), rat(8 * n, pm)]),
        ("I3", Channel::S, [z(), z(), rat(12 * n, pm)]),
        ("I3", Channel::S, [z(), rat(-4 * n * (n - 2), pm), z()]),
        (
            "I4",
            Channel::S,
            [rat((n - 2) * (n - 2), 2 * (n - 1)), z(), z()],
        ),
        ("I5", Channel::N2, [rat(n - 2, 8 * (n - 1)), z(), z()]),
        (
            "I6",
            Channel::W2,
            [rat(-(n - 2), 48 * (n - 1) * (n - 1)), z(), z()],
        ),
    ]
}

/// Assembles the ε⁴ coefficient of the energy with `A` symbolic. For
/// `n = 6` each integral contributes its `log(δ/ε)` coefficient, so the
/// finite `I2` drops out.
pub fn assemble_expansion(n: u32) -> Result<ExpansionReport> {
    let table = expansion_integrals(n)?;
    let log_channel = n == 6;
    let mut report = ExpansionReport {
        n,
        log_channel,
        error_class: ErrorClass::for_dimension(n),
        terms: Vec::new(),
        c_s: APoly::zero(),
        c_w2: APoly::zero(),
        c_d: APoly::zero(),
        c_n2: APoly::zero(),
        cancelled: false,
    };
    for (label, channel, pre) in prefactors(n) {
        let entry = find(&table, label).expect("table has I1..I6");
        let integral = if log_channel {
            entry.log_coefficient()?
        } else {
            entry.value.clone()
        };
        let mut value = APoly::zero();
        for (k, c) in pre.iter().enumerate() {
            value = value.checked_add(&APoly::monomial(integral.mul_rational(c)?, k))?;
        }
        let slot = report.channel_mut(channel);
        *slot = slot.checked_add(&value)?;
        report.terms.push(ExpansionTerm {
            integral: label,
            channel,
            prefactor: pre.to_vec(),
            value,
        });
    }
    Ok(report)
}

/// Substitutes `D = -N2/2 - S` and checks that both the `D` and `N2`
/// channels then vanish identically in `A`.
pub fn apply_cancellation(report: &ExpansionReport) -> Result<ExpansionReport> {
    if report.cancelled {
        return Ok(report.clone());
    }
    let mut out = report.clone();
    out.c_s = report.c_s.checked_sub(&report.c_d)?;
    out.c_n2 = report
        .c_n2
        .checked_sub(&report.c_d.mul_rational(&rat(1, 2))?)?;
    out.c_d = APoly::zero();
    if !out.c_n2.is_zero() {
        return Err(Error::CancellationFailure(format!(
            "N2 channel left with {} after substituting D = -N2/2 - S",
            out.c_n2
        )));
    }
    out.cancelled = true;
    Ok(out)
}

/// [`assemble_expansion`] followed by [`apply_cancellation`].
pub fn expansion(n: u32) -> Result<ExpansionReport> {
    apply_cancellation(&assemble_expansion(n)?)
}

/// `γ = 1/((n-1)(n-2)(n-3)(n-4)(n-5)(n-6))`.
pub fn gamma(n: u32) -> Result<BigRational> {
    if n < 7 {
        return Err(Error::PreconditionViolation(format!(
            "γ vanishes in its denominator for n = {n}"
        )));
    }
    let n = i64::from(n);
    Ok(rat(1, (1..=6).map(|k| n - k).product()))
}

/// The unit the `S` coefficient is quoted in: `γ σ I` for `n ≥ 7` and
/// `σ I log(δ/ε)` for `n = 6`.
pub fn normalization(n: u32) -> Result<ScaledRational> {
    if n == 6 {
        Ok(ScaledRational::sigma_i_log(BigRational::one()))
    } else {
        Ok(ScaledRational::sigma_i(gamma(n)?))
    }
}

fn require_supported_dimension(n: u32) -> Result<()> {
    if (6..=8).contains(&n) {
        Ok(())
    } else {
        Err(Error::PreconditionViolation(format!(
            "n = {n}: the sign statement covers n = 6, 7, 8 only"
        )))
    }
}

/// `P(A)`, the normalized `S` coefficient after cancellation, lowest power
/// first. Defined for every `n ≥ 6`.
pub fn p_polynomial(n: u32) -> Result<Vec<BigRational>> {
    let report = expansion(n)?;
    let mut coeffs = report.c_s.ratio_to(&normalization(n)?)?;
    coeffs.resize(3, BigRational::zero());
    Ok(coeffs)
}

/// `P(A)` at a rational `A`, for `n ∈ {6, 7, 8}`.
pub fn coefficient_at(n: u32, a: &BigRational) -> Result<BigRational> {
    require_supported_dimension(n)?;
    Ok(eval_rational(&p_polynomial(n)?, a))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalA {
    #[serde(rename = "A", serialize_with = "ser_rational")]
    pub a: BigRational,
    #[serde(rename = "P_value", serialize_with = "ser_rational")]
    pub p_value: BigRational,
    #[serde(rename = "P_at_one", serialize_with = "ser_rational")]
    pub p_at_one: BigRational,
}

/// Vertex of the upward parabola `P(A)`.
pub fn optimal_a(n: u32) -> Result<OptimalA> {
    require_supported_dimension(n)?;
    let p = p_polynomial(n)?;
    if !p[2].is_positive() {
        return Err(Error::IdentityMismatch(format!(
            "P(A) is not an upward parabola for n = {n}"
        )));
    }
    let a = -&p[1] / (&p[2] * rat(2, 1));
    let p_value = eval_rational(&p, &a);
    let p_at_one = eval_rational(&p, &BigRational::one());
    if p_value > p_at_one {
        return Err(Error::IdentityMismatch(format!(
            "P at the vertex exceeds P(1) for n = {n}"
        )));
    }
    Ok(OptimalA {
        a,
        p_value,
        p_at_one,
    })
}

/// Coefficient of `(W̄_ijkl)²`; independent of `A`.
pub fn w2_coefficient(n: u32) -> Result<ScaledRational> {
    expansion(n)?.c_w2.eval(&BigRational::zero())
}

/// Predicted change of the ε⁴ (or ε⁴ log) energy coefficient when the
/// amplitude moves from `a0` to `a1`, for the given curvature. Only the `S`
/// channel depends on `A`.
pub fn amplitude_drop(
    n: u32,
    curv: &BoundaryCurvature,
    a0: &BigRational,
    a1: &BigRational,
) -> Result<ScaledRational> {
    let c = expansion(n)?.c_s;
    c.eval(a1)?
        .checked_sub(&c.eval(a0)?)?
        .mul_rational(&curv.s())
}

/// Exact table entry against its numerical value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub label: &'static str,
    /// `quadrature` for a convergent integral, `fitted` for a log slope.
    pub provenance: &'static str,
    pub exact: f64,
    pub numeric: f64,
    pub error_bound: f64,
    pub rel_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Relative tolerance for convergent table entries.
pub const QUADRATURE_TOLERANCE: f64 = 1e-6;
/// Relative tolerance for fitted log slopes.
pub const LOG_SLOPE_TOLERANCE: f64 = 1e-2;
/// Radii `δ/ε` used to fit log slopes.
pub const LOG_FIT_RADII: [f64; 3] = [1e4, 1e5, 1e6];

/// Checks every entry of the integral table against
/// [`crate::quadrature_oracle`].
pub fn integral_residuals(n: u32, cfg: &QuadratureConfig) -> Result<Vec<Residual>> {
    let table = expansion_integrals(n)?;
    table
        .iter()
        .map(|e| {
            let (provenance, exact, numeric, error_bound, tolerance) = match e.spec.convergence() {
                Convergence::Convergent => {
                    let est = reduced_2d(e.spec, cfg)?;
                    (
                        "quadrature",
                        e.value.to_f64(n, 1.0)?,
                        est.value,
                        est.error,
                        QUADRATURE_TOLERANCE,
                    )
                }
                Convergence::LogDivergent => {
                    let fit = reduced_2d_log(e.spec, &LOG_FIT_RADII, cfg)?;
                    (
                        "fitted",
                        e.value.to_f64(n, 1.0)?,
                        fit.slope,
                        fit.slope_error,
                        LOG_SLOPE_TOLERANCE,
                    )
                }
                Convergence::Divergent => {
                    return Err(Error::PreconditionViolation(format!(
                        "{} diverges for n = {n}",
                        e.label
                    )))
                }
            };
            let rel_residual = (numeric - exact).abs() / exact.abs();
            Ok(Residual {
                label: e.label,
                provenance,
                exact,
                numeric,
                error_bound,
                rel_residual,
                tolerance,
                passed: rel_residual < tolerance,
            })
        })
        .collect()
}

/// The sign verdict for one dimension and one curvature dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub n: u32,
    #[serde(rename = "A_used", serialize_with = "ser_rational")]
    pub a_used: BigRational,
    /// `P(A_used)`, in units of [`Certificate::p_unit`].
    #[serde(rename = "P_value", serialize_with = "ser_rational")]
    pub p_value: BigRational,
    pub p_unit: String,
    #[serde(rename = "P_polynomial", serialize_with = "ser_rationals")]
    pub p_polynomial: Vec<BigRational>,
    #[serde(rename = "S_coefficient")]
    pub s_coefficient: ScaledRational,
    #[serde(rename = "W2_coefficient")]
    pub w2_coefficient: ScaledRational,
    #[serde(rename = "S", serialize_with = "ser_rational")]
    pub s: BigRational,
    #[serde(rename = "W2", serialize_with = "ser_rational")]
    pub w2: BigRational,
    /// `c_S S + c_W2 W2`, the full ε⁴ (or ε⁴ log) energy coefficient.
    pub energy_coefficient: ScaledRational,
    /// Channels with a nonzero invariant; nonempty whenever `W(x₀) ≠ 0`.
    pub active_channels: Vec<Channel>,
    pub optimal: OptimalA,
    pub error_class: ErrorClass,
    pub verdict: bool,
    pub quadrature_residuals: Vec<Residual>,
}

/// [`certify_with`] at `A = 1`.
pub fn certify(n: u32, curv: &BoundaryCurvature, cfg: &QuadratureConfig) -> Result<Certificate> {
    certify_with(n, curv, &BigRational::one(), cfg)
}

/// Certifies that the ε⁴ (or ε⁴ log) energy coefficient is strictly
/// negative for the given curvature, which must have `W(x₀) ≠ 0`.
pub fn certify_with(
    n: u32,
    curv: &BoundaryCurvature,
    a: &BigRational,
    cfg: &QuadratureConfig,
) -> Result<Certificate> {
    require_supported_dimension(n)?;
    if curv.n() != n {
        return Err(Error::InvalidInput(format!(
            "curvature data is for n = {}, not {n}",
            curv.n()
        )));
    }
    curv.validate()?;
    if !curv.weyl_nonzero() {
        return Err(Error::PreconditionViolation(
            "W(x₀) = 0: the certificate does not apply".into(),
        ));
    }
    let (s, w2) = (curv.s(), curv.w2());
    let mut active_channels = Vec::new();
    if s.is_positive() {
        active_channels.push(Channel::S);
    }
    if w2.is_positive() {
        active_channels.push(Channel::W2);
    }
    if active_channels.is_empty() {
        return Err(Error::IdentityMismatch("W(x₀) ≠ 0 but S = W2 = 0".into()));
    }
    let report = expansion(n)?;
    let unit = normalization(n)?;
    let p_polynomial = p_polynomial(n)?;
    let p_value = eval_rational(&p_polynomial, a);
    let s_coefficient = report.c_s.eval(a)?;
    let w2_coefficient = report.c_w2.eval(a)?;
    let energy_coefficient = report.evaluate(a, curv)?;
    let quadrature_residuals = integral_residuals(n, cfg)?;
    let verdict = p_value.is_negative()
        && w2_coefficient.signum()? == Ordering::Less
        && energy_coefficient.signum()? == Ordering::Less;
    Ok(Certificate {
        n,
        a_used: a.clone(),
        p_value,
        p_unit: unit.to_string(),
        p_polynomial,
        s_coefficient,
        w2_coefficient,
        s,
        w2,
        energy_coefficient,
        active_channels,
        optimal: optimal_a(n)?,
        error_class: report.error_class,
        verdict,
        quadrature_residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endgame_values() {
        assert_eq!(coefficient_at(7, &BigRational::one()).unwrap(), rat(-62, 1));
        assert_eq!(
            coefficient_at(8, &BigRational::one()).unwrap(),
            rat(-144, 1)
        );
        assert_eq!(coefficient_at(6, &BigRational::one()).unwrap(), rat(-2, 15));
        assert!(coefficient_at(9, &BigRational::one()).is_err());
    }

    #[test]
    fn cancellation_is_exact() {
        for n in 6..=10 {
            let r = expansion(n).unwrap();
            assert!(r.cancelled && r.c_d.is_zero() && r.c_n2.is_zero());
        }
    }

    #[test]
    fn six_dimensional_log_channel_drops_i2() {
        let r = assemble_expansion(6).unwrap();
        let i2 = r.terms.iter().find(|t| t.integral == "I2").unwrap();
        assert!(i2.value.is_zero());
        let r7 = assemble_expansion(7).unwrap();
        assert!(!r7
            .terms
            .iter()
            .find(|t| t.integral == "I2")
            .unwrap()
            .value
            .is_zero());
    }

    #[test]
    fn vertex() {
        assert_eq!(optimal_a(7).unwrap().a, rat(15, 16));
        assert_eq!(optimal_a(8).unwrap().a, rat(1, 1));
        assert_eq!(optimal_a(6).unwrap().a, rat(6, 7));
    }

    #[test]
    fn w2_coefficients_are_negative() {
        assert_eq!(
            w2_coefficient(7).unwrap(),
            ScaledRational::sigma_i(rat(-25, 576))
        );
        assert_eq!(
            w2_coefficient(8).unwrap(),
            ScaledRational::sigma_i(rat(-1, 70))
        );
        assert_eq!(
            w2_coefficient(6).unwrap(),
            ScaledRational::sigma_i_log(rat(-4, 45))
        );
    }

    #[test]
    fn zero_curvature_is_refused() {
        let c = BoundaryCurvature::zero(7).unwrap();
        let e = certify(7, &c, &QuadratureConfig::default()).unwrap_err();
        assert!(matches!(e, Error::PreconditionViolation(_)));
    }
}
