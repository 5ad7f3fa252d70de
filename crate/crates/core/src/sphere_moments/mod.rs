//! Integration of homogeneous polynomials over spheres `S_r ⊂ ℝ^{n-1}` and
//! the spherical averages of the metric and scalar-curvature jets.
//!
//! The reduction rests on
//!
//! ```text
//! ∫_{S_r} p_k = r² / (k(k+n-3)) · ∫_{S_r} Δp_k
//! ```
//!
//! for `p_k` homogeneous of degree `k ≥ 1`, which terminates at a constant
//! after `k/2` steps (odd degrees integrate to zero).

mod poly;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

pub use poly::HomPoly;

use crate::curvature_model::{scalar_curvature_terms, BoundaryCurvature};
use crate::error::{Error, Result};
use crate::numeric::sphere_area;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `coeff · σ_{m-1} · r^{r_pow}` with `m` the number of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereIntegral {
    pub coeff: BigRational,
    pub r_pow: u32,
    pub nvars: usize,
}

impl SphereIntegral {
    pub fn to_f64(&self, r: f64) -> f64 {
        self.coeff.to_f64().unwrap_or(f64::NAN)
            * sphere_area(self.nvars as u32 - 1)
            * r.powi(self.r_pow as i32)
    }
}

/// Exact `∫_{S_r} p dσ` for `p` homogeneous in `m = n-1` variables.
pub fn sphere_integral(p: &HomPoly) -> SphereIntegral {
    let m = p.nvars();
    let k = p.degree();
    let r_pow = m as u32 - 1 + k;
    if k % 2 == 1 || p.is_zero() {
        return SphereIntegral {
            coeff: BigRational::zero(),
            r_pow,
            nvars: m,
        };
    }
    let mut factor = BigRational::from_integer(1.into());
    let mut cur = p.clone();
    while cur.degree() > 0 {
        let d = i64::from(cur.degree());
        factor *= rat(1, d * (d + m as i64 - 2));
        cur = cur.laplacian();
        if cur.is_zero() {
            return SphereIntegral {
                coeff: BigRational::zero(),
                r_pow,
                nvars: m,
            };
        }
    }
    SphereIntegral {
        coeff: factor * cur.coeff(&vec![0; m]),
        r_pow,
        nvars: m,
    }
}

/// Exponents of one term `σ · q · ε^{eps_pow} · y_n^{yn_pow} · r^{n + r_offset}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MomentKey {
    pub eps_pow: u32,
    pub yn_pow: u32,
    pub r_offset: i32,
}

/// A finite sum of [`MomentKey`] terms with exact coefficients (in units of
/// `σ_{n-2}`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MomentExpansion {
    terms: BTreeMap<MomentKey, BigRational>,
}

impl MomentExpansion {
    pub fn add(&mut self, key: MomentKey, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(BigRational::zero);
        *slot += q;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn get(&self, key: MomentKey) -> BigRational {
        self.terms
            .get(&key)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MomentKey, &BigRational)> {
        self.terms.iter()
    }

    /// The part of exact order `ε^k`.
    pub fn at_order(&self, k: u32) -> Self {
        self.filter(|key| key.eps_pow == k)
    }

    fn filter(&self, f: impl Fn(&MomentKey) -> bool) -> Self {
        MomentExpansion {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| f(k))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Numerical value at `(ε, y_n, r)` in dimension `n`.
    pub fn eval(&self, n: u32, eps: f64, yn: f64, r: f64) -> f64 {
        let sigma = sphere_area(n - 2);
        self.terms
            .iter()
            .map(|(k, q)| {
                q.to_f64().unwrap_or(f64::NAN)
                    * sigma
                    * eps.powi(k.eps_pow as i32)
                    * yn.powi(k.yn_pow as i32)
                    * r.powi(n as i32 + k.r_offset)
            })
            .sum()
    }
}

impl fmt::Display for MomentExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, q)| {
                format!(
                    "({q})·σ·ε^{}·y_n^{}·r^(n{:+})",
                    k.eps_pow, k.yn_pow, k.r_offset
                )
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for MomentExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            #[serde(flatten)]
            key: &'a MomentKey,
            q: String,
        }
        let v: Vec<Term> = self
            .terms
            .iter()
            .map(|(key, q)| Term {
                key,
                q: q.to_string(),
            })
            .collect();
        v.serialize(s)
    }
}

/// One spherical average evaluated two ways.
#[derive(Debug, Clone, Serialize)]
pub struct MomentCheck {
    /// Power of `ε` of the leading term.
    pub order: u32,
    /// Leading part from integrating the explicit jet.
    pub from_jet: MomentExpansion,
    /// Leading part from the closed form in the channels `S, W2, D, N2`.
    pub closed_form: MomentExpansion,
    /// Higher-order terms of the truncated jet; these sit inside the
    /// remainder and are reported, not compared.
    pub dropped: MomentExpansion,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureMoments {
    /// `∫_{S_r} (g^{ij} - δ^{ij})(εy) y_i y_j`.
    pub metric: MomentCheck,
    /// `∫_{S_r} (g^{ij} - δ^{ij})(εy) R_nknl y_i y_j y_k y_l`.
    pub weighted: MomentCheck,
    /// `∫_{S_r} R_g(εy)`.
    pub scalar: MomentCheck,
}

fn split(
    name: &str,
    full: MomentExpansion,
    order: u32,
    closed_form: MomentExpansion,
) -> Result<MomentCheck> {
    let lower = full.filter(|k| k.eps_pow < order);
    if !lower.is_zero() {
        return Err(Error::IdentityMismatch(format!(
            "{name}: unexpected terms below order ε^{order}: {lower}"
        )));
    }
    let from_jet = full.at_order(order);
    if from_jet != closed_form {
        return Err(Error::IdentityMismatch(format!(
            "{name}: jet gives {from_jet}, closed form gives {closed_form}"
        )));
    }
    Ok(MomentCheck {
        order,
        from_jet,
        closed_form,
        dropped: full.filter(|k| k.eps_pow > order),
    })
}

/// Integrates the order-4 metric jet and the scalar-curvature jet over
/// `S_r`, and checks the leading terms against
///
/// ```text
/// metric:   σ ε⁴ [ y_n² r^{n+2} D/((n+1)(n-1)) + y_n⁴ r^n S/(2(n-1)) ]
/// weighted: σ ε² y_n² r^{n+2} · 2S/((n+1)(n-1))
/// scalar:   σ ε² [ ½ y_n² r^{n-2} N2 - r^n W2/(12(n-1)) ]
/// ```
pub fn curvature_moments(curv: &BoundaryCurvature) -> Result<CurvatureMoments> {
    curv.validate()?;
    let n = i64::from(curv.n());
    let m = curv.m();
    let jet = curv.metric_inverse_jet(4)?;

    // Σ_ij (g^{ij}-δ^{ij}) y_i y_j grouped by (x_n power, x̄ degree)
    let mut contracted: BTreeMap<(u32, u32), HomPoly> = BTreeMap::new();
    for ((i, j), term) in jet.entries() {
        let yy = HomPoly::var(m, i).mul(&HomPoly::var(m, j));
        let p = term.poly.mul(&yy);
        let key = (term.xn_pow, term.poly.degree());
        let slot = contracted
            .entry(key)
            .or_insert_with(|| HomPoly::zero(m, p.degree()));
        *slot = slot.checked_add(&p)?;
    }

    let weight = HomPoly::quadratic_form(&curv.rn().rows());
    let mut metric = MomentExpansion::default();
    let mut weighted = MomentExpansion::default();
    for (&(a, k), p) in &contracted {
        let key = MomentKey {
            eps_pow: a + k,
            yn_pow: a,
            r_offset: k as i32,
        };
        metric.add(key, sphere_integral(p).coeff);
        let key = MomentKey {
            r_offset: k as i32 + 2,
            ..key
        };
        weighted.add(key, sphere_integral(&p.mul(&weight)).coeff);
    }

    let mut scalar = MomentExpansion::default();
    for term in scalar_curvature_terms(curv) {
        let k = term.poly.degree();
        let key = MomentKey {
            eps_pow: term.xn_pow + k,
            yn_pow: term.xn_pow,
            r_offset: k as i32 - 2,
        };
        scalar.add(key, sphere_integral(&term.poly).coeff);
    }

    let key = |e, a, r| MomentKey {
        eps_pow: e,
        yn_pow: a,
        r_offset: r,
    };
    let np1nm1 = (n + 1) * (n - 1);
    let mut metric_cf = MomentExpansion::default();
    metric_cf.add(key(4, 2, 2), curv.d() * rat(1, np1nm1));
    metric_cf.add(key(4, 4, 0), curv.s() * rat(1, 2 * (n - 1)));
    let mut weighted_cf = MomentExpansion::default();
    weighted_cf.add(key(2, 2, 2), curv.s() * rat(2, np1nm1));
    let mut scalar_cf = MomentExpansion::default();
    scalar_cf.add(key(2, 2, -2), curv.n2() * rat(1, 2));
    scalar_cf.add(key(2, 0, 0), curv.w2() * rat(-1, 12 * (n - 1)));

    Ok(CurvatureMoments {
        metric: split("metric average", metric, 4, metric_cf)?,
        weighted: split("R_nknl-weighted average", weighted, 2, weighted_cf)?,
        scalar: split("scalar curvature average", scalar, 2, scalar_cf)?,
    })
}
