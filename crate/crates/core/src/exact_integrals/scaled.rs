//! Exact values of the form `q · σ^p · I^s`, optionally times `log(δ/ε)`.
//!
//! `σ` is the area of the unit sphere `S^{n-2}` and `I = ∫₀^∞ r^n/(1+r²)^n dr`.
//! Both stay symbolic; [`ScaledRational::to_f64`] instantiates them.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric;

/// The transcendental part of a [`ScaledRational`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Scale {
    pub sigma_pow: i32,
    pub i_pow: i32,
    pub log: bool,
}

impl Scale {
    pub const ONE: Scale = Scale {
        sigma_pow: 0,
        i_pow: 0,
        log: false,
    };

    /// `σ_{n-2} · I`, the unit every half-space integral is expressed in.
    pub const SIGMA_I: Scale = Scale {
        sigma_pow: 1,
        i_pow: 1,
        log: false,
    };

    pub const SIGMA_I_LOG: Scale = Scale {
        sigma_pow: 1,
        i_pow: 1,
        log: true,
    };
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.sigma_pow {
            0 => {}
            1 => parts.push("σ".to_string()),
            p => parts.push(format!("σ^{p}")),
        }
        match self.i_pow {
            0 => {}
            1 => parts.push("I".to_string()),
            p => parts.push(format!("I^{p}")),
        }
        if self.log {
            parts.push("log(δ/ε)".to_string());
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("·"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaledRational {
    q: BigRational,
    scale: Scale,
    divergent: bool,
}

impl ScaledRational {
    pub fn new(q: BigRational, scale: Scale) -> Self {
        if q.is_zero() {
            Self::zero()
        } else {
            ScaledRational {
                q,
                scale,
                divergent: false,
            }
        }
    }

    pub fn zero() -> Self {
        ScaledRational {
            q: BigRational::zero(),
            scale: Scale::ONE,
            divergent: false,
        }
    }

    pub fn rational(q: BigRational) -> Self {
        Self::new(q, Scale::ONE)
    }

    /// `q · σ_{n-2} · I`.
    pub fn sigma_i(q: BigRational) -> Self {
        Self::new(q, Scale::SIGMA_I)
    }

    /// `q · σ_{n-2} · I · log(δ/ε)`.
    pub fn sigma_i_log(q: BigRational) -> Self {
        Self::new(q, Scale::SIGMA_I_LOG)
    }

    /// Marker for a non-logarithmically divergent integral.
    pub fn divergent() -> Self {
        ScaledRational {
            q: BigRational::zero(),
            scale: Scale::ONE,
            divergent: true,
        }
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn sigma_pow(&self) -> i32 {
        self.scale.sigma_pow
    }

    pub fn i_pow(&self) -> i32 {
        self.scale.i_pow
    }

    pub fn log_flag(&self) -> bool {
        self.scale.log
    }

    pub fn is_divergent(&self) -> bool {
        self.divergent
    }

    pub fn is_zero(&self) -> bool {
        !self.divergent && self.q.is_zero()
    }

    fn finite(&self) -> Result<()> {
        if self.divergent {
            Err(Error::DivergentArithmetic)
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.finite()?;
        other.finite()?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.scale != other.scale {
            return Err(Error::ScaleMismatch(
                self.scale.to_string(),
                other.scale.to_string(),
            ));
        }
        Ok(Self::new(&self.q + &other.q, self.scale))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg()?)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.finite()?;
        other.finite()?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        if self.scale.log && other.scale.log {
            return Err(Error::ScaleMismatch(
                self.scale.to_string(),
                other.scale.to_string(),
            ));
        }
        let scale = Scale {
            sigma_pow: self.scale.sigma_pow + other.scale.sigma_pow,
            i_pow: self.scale.i_pow + other.scale.i_pow,
            log: self.scale.log || other.scale.log,
        };
        Ok(Self::new(&self.q * &other.q, scale))
    }

    pub fn mul_rational(&self, r: &BigRational) -> Result<Self> {
        self.finite()?;
        Ok(Self::new(&self.q * r, self.scale))
    }

    pub fn neg(&self) -> Result<Self> {
        self.finite()?;
        Ok(Self::new(-&self.q, self.scale))
    }

    /// The log(δ/ε) coefficient: itself when log-flagged, zero for a
    /// finite value (which only contributes to the O(1) remainder).
    pub fn log_part(&self) -> Result<Self> {
        self.finite()?;
        if self.scale.log {
            Ok(self.clone())
        } else {
            Ok(Self::zero())
        }
    }

    /// Sign of the value. σ, I and log(δ/ε) (for δ > ε) are all positive.
    pub fn signum(&self) -> Result<Ordering> {
        self.finite()?;
        Ok(self.q.cmp(&BigRational::zero()))
    }

    /// Instantiates σ_{n-2}, I (for dimension `n`) and the logarithm.
    pub fn to_f64(&self, n: u32, log_value: f64) -> Result<f64> {
        self.finite()?;
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let sigma = numeric::sphere_area(n - 2);
        let i = numeric::i_value(n);
        let mut v = q * sigma.powi(self.scale.sigma_pow) * i.powi(self.scale.i_pow);
        if self.scale.log {
            v *= log_value;
        }
        Ok(v)
    }

    /// Divides out a common scale, returning the bare rational.
    pub fn ratio_to(&self, scale: Scale) -> Result<BigRational> {
        self.finite()?;
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        if self.scale != scale {
            return Err(Error::ScaleMismatch(
                self.scale.to_string(),
                scale.to_string(),
            ));
        }
        Ok(self.q.clone())
    }
}

impl fmt::Display for ScaledRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.divergent {
            return f.write_str("divergent");
        }
        if self.scale == Scale::ONE {
            return write!(f, "{}", self.q);
        }
        if self.q.is_one() {
            write!(f, "{}", self.scale)
        } else if self.q.is_negative() && (-&self.q).is_one() {
            write!(f, "-{}", self.scale)
        } else {
            write!(f, "{}·{}", self.q, self.scale)
        }
    }
}

impl Serialize for ScaledRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ScaledRational", 5)?;
        st.serialize_field("q", &self.q.to_string())?;
        st.serialize_field("sigma_pow", &self.scale.sigma_pow)?;
        st.serialize_field("I_pow", &self.scale.i_pow)?;
        st.serialize_field("log_flag", &self.scale.log)?;
        st.serialize_field("divergent", &self.divergent)?;
        st.end()
    }
}
