use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::exact_integrals::ScaledRational;

/// Polynomial in the amplitude `A` whose coefficients are exact scaled
/// values; `coeffs[k]` multiplies `A^k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct APoly {
    coeffs: Vec<ScaledRational>,
}

impl APoly {
    pub fn zero() -> Self {
        APoly { coeffs: Vec::new() }
    }

    /// `c · A^k`.
    pub fn monomial(c: ScaledRational, k: usize) -> Self {
        let mut coeffs = vec![ScaledRational::zero(); k + 1];
        coeffs[k] = c;
        APoly { coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(ScaledRational::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[ScaledRational] {
        &self.coeffs
    }

    /// Coefficient of `A^k`.
    pub fn coeff(&self, k: usize) -> ScaledRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(ScaledRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| self.coeff(k).checked_add(&other.coeff(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(APoly { coeffs }.trimmed())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.mul_rational(&-BigRational::one())?)
    }

    pub fn mul_rational(&self, r: &BigRational) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.mul_rational(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(APoly { coeffs }.trimmed())
    }

    /// Value at a rational `A`, by Horner's rule.
    pub fn eval(&self, a: &BigRational) -> Result<ScaledRational> {
        let mut acc = ScaledRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_rational(a)?.checked_add(c)?;
        }
        Ok(acc)
    }

    /// Divides every coefficient by a common scaled unit.
    pub fn ratio_to(&self, unit: &ScaledRational) -> Result<Vec<BigRational>> {
        let scale = unit.scale();
        self.coeffs
            .iter()
            .map(|c| Ok(c.ratio_to(scale)? / unit.q()))
            .collect()
    }
}

impl fmt::Display for APoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})·A"),
                _ => format!("({c})·A^{k}"),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl Serialize for APoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

/// Rational polynomial coefficients, lowest degree first.
pub fn eval_rational(coeffs: &[BigRational], a: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * a + c)
}
