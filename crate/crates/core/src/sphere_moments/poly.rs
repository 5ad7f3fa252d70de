use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A homogeneous polynomial with rational coefficients.
///
/// Terms are keyed by exponent vectors whose entries sum to `degree`. Zero
/// coefficients are never stored, so the zero polynomial of any degree has an
/// empty term map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomPoly {
    nvars: usize,
    degree: u32,
    coeffs: BTreeMap<Vec<u32>, BigRational>,
}

impl HomPoly {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        HomPoly {
            nvars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars, 0);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `y_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, BigRational::from_integer(1.into()))
    }

    pub fn monomial(exps: Vec<u32>, c: BigRational) -> Self {
        let degree = exps.iter().sum();
        let mut p = Self::zero(exps.len(), degree);
        p.add_term(exps, c);
        p
    }

    /// `|y|² = y_1² + … + y_m²`.
    pub fn norm_squared(nvars: usize) -> Self {
        let mut p = Self::zero(nvars, 2);
        for i in 0..nvars {
            let mut e = vec![0; nvars];
            e[i] = 2;
            p.add_term(e, BigRational::from_integer(1.into()));
        }
        p
    }

    /// The quadratic form `Σ a_ij y_i y_j` of a square matrix.
    pub fn quadratic_form(a: &[Vec<BigRational>]) -> Self {
        let m = a.len();
        let mut p = Self::zero(m, 2);
        for (i, row) in a.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let mut e = vec![0; m];
                e[i] += 1;
                e[j] += 1;
                p.add_term(e, v.clone());
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.coeffs
            .get(exps)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Adds `c · y^exps`. Panics if the monomial has the wrong shape; that is
    /// a programming error, not a data error.
    pub fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        assert_eq!(exps.len(), self.nvars, "monomial arity");
        assert_eq!(exps.iter().sum::<u32>(), self.degree, "monomial degree");
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::InvalidInput(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        if self.degree != other.degree {
            return Err(Error::MixedDegree(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        if c.is_zero() {
            return out;
        }
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(e, v)| (e.clone(), v * c))
            .collect();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "polynomial arity");
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// `∂²p/∂y_i²`, as a polynomial of degree `degree - 2` (or the zero
    /// polynomial of degree 0 when `degree < 2`).
    fn second_partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.degree.saturating_sub(2));
        if self.degree < 2 {
            return out;
        }
        for (e, c) in &self.coeffs {
            let k = e[i];
            if k >= 2 {
                let mut f = e.clone();
                f[i] -= 2;
                out.add_term(f, c * BigInt::from(k * (k - 1)));
            }
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.nvars, self.degree.saturating_sub(2));
        for i in 0..self.nvars {
            for (e, c) in self.second_partial(i).coeffs {
                out.add_term(e, c);
            }
        }
        out
    }

    pub fn eval_f64(&self, y: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .map(|(e, c)| {
                let mono: f64 = e.iter().zip(y).map(|(&k, &v)| v.powi(k as i32)).product();
                c.to_f64().unwrap_or(f64::NAN) * mono
            })
            .sum()
    }

    /// Coefficients converted to `f64`, for repeated numerical evaluation.
    pub fn to_f64_terms(&self) -> Vec<(Vec<u32>, f64)> {
        self.coeffs
            .iter()
            .map(|(e, c)| (e.clone(), c.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "·y{}", i + 1)?,
                    _ => write!(f, "·y{}^{k}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}
