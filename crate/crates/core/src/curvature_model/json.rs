//! JSON form of [`BoundaryCurvature`]:
//!
//! ```json
//! {"n": 7, "Rn": [[...]], "Wbar": {"1212": "1/2"}, "N2": 0.3, "jets": {"Rn_kl": {"1122": -1}}}
//! ```
//!
//! Indices are 1-based digits. Values are JSON numbers (decimal literals are
//! read exactly) or strings `"p/q"`. Sparse tensors are completed by their
//! symmetries; an entry contradicting another raises `SymmetryViolation`.
//! Matrix-valued jets (`Rn_n`, `Rn_nn`, `R_ij`) use the same nested-array form
//! as `Rn`. Missing `Rn`, `Wbar`, `N2` are zero; missing jets take their
//! default completions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Zero};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::{BoundaryCurvature, Jets, Tensor};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurvatureFile {
    n: u32,
    #[serde(rename = "Rn", default)]
    rn: Option<Vec<Vec<Value>>>,
    #[serde(rename = "Wbar", default)]
    wbar: Option<BTreeMap<String, Value>>,
    #[serde(rename = "N2", default)]
    n2: Option<Value>,
    #[serde(default)]
    jets: Option<JetsFile>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct JetsFile {
    #[serde(rename = "Rbar")]
    rbar: Option<BTreeMap<String, Value>>,
    #[serde(rename = "Rn_k")]
    rn_k: Option<BTreeMap<String, Value>>,
    #[serde(rename = "Rn_n")]
    rn_n: Option<Vec<Vec<Value>>>,
    #[serde(rename = "Rn_kl")]
    rn_kl: Option<BTreeMap<String, Value>>,
    #[serde(rename = "Rn_nk")]
    rn_nk: Option<BTreeMap<String, Value>>,
    #[serde(rename = "Rn_nn")]
    rn_nn: Option<Vec<Vec<Value>>>,
    #[serde(rename = "R_ij")]
    r_ij: Option<Vec<Vec<Value>>>,
}

/// Parses `"p/q"`, `"p"`, or a decimal literal such as `0.3` or `1e-2`
/// exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str_radix(p.trim(), 10).map_err(|_| bad())?;
        let q = BigInt::from_str_radix(q.trim(), 10).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(bad());
    }
    let num = BigInt::from_str_radix(&digits, 10).map_err(|_| bad())?;
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-shift) as usize))
    })
}

fn value_to_rational(v: &Value, at: &str) -> Result<BigRational> {
    match v {
        Value::Number(x) => parse_rational(&x.to_string()),
        Value::String(s) => parse_rational(s),
        _ => Err(Error::InvalidInput(format!(
            "{at}: expected a number or \"p/q\" string"
        ))),
    }
    .map_err(|e| Error::InvalidInput(format!("{at}: {e}")))
}

fn matrix(rows: &[Vec<Value>], m: usize, name: &str) -> Result<Tensor> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidInput(format!(
            "{name}: expected a {m}×{m} matrix"
        )));
    }
    let mut t = Tensor::zeros(m, 2);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            t.set(
                &[i, j],
                value_to_rational(v, &format!("{name}[{}][{}]", i + 1, j + 1))?,
            );
        }
    }
    Ok(t)
}

fn parse_key(key: &str, rank: usize, m: usize, name: &str) -> Result<Vec<usize>> {
    let idx: Option<Vec<usize>> = key
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect();
    match idx {
        Some(idx) if idx.len() == rank && idx.iter().all(|&d| (1..=m).contains(&d)) => {
            Ok(idx.into_iter().map(|d| d - 1).collect())
        }
        _ => Err(Error::InvalidInput(format!(
            "{name}: key {key:?} must be {rank} digits in 1..={m}"
        ))),
    }
}

/// Signed index permutations generating a symmetry class.
type Orbit = fn(&[usize]) -> Vec<(Vec<usize>, i32)>;

fn weyl_orbit(x: &[usize]) -> Vec<(Vec<usize>, i32)> {
    let (a, b, c, d) = (x[0], x[1], x[2], x[3]);
    vec![
        (vec![a, b, c, d], 1),
        (vec![b, a, c, d], -1),
        (vec![a, b, d, c], -1),
        (vec![b, a, d, c], 1),
        (vec![c, d, a, b], 1),
        (vec![d, c, a, b], -1),
        (vec![c, d, b, a], -1),
        (vec![d, c, b, a], 1),
    ]
}

fn first_pair_orbit(x: &[usize]) -> Vec<(Vec<usize>, i32)> {
    let mut sw = x.to_vec();
    sw.swap(0, 1);
    vec![(x.to_vec(), 1), (sw, 1)]
}

fn sparse(
    map: &BTreeMap<String, Value>,
    rank: usize,
    m: usize,
    name: &str,
    orbit: Orbit,
) -> Result<Tensor> {
    let mut t = Tensor::zeros(m, rank);
    let mut set: BTreeMap<Vec<usize>, BigRational> = BTreeMap::new();
    for (key, v) in map {
        let idx = parse_key(key, rank, m, name)?;
        let val = value_to_rational(v, &format!("{name}[{key}]"))?;
        for (image, sign) in orbit(&idx) {
            let signed = if sign < 0 { -val.clone() } else { val.clone() };
            if let Some(prev) = set.get(&image) {
                if prev != &signed {
                    return Err(Error::SymmetryViolation(format!(
                        "{name}: entry {key} contradicts an entry implied by symmetry"
                    )));
                }
            }
            set.insert(image, signed);
        }
    }
    for (idx, v) in set {
        t.set(&idx, v);
    }
    Ok(t)
}

pub(super) fn from_str(s: &str) -> Result<BoundaryCurvature> {
    let file: CurvatureFile =
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("curvature file: {e}")))?;
    let n = file.n;
    if !(super::MIN_DIM..=super::MAX_DIM).contains(&n) {
        return Err(Error::InvalidInput(format!(
            "dimension {n} outside {}..={}",
            super::MIN_DIM,
            super::MAX_DIM
        )));
    }
    let m = (n - 1) as usize;
    let rn = match &file.rn {
        Some(rows) => matrix(rows, m, "Rn")?,
        None => Tensor::zeros(m, 2),
    };
    let wbar = match &file.wbar {
        Some(map) => sparse(map, 4, m, "Wbar", weyl_orbit)?,
        None => Tensor::zeros(m, 4),
    };
    let n2 = match &file.n2 {
        Some(v) => value_to_rational(v, "N2")?,
        None => BigRational::zero(),
    };
    let jf = file.jets.unwrap_or_default();
    let jets = Jets {
        rbar: jf
            .rbar
            .as_ref()
            .map(|mp| sparse(mp, 4, m, "Rbar", weyl_orbit))
            .transpose()?,
        rn_k: jf
            .rn_k
            .as_ref()
            .map(|mp| sparse(mp, 3, m, "Rn_k", first_pair_orbit))
            .transpose()?,
        rn_n: jf.rn_n.as_ref().map(|r| matrix(r, m, "Rn_n")).transpose()?,
        rn_kl: jf
            .rn_kl
            .as_ref()
            .map(|mp| sparse(mp, 4, m, "Rn_kl", first_pair_orbit))
            .transpose()?,
        rn_nk: jf
            .rn_nk
            .as_ref()
            .map(|mp| sparse(mp, 3, m, "Rn_nk", first_pair_orbit))
            .transpose()?,
        rn_nn: jf
            .rn_nn
            .as_ref()
            .map(|r| matrix(r, m, "Rn_nn"))
            .transpose()?,
        r_ij: jf.r_ij.as_ref().map(|r| matrix(r, m, "R_ij")).transpose()?,
    };
    BoundaryCurvature::with_jets(n, rn, wbar, n2, jets)
}

fn q_string(q: &BigRational) -> Value {
    Value::String(q.to_string())
}

fn matrix_value(t: &Tensor) -> Value {
    Value::Array(
        t.rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(q_string).collect()))
            .collect(),
    )
}

/// Nonzero entries keyed by 1-based digits, keeping only the canonical
/// representative of each symmetry orbit.
fn sparse_value(t: &Tensor, orbit: Orbit) -> Value {
    let mut out = Map::new();
    for (idx, v) in t.nonzero() {
        let canonical = orbit(&idx).into_iter().map(|(i, _)| i).min().unwrap();
        if canonical == idx {
            let key: String = idx.iter().map(|d| char::from(b'1' + *d as u8)).collect();
            out.insert(key, q_string(v));
        }
    }
    Value::Object(out)
}

pub(super) fn to_value(c: &BoundaryCurvature) -> Value {
    let mut jets = Map::new();
    let j = c.jets();
    if let Some(t) = &j.rbar {
        jets.insert("Rbar".into(), sparse_value(t, weyl_orbit));
    }
    if let Some(t) = &j.rn_k {
        jets.insert("Rn_k".into(), sparse_value(t, first_pair_orbit));
    }
    if let Some(t) = &j.rn_n {
        jets.insert("Rn_n".into(), matrix_value(t));
    }
    if let Some(t) = &j.rn_kl {
        jets.insert("Rn_kl".into(), sparse_value(t, first_pair_orbit));
    }
    if let Some(t) = &j.rn_nk {
        jets.insert("Rn_nk".into(), sparse_value(t, first_pair_orbit));
    }
    if let Some(t) = &j.rn_nn {
        jets.insert("Rn_nn".into(), matrix_value(t));
    }
    if let Some(t) = &j.r_ij {
        jets.insert("R_ij".into(), matrix_value(t));
    }
    json!({
        "n": c.n(),
        "Rn": matrix_value(c.rn()),
        "Wbar": sparse_value(c.wbar(), weyl_orbit),
        "N2": q_string(c.n2()),
        "jets": Value::Object(jets),
    })
}
