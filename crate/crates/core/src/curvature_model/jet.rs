use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{BoundaryCurvature, Tensor};
use crate::error::{Error, Result};
use crate::sphere_moments::HomPoly;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `x_n^{xn_pow} · poly(x̄)`, a single piece of a jet entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetTerm {
    pub xn_pow: u32,
    pub poly: HomPoly,
}

impl JetTerm {
    /// Total order in `x`.
    pub fn order(&self) -> u32 {
        self.xn_pow + self.poly.degree()
    }
}

/// Truncated Taylor polynomial of `g^{ij}(x) - δ^{ij}` over the tangential
/// block. The normal row is trivial in this gauge: `g^{nn} ≡ 1`,
/// `g^{jn} ≡ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricJet {
    m: usize,
    order: u32,
    /// Keyed by `(i, j, xn_pow, x̄ degree)`; each `(xn_pow, degree)` slot is a
    /// homogeneous polynomial in `x̄`.
    terms: BTreeMap<(usize, usize, u32, u32), HomPoly>,
    defaulted: Vec<&'static str>,
    not_modeled: Vec<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct JetFlags {
    pub order: u32,
    pub defaulted: Vec<&'static str>,
    pub not_modeled: Vec<&'static str>,
}

impl MetricJet {
    // index loops mirror the tensor formulas
    #[allow(clippy::needless_range_loop)]
    pub(super) fn build(curv: &BoundaryCurvature, order: u32) -> Result<Self> {
        if !(2..=4).contains(&order) {
            return Err(Error::UnsupportedOrder(order));
        }
        let m = curv.m();
        let mut jet = MetricJet {
            m,
            order,
            terms: BTreeMap::new(),
            defaulted: curv.defaulted_jets(),
            not_modeled: Vec::new(),
        };
        let rbar = curv.rbar();
        let rn = curv.rn();
        let constant = |c: &BigRational| HomPoly::constant(m, c.clone());
        let linear = |t: &Tensor, i: usize, j: usize, c: &BigRational| {
            let mut p = HomPoly::zero(m, 1);
            for k in 0..m {
                let mut e = vec![0; m];
                e[k] = 1;
                p.add_term(e, t.get(&[i, j, k]) * c);
            }
            p
        };
        // M_is(x̄) = Σ_kl R̄_iksl x_k x_l
        let mmat: Vec<Vec<HomPoly>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|s| {
                        let mut p = HomPoly::zero(m, 2);
                        for k in 0..m {
                            for l in 0..m {
                                let mut e = vec![0; m];
                                e[k] += 1;
                                e[l] += 1;
                                p.add_term(e, rbar.get(&[i, k, s, l]).clone());
                            }
                        }
                        p
                    })
                    .collect()
            })
            .collect();

        for i in 0..m {
            for j in 0..m {
                jet.push(i, j, 0, mmat[i][j].scale(&rat(1, 3)));
                jet.push(i, j, 2, constant(rn.get(&[i, j])));
            }
        }
        if order >= 3 {
            jet.not_modeled.push("Rbar_;m");
            let rn_k = curv.rn_k();
            let rn_n = curv.rn_n();
            for i in 0..m {
                for j in 0..m {
                    jet.push(i, j, 2, linear(&rn_k, i, j, &rat(1, 1)));
                    jet.push(i, j, 3, constant(&(rn_n.get(&[i, j]) * rat(1, 3))));
                }
            }
        }
        if order >= 4 {
            jet.not_modeled.push("Rbar_;mp");
            let rn_kl = curv.rn_kl();
            let rn_nk = curv.rn_nk();
            let rn_nn = curv.rn_nn();
            let rn2 = rn.matmul(rn);
            for i in 0..m {
                for j in 0..m {
                    let mut quartic = HomPoly::zero(m, 4);
                    for s in 0..m {
                        quartic = quartic.checked_add(&mmat[i][s].mul(&mmat[j][s]))?;
                    }
                    jet.push(i, j, 0, quartic.scale(&rat(1, 15)));

                    let mut quad = HomPoly::zero(m, 2);
                    for k in 0..m {
                        for l in 0..m {
                            let mut e = vec![0; m];
                            e[k] += 1;
                            e[l] += 1;
                            quad.add_term(e, rn_kl.get(&[i, j, k, l]) * rat(1, 2));
                        }
                    }
                    // (1/3) Sym_ij(R̄_iksl R_nsnj) x_k x_l
                    for s in 0..m {
                        let sym = mmat[i][s]
                            .scale(rn.get(&[s, j]))
                            .checked_add(&mmat[j][s].scale(rn.get(&[s, i])))?;
                        quad = quad.checked_add(&sym.scale(&rat(1, 6)))?;
                    }
                    jet.push(i, j, 2, quad);

                    jet.push(i, j, 3, linear(&rn_nk, i, j, &rat(1, 3)));
                    let c4 = rn_nn.get(&[i, j]) * rat(1, 12) + rn2.get(&[i, j]) * rat(2, 3);
                    jet.push(i, j, 4, constant(&c4));
                }
            }
        }
        Ok(jet)
    }

    fn push(&mut self, i: usize, j: usize, xn_pow: u32, poly: HomPoly) {
        if poly.is_zero() {
            return;
        }
        let key = (i, j, xn_pow, poly.degree());
        match self.terms.get_mut(&key) {
            Some(p) => {
                *p = p.checked_add(&poly).expect("same degree by key");
                if p.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, poly);
            }
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn flags(&self) -> JetFlags {
        JetFlags {
            order: self.order,
            defaulted: self.defaulted.clone(),
            not_modeled: self.not_modeled.clone(),
        }
    }

    /// Pieces of `g^{ij} - δ^{ij}`.
    pub fn entry(&self, i: usize, j: usize) -> Vec<JetTerm> {
        self.terms
            .range((i, j, 0, 0)..=(i, j, u32::MAX, u32::MAX))
            .map(|(&(_, _, a, _), p)| JetTerm {
                xn_pow: a,
                poly: p.clone(),
            })
            .collect()
    }

    /// All pieces, keyed by `(i, j)`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), JetTerm)> + '_ {
        self.terms.iter().map(|(&(i, j, a, _), p)| {
            (
                (i, j),
                JetTerm {
                    xn_pow: a,
                    poly: p.clone(),
                },
            )
        })
    }

    /// `g^{ij}(x̄, x_n)` for the full `n × n` inverse metric.
    pub fn inverse_metric(&self, xbar: &[f64], xn: f64) -> Vec<Vec<f64>> {
        let n = self.m + 1;
        let mut g = vec![vec![0.0; n]; n];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        for (&(i, j, a, _), p) in &self.terms {
            g[i][j] += xn.powi(a as i32) * p.eval_f64(xbar);
        }
        g
    }

    /// Exact check that `g^{ij} = g^{ji}` term by term.
    pub fn is_symmetric(&self) -> bool {
        (0..self.m).all(|i| (0..self.m).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    /// True when no term has order zero, so `g^{ij}(0) = δ^{ij}`.
    pub fn vanishes_at_origin(&self) -> bool {
        self.terms.keys().all(|&(_, _, a, d)| a + d > 0)
    }
}

/// Second-order Taylor polynomial of the scalar curvature,
/// `½ R_;ij x_i x_j + ½ R_;nn x_n²`; the mixed `R_;in` term is not modeled.
pub fn scalar_curvature_terms(curv: &BoundaryCurvature) -> Vec<JetTerm> {
    let m = curv.m();
    let half = rat(1, 2);
    let rows = curv.r_ij().scale(&half).rows();
    let mut out = Vec::new();
    let quad = HomPoly::quadratic_form(&rows);
    if !quad.is_zero() {
        out.push(JetTerm {
            xn_pow: 0,
            poly: quad,
        });
    }
    let c = curv.n2() * &half;
    if !c.is_zero() {
        out.push(JetTerm {
            xn_pow: 2,
            poly: HomPoly::constant(m, c),
        });
    }
    out
}

/// Floating-point evaluation of [`scalar_curvature_terms`].
pub fn scalar_curvature_at(terms: &[JetTerm], xbar: &[f64], xn: f64) -> f64 {
    terms
        .iter()
        .map(|t| xn.powi(t.xn_pow as i32) * t.poly.eval_f64(xbar))
        .sum()
}
