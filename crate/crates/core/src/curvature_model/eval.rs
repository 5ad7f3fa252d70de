use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{BoundaryCurvature, Tensor};
use crate::error::{Error, Result};

fn f(t: &Tensor) -> Vec<f64> {
    t.to_f64()
}

/// Floating-point evaluator of the metric jet and the scalar-curvature
/// model, contracting the curvature tensors directly instead of expanding
/// polynomials. Agrees with [`super::MetricJet::inverse_metric`] and
/// [`super::scalar_curvature_at`].
#[derive(Debug, Clone)]
pub struct JetEvaluator {
    m: usize,
    order: u32,
    rbar: Vec<f64>,
    rn: Vec<f64>,
    rn_k: Vec<f64>,
    rn_n: Vec<f64>,
    rn_kl: Vec<f64>,
    rn_nk: Vec<f64>,
    quartic_nn: Vec<f64>,
    r_ij: Vec<f64>,
    n2: f64,
}

/// Scratch space for [`JetEvaluator`], reused across points.
#[derive(Debug, Clone)]
pub struct JetScratch {
    mm: Vec<f64>,
    mv: Vec<f64>,
}

impl JetEvaluator {
    pub fn new(curv: &BoundaryCurvature, order: u32) -> Result<Self> {
        if !(2..=4).contains(&order) {
            return Err(Error::UnsupportedOrder(order));
        }
        let rn = curv.rn();
        let quartic_nn = curv
            .rn_nn()
            .scale(&BigRational::new(1.into(), 12.into()))
            .add(&rn.matmul(rn).scale(&BigRational::new(2.into(), 3.into())));
        Ok(JetEvaluator {
            m: curv.m(),
            order,
            rbar: f(&curv.rbar()),
            rn: f(rn),
            rn_k: f(&curv.rn_k()),
            rn_n: f(&curv.rn_n()),
            rn_kl: f(&curv.rn_kl()),
            rn_nk: f(&curv.rn_nk()),
            quartic_nn: f(&quartic_nn),
            r_ij: f(&curv.r_ij()),
            n2: curv.n2().to_f64().unwrap_or(f64::NAN),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn scratch(&self) -> JetScratch {
        JetScratch {
            mm: vec![0.0; self.m * self.m],
            mv: vec![0.0; self.m],
        }
    }

    fn quad(&self, a: &[f64], v: &[f64]) -> f64 {
        let m = self.m;
        let mut s = 0.0;
        for i in 0..m {
            let mut row = 0.0;
            for j in 0..m {
                row += a[i * m + j] * v[j];
            }
            s += v[i] * row;
        }
        s
    }

    /// `Σ_{ijk} t_ijk v_i v_j x_k` for a rank-3 tensor.
    fn cubic(&self, t: &[f64], v: &[f64], x: &[f64]) -> f64 {
        let m = self.m;
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                let base = (i * m + j) * m;
                let dot: f64 = (0..m).map(|k| t[base + k] * x[k]).sum();
                s += v[i] * v[j] * dot;
            }
        }
        s
    }

    /// `Σ t_ijkl a_i b_j c_k d_l` for a rank-4 tensor with `a = b`,
    /// `c = d`.
    fn quartic(&self, t: &[f64], v: &[f64], x: &[f64]) -> f64 {
        let m = self.m;
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                let vv = v[i] * v[j];
                if vv == 0.0 {
                    continue;
                }
                let base = (i * m + j) * m * m;
                let mut inner = 0.0;
                for k in 0..m {
                    let row: f64 = (0..m).map(|l| t[base + k * m + l] * x[l]).sum();
                    inner += x[k] * row;
                }
                s += vv * inner;
            }
        }
        s
    }

    /// `vᵀ (g^{-1}(x) - δ) v` over the tangential block, for a tangential
    /// vector `v`.
    pub fn metric_correction(&self, xbar: &[f64], xn: f64, v: &[f64], sc: &mut JetScratch) -> f64 {
        let m = self.m;
        // M_is = Σ_kl R̄_iksl x_k x_l
        for i in 0..m {
            for s in 0..m {
                let mut acc = 0.0;
                for k in 0..m {
                    let base = ((i * m + k) * m + s) * m;
                    let row: f64 = (0..m).map(|l| self.rbar[base + l] * xbar[l]).sum();
                    acc += xbar[k] * row;
                }
                sc.mm[i * m + s] = acc;
            }
        }
        let xn2 = xn * xn;
        let mut total = self.quad(&sc.mm, v) / 3.0 + xn2 * self.quad(&self.rn, v);
        if self.order >= 3 {
            total +=
                xn2 * self.cubic(&self.rn_k, v, xbar) + xn2 * xn * self.quad(&self.rn_n, v) / 3.0;
        }
        if self.order >= 4 {
            for s in 0..m {
                sc.mv[s] = (0..m).map(|i| sc.mm[i * m + s] * v[i]).sum();
            }
            let mv2: f64 = sc.mv.iter().map(|a| a * a).sum();
            let mut cross = 0.0;
            for s in 0..m {
                let rv: f64 = (0..m).map(|j| self.rn[s * m + j] * v[j]).sum();
                cross += sc.mv[s] * rv;
            }
            total += mv2 / 15.0
                + xn2 * (0.5 * self.quartic(&self.rn_kl, v, xbar) + cross / 3.0)
                + xn2 * xn * self.cubic(&self.rn_nk, v, xbar) / 3.0
                + xn2 * xn2 * self.quad(&self.quartic_nn, v);
        }
        total
    }

    /// Scalar-curvature model `½ R_;ij x_i x_j + ½ R_;nn x_n²`.
    pub fn scalar_curvature(&self, xbar: &[f64], xn: f64) -> f64 {
        0.5 * self.quad(&self.r_ij, xbar) + 0.5 * self.n2 * xn * xn
    }
}
