//! Curvature data at the boundary point, its validators, the Weyl
//! reconstruction and the truncated inverse-metric jet.
//!
//! Index conventions: tangential indices run over `0..m` with `m = n-1`; in
//! full `n`-dimensional tensors the normal direction is index `m`. Ricci
//! contractions are `Ric_bd = Σ_a R_abad`.

mod eval;
mod jet;
mod json;
mod tensor;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use eval::{JetEvaluator, JetScratch};
pub use jet::{scalar_curvature_at, scalar_curvature_terms, JetFlags, JetTerm, MetricJet};
pub use json::parse_rational;
pub use tensor::Tensor;

use crate::error::{Error, Result};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

/// Smallest and largest supported dimension. JSON index keys are single
/// digits, which caps the boundary dimension at 9.
pub const MIN_DIM: u32 = 4;
pub const MAX_DIM: u32 = 10;

/// Optional higher-order data. `None` means "use the default completion"
/// (see the accessors on [`BoundaryCurvature`]).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Jets {
    /// `R̄_ikjl`, the curvature of the boundary.
    pub rbar: Option<Tensor>,
    /// `R_ninj;k`, indices `(i, j, k)`.
    pub rn_k: Option<Tensor>,
    /// `R_ninj;n`.
    pub rn_n: Option<Tensor>,
    /// `R_ninj;kl`, indices `(i, j, k, l)`.
    pub rn_kl: Option<Tensor>,
    /// `R_ninj;nk`, indices `(i, j, k)`.
    pub rn_nk: Option<Tensor>,
    /// `R_ninj;nn`.
    pub rn_nn: Option<Tensor>,
    /// `R_;ij`, the tangential Hessian of the scalar curvature.
    pub r_ij: Option<Tensor>,
}

/// Curvature content at `x₀` in conformal Fermi coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryCurvature {
    n: u32,
    rn: Tensor,
    wbar: Tensor,
    n2: BigRational,
    jets: Jets,
}

impl BoundaryCurvature {
    /// Builds curvature data after checking shapes. Identities are checked by
    /// [`BoundaryCurvature::validate`].
    pub fn new(n: u32, rn: Tensor, wbar: Tensor, n2: BigRational) -> Result<Self> {
        Self::with_jets(n, rn, wbar, n2, Jets::default())
    }

    pub fn with_jets(
        n: u32,
        rn: Tensor,
        wbar: Tensor,
        n2: BigRational,
        jets: Jets,
    ) -> Result<Self> {
        if !(MIN_DIM..=MAX_DIM).contains(&n) {
            return Err(Error::InvalidInput(format!(
                "dimension {n} outside {MIN_DIM}..={MAX_DIM}"
            )));
        }
        let m = (n - 1) as usize;
        let shape = |name: &str, t: &Tensor, rank: usize| {
            if t.dim() != m || t.rank() != rank {
                Err(Error::InvalidInput(format!(
                    "{name}: expected rank {rank} over {m} indices, got rank {} over {}",
                    t.rank(),
                    t.dim()
                )))
            } else {
                Ok(())
            }
        };
        shape("Rn", &rn, 2)?;
        shape("Wbar", &wbar, 4)?;
        let optional = [
            ("Rbar", &jets.rbar, 4),
            ("Rn_k", &jets.rn_k, 3),
            ("Rn_n", &jets.rn_n, 2),
            ("Rn_kl", &jets.rn_kl, 4),
            ("Rn_nk", &jets.rn_nk, 3),
            ("Rn_nn", &jets.rn_nn, 2),
            ("R_ij", &jets.r_ij, 2),
        ];
        for (name, t, rank) in optional {
            if let Some(t) = t {
                shape(name, t, rank)?;
            }
        }
        Ok(BoundaryCurvature {
            n,
            rn,
            wbar,
            n2,
            jets,
        })
    }

    pub fn zero(n: u32) -> Result<Self> {
        let m = n.saturating_sub(1) as usize;
        Self::new(
            n,
            Tensor::zeros(m, 2),
            Tensor::zeros(m, 4),
            BigRational::zero(),
        )
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Boundary dimension `m = n - 1`.
    pub fn m(&self) -> usize {
        (self.n - 1) as usize
    }

    pub fn rn(&self) -> &Tensor {
        &self.rn
    }

    pub fn wbar(&self) -> &Tensor {
        &self.wbar
    }

    /// `N2 = R_;nn`.
    pub fn n2(&self) -> &BigRational {
        &self.n2
    }

    pub fn jets(&self) -> &Jets {
        &self.jets
    }

    /// `S = Σ (R_ninj)²`.
    pub fn s(&self) -> BigRational {
        self.rn.norm_squared()
    }

    /// `W2 = Σ (W̄_ijkl)²`.
    pub fn w2(&self) -> BigRational {
        self.wbar.norm_squared()
    }

    /// `D = R_ninj;ij = -N2/2 - S`, never set independently.
    pub fn d(&self) -> BigRational {
        -&self.n2 / int(2) - self.s()
    }

    /// `R̄_ikjl`; defaults to `W̄` since the boundary Ricci tensor vanishes.
    pub fn rbar(&self) -> Tensor {
        self.jets.rbar.clone().unwrap_or_else(|| self.wbar.clone())
    }

    pub fn rn_k(&self) -> Tensor {
        self.jets
            .rn_k
            .clone()
            .unwrap_or_else(|| Tensor::zeros(self.m(), 3))
    }

    pub fn rn_n(&self) -> Tensor {
        self.jets
            .rn_n
            .clone()
            .unwrap_or_else(|| Tensor::zeros(self.m(), 2))
    }

    pub fn rn_nk(&self) -> Tensor {
        self.jets
            .rn_nk
            .clone()
            .unwrap_or_else(|| Tensor::zeros(self.m(), 3))
    }

    /// `R_ninj;kl`; defaults to the isotropic tensor `D · T` with
    /// `T_ijkl = (δ_ik δ_jl + δ_il δ_jk - (2/m) δ_ij δ_kl) / ((m-1)(m+2))`,
    /// the unique isotropic choice meeting the trace constraints.
    pub fn rn_kl(&self) -> Tensor {
        self.jets
            .rn_kl
            .clone()
            .unwrap_or_else(|| isotropic_second_jet(self.m()).scale(&self.d()))
    }

    /// `R_ninj;nn`; defaults to `-(2S/m) δ_ij`.
    pub fn rn_nn(&self) -> Tensor {
        self.jets.rn_nn.clone().unwrap_or_else(|| {
            let m = self.m() as i64;
            Tensor::identity(self.m(), &(self.s() * rat(-2, m)))
        })
    }

    /// `R_;ij`; defaults to `-(W2/(6m)) δ_ij`.
    pub fn r_ij(&self) -> Tensor {
        self.jets.r_ij.clone().unwrap_or_else(|| {
            let m = self.m() as i64;
            Tensor::identity(self.m(), &(self.w2() * rat(-1, 6 * m)))
        })
    }

    /// Names of the jets that were filled in by default.
    pub fn defaulted_jets(&self) -> Vec<&'static str> {
        let j = &self.jets;
        let mut out = Vec::new();
        for (name, present) in [
            ("Rbar", j.rbar.is_some()),
            ("Rn_k", j.rn_k.is_some()),
            ("Rn_n", j.rn_n.is_some()),
            ("Rn_kl", j.rn_kl.is_some()),
            ("Rn_nk", j.rn_nk.is_some()),
            ("Rn_nn", j.rn_nn.is_some()),
            ("R_ij", j.r_ij.is_some()),
        ] {
            if !present {
                out.push(name);
            }
        }
        out
    }

    /// Checks every structural identity, reporting the first violation.
    pub fn validate(&self) -> Result<()> {
        let fail = |label: &str| Err(Error::SymmetryViolation(label.to_string()));
        if !is_symmetric_pair(&self.rn, 0, 1) {
            return fail("Rn not symmetric");
        }
        if !self.rn.trace().is_zero() {
            return fail("trace Rn ≠ 0");
        }
        if let Some(label) = weyl_symmetry_violation(&self.wbar) {
            return Err(Error::SymmetryViolation(format!("Wbar: {label}")));
        }
        if let Some(rbar) = &self.jets.rbar {
            if rbar != &self.wbar {
                return fail("Rbar ≠ Wbar (boundary Ricci must vanish)");
            }
        }
        let m = self.m();
        if let Some(t) = &self.jets.rn_k {
            if !is_symmetric_pair(t, 0, 1) {
                return fail("Rn_k not symmetric in (i,j)");
            }
            if !partial_trace_3(t).is_zero() {
                return fail("trace Rn_k ≠ 0");
            }
        }
        if let Some(t) = &self.jets.rn_n {
            if !is_symmetric_pair(t, 0, 1) {
                return fail("Rn_n not symmetric");
            }
            if !t.trace().is_zero() {
                return fail("trace Rn_n ≠ 0");
            }
        }
        if let Some(t) = &self.jets.rn_nk {
            if !is_symmetric_pair(t, 0, 1) {
                return fail("Rn_nk not symmetric in (i,j)");
            }
            if !partial_trace_3(t).is_zero() {
                return fail("trace Rn_nk ≠ 0");
            }
        }
        if let Some(t) = &self.jets.rn_kl {
            if !is_symmetric_pair(t, 0, 1) {
                return fail("Rn_kl not symmetric in (i,j)");
            }
            let tr = partial_trace_4(t);
            let sym_zero =
                (0..m).all(|k| (0..m).all(|l| (tr.get(&[k, l]) + tr.get(&[l, k])).is_zero()));
            if !sym_zero {
                return fail("symmetrized trace Rn_kl ≠ 0");
            }
            if double_contraction(t) != self.d() {
                return fail("Rn_ij;ij ≠ -N2/2 - S");
            }
        }
        if let Some(t) = &self.jets.rn_nn {
            if !is_symmetric_pair(t, 0, 1) {
                return fail("Rn_nn not symmetric");
            }
            if t.trace() != -self.s() * int(2) {
                return fail("trace Rn_nn ≠ -2S");
            }
        }
        if let Some(t) = &self.jets.r_ij {
            if !is_symmetric_pair(t, 0, 1) {
                return fail("R_ij not symmetric");
            }
            if t.trace() != -self.w2() / int(6) {
                return fail("trace R_ij ≠ -W2/6");
            }
        }
        Ok(())
    }

    /// The Weyl tensor of the ambient metric at `x₀` (dimension `n`, normal
    /// index `m`), from
    /// `W_ninj = (n-3)/(n-2) R_ninj`, `W_nijk = 0` and
    /// `W_ijkl = W̄_ijkl - (R_nink δ_jl - R_ninl δ_jk + R_njnl δ_ik - R_njnk δ_il)/(n-2)`.
    pub fn weyl_reconstruct(&self) -> Result<Tensor> {
        self.validate()?;
        let n = self.n as i64;
        let m = self.m();
        let mut w = Tensor::zeros(m + 1, 4);
        let normal_factor = rat(n - 3, n - 2);
        for i in 0..m {
            for j in 0..m {
                let v = self.rn.get(&[i, j]) * &normal_factor;
                w.set(&[m, i, m, j], v.clone());
                w.set(&[i, m, j, m], v.clone());
                w.set(&[m, i, j, m], -v.clone());
                w.set(&[i, m, m, j], -v);
            }
        }
        let inv = rat(1, n - 2);
        for idx in self.wbar.indices() {
            let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
            let mut corr = BigRational::zero();
            if j == l {
                corr += self.rn.get(&[i, k]);
            }
            if j == k {
                corr -= self.rn.get(&[i, l]);
            }
            if i == k {
                corr += self.rn.get(&[j, l]);
            }
            if i == l {
                corr -= self.rn.get(&[j, k]);
            }
            w.set(&idx, self.wbar.get(&idx) - corr * &inv);
        }
        Ok(w)
    }

    /// True when `(R_ninj, W̄) ≠ (0, 0)`, i.e. the Weyl tensor at `x₀` is
    /// nonzero.
    pub fn weyl_nonzero(&self) -> bool {
        !self.rn.is_zero() || !self.wbar.is_zero()
    }

    /// The inverse metric jet truncated at `order ∈ {2, 3, 4}`.
    pub fn metric_inverse_jet(&self, order: u32) -> Result<MetricJet> {
        MetricJet::build(self, order)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        json::from_str(s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json::to_value(self)
    }
}

/// Recovers `(R_ninj, W̄_ijkl)` from a full Weyl tensor at `x₀` by inverting
/// [`BoundaryCurvature::weyl_reconstruct`].
pub fn weyl_decompose(w: &Tensor) -> Result<(Tensor, Tensor)> {
    if w.rank() != 4 || w.dim() < MIN_DIM as usize {
        return Err(Error::InvalidInput(
            "expected a rank-4 tensor in dimension ≥ 4".into(),
        ));
    }
    let n = w.dim() as i64;
    let m = w.dim() - 1;
    let mut rn = Tensor::zeros(m, 2);
    let back = rat(n - 2, n - 3);
    for i in 0..m {
        for j in 0..m {
            rn.set(&[i, j], w.get(&[m, i, m, j]) * &back);
        }
    }
    let inv = rat(1, n - 2);
    let mut wbar = Tensor::zeros(m, 4);
    for idx in wbar.indices().collect::<Vec<_>>() {
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut corr = BigRational::zero();
        if j == l {
            corr += rn.get(&[i, k]);
        }
        if j == k {
            corr -= rn.get(&[i, l]);
        }
        if i == k {
            corr += rn.get(&[j, l]);
        }
        if i == l {
            corr -= rn.get(&[j, k]);
        }
        wbar.set(&idx, w.get(&idx) + corr * &inv);
    }
    Ok((rn, wbar))
}

fn is_symmetric_pair(t: &Tensor, a: usize, b: usize) -> bool {
    t.indices().all(|idx| {
        let mut sw = idx.clone();
        sw.swap(a, b);
        t.get(&idx) == t.get(&sw)
    })
}

/// `Σ_i T_iik` for a rank-3 tensor.
fn partial_trace_3(t: &Tensor) -> Tensor {
    let d = t.dim();
    let mut out = Tensor::zeros(d, 1);
    for k in 0..d {
        let mut s = BigRational::zero();
        for i in 0..d {
            s += t.get(&[i, i, k]);
        }
        out.set(&[k], s);
    }
    out
}

/// `Σ_i T_iikl` for a rank-4 tensor.
fn partial_trace_4(t: &Tensor) -> Tensor {
    let d = t.dim();
    let mut out = Tensor::zeros(d, 2);
    for k in 0..d {
        for l in 0..d {
            let mut s = BigRational::zero();
            for i in 0..d {
                s += t.get(&[i, i, k, l]);
            }
            out.set(&[k, l], s);
        }
    }
    out
}

/// `Σ_ij T_ijij`.
fn double_contraction(t: &Tensor) -> BigRational {
    let d = t.dim();
    let mut s = BigRational::zero();
    for i in 0..d {
        for j in 0..d {
            s += t.get(&[i, j, i, j]);
        }
    }
    s
}

/// First failing Weyl identity of a rank-4 tensor, if any.
pub fn weyl_symmetry_violation(t: &Tensor) -> Option<&'static str> {
    for idx in t.indices() {
        let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
        let v = t.get(&idx);
        if v != &-t.get(&[b, a, c, d]).clone() {
            return Some("antisymmetry in the first pair");
        }
        if v != &-t.get(&[a, b, d, c]).clone() {
            return Some("antisymmetry in the second pair");
        }
        if v != t.get(&[c, d, a, b]) {
            return Some("pair symmetry");
        }
        let cyc = v + t.get(&[a, c, d, b]) + t.get(&[a, d, b, c]);
        if !cyc.is_zero() {
            return Some("first Bianchi identity");
        }
    }
    if !t.ricci_contraction().is_zero() {
        return Some("trace");
    }
    None
}

/// The Weyl part of an arbitrary rank-4 tensor: antisymmetrize, impose pair
/// symmetry, remove the cyclic part, then remove all traces.
pub fn project_weyl(t: &Tensor) -> Tensor {
    let d = t.dim();
    let mut r = Tensor::zeros(d, 4);
    let quarter = rat(1, 4);
    for idx in t.indices() {
        let (a, b, c, e) = (idx[0], idx[1], idx[2], idx[3]);
        let anti = t.get(&[a, b, c, e]) - t.get(&[b, a, c, e]) - t.get(&[a, b, e, c])
            + t.get(&[b, a, e, c]);
        let anti2 = t.get(&[c, e, a, b]) - t.get(&[e, c, a, b]) - t.get(&[c, e, b, a])
            + t.get(&[e, c, b, a]);
        r.set(&idx, (anti + anti2) * &quarter / int(2));
    }
    let third = rat(1, 3);
    let mut bianchi = Tensor::zeros(d, 4);
    for idx in r.indices() {
        let (a, b, c, e) = (idx[0], idx[1], idx[2], idx[3]);
        let cyc = r.get(&[a, b, c, e]) + r.get(&[a, c, e, b]) + r.get(&[a, e, b, c]);
        bianchi.set(&idx, r.get(&idx) - cyc * &third);
    }
    if d < 4 {
        // every algebraic curvature tensor is pure trace in dimension ≤ 3
        return Tensor::zeros(d, 4);
    }
    let ric = bianchi.ricci_contraction();
    let scal = ric.trace();
    let dd = d as i64;
    let c1 = rat(1, dd - 2);
    let c2 = &scal * rat(1, (dd - 1) * (dd - 2));
    let delta = |i: usize, j: usize| i == j;
    let mut w = Tensor::zeros(d, 4);
    for idx in bianchi.indices() {
        let (a, b, c, e) = (idx[0], idx[1], idx[2], idx[3]);
        let mut corr = BigRational::zero();
        if delta(b, e) {
            corr += ric.get(&[a, c]);
        }
        if delta(b, c) {
            corr -= ric.get(&[a, e]);
        }
        if delta(a, c) {
            corr += ric.get(&[b, e]);
        }
        if delta(a, e) {
            corr -= ric.get(&[b, c]);
        }
        let mut g = BigRational::zero();
        if delta(a, c) && delta(b, e) {
            g += BigRational::one();
        }
        if delta(a, e) && delta(b, c) {
            g -= BigRational::one();
        }
        w.set(&idx, bianchi.get(&idx) - corr * &c1 + g * &c2);
    }
    w
}

/// `T_ijkl = (δ_ik δ_jl + δ_il δ_jk - (2/m) δ_ij δ_kl) / ((m-1)(m+2))`.
pub fn isotropic_second_jet(m: usize) -> Tensor {
    let mi = m as i64;
    let norm = rat(1, (mi - 1) * (mi + 2));
    let mut t = Tensor::zeros(m, 4);
    for idx in t.indices().collect::<Vec<_>>() {
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut v = BigRational::zero();
        if i == k && j == l {
            v += BigRational::one();
        }
        if i == l && j == k {
            v += BigRational::one();
        }
        if i == j && k == l {
            v -= rat(2, mi);
        }
        if !v.is_zero() {
            t.set(&idx, v * &norm);
        }
    }
    t
}

fn random_entry(rng: &mut ChaCha8Rng) -> BigRational {
    rat(rng.random_range(-8..=8), 4)
}

fn random_symmetric(rng: &mut ChaCha8Rng, m: usize) -> Tensor {
    let mut t = Tensor::zeros(m, 2);
    for i in 0..m {
        for j in i..m {
            let v = random_entry(rng);
            t.set(&[i, j], v.clone());
            t.set(&[j, i], v);
        }
    }
    t
}

/// A scaled random trace-free symmetric matrix plus `trace/m · δ`.
fn random_with_trace(
    rng: &mut ChaCha8Rng,
    m: usize,
    scale: &BigRational,
    trace: &BigRational,
) -> Tensor {
    let t = random_symmetric(rng, m);
    let free = t.add(&Tensor::identity(m, &(-t.trace() / int(m as i64))));
    free.scale(scale)
        .add(&Tensor::identity(m, &(trace / int(m as i64))))
}

/// Random rank-3 tensor symmetric in its first two slots with `Σ_i T_iik = 0`.
fn random_trace_free_3(rng: &mut ChaCha8Rng, m: usize) -> Tensor {
    let mut t = Tensor::zeros(m, 3);
    for k in 0..m {
        for i in 0..m {
            for j in i..m {
                let v = random_entry(rng);
                t.set(&[i, j, k], v.clone());
                t.set(&[j, i, k], v);
            }
        }
    }
    let tr = partial_trace_3(&t);
    let inv = rat(1, m as i64);
    for k in 0..m {
        let c = tr.get(&[k]) * &inv;
        for i in 0..m {
            let v = t.get(&[i, i, k]) - &c;
            t.set(&[i, i, k], v);
        }
    }
    t
}

/// Random `R_ninj;kl` meeting both trace constraints for the given `D`.
fn random_second_jet(
    rng: &mut ChaCha8Rng,
    m: usize,
    scale: &BigRational,
    d: &BigRational,
) -> Tensor {
    let mut t = Tensor::zeros(m, 4);
    for k in 0..m {
        for l in 0..m {
            for i in 0..m {
                for j in i..m {
                    let v = random_entry(rng);
                    t.set(&[i, j, k, l], v.clone());
                    t.set(&[j, i, k, l], v);
                }
            }
        }
    }
    let tr = partial_trace_4(&t);
    let inv = rat(1, 2 * m as i64);
    for k in 0..m {
        for l in 0..m {
            let c = (tr.get(&[k, l]) + tr.get(&[l, k])) * &inv;
            for i in 0..m {
                let v = t.get(&[i, i, k, l]) - &c;
                t.set(&[i, i, k, l], v);
            }
        }
    }
    let t = t.scale(scale);
    let shift = d - double_contraction(&t);
    t.add(&isotropic_second_jet(m).scale(&shift))
}

fn random_core(
    n: u32,
    rng: &mut ChaCha8Rng,
    scale: &BigRational,
) -> Result<(Tensor, Tensor, BigRational)> {
    if !(MIN_DIM..=MAX_DIM).contains(&n) {
        return Err(Error::InvalidInput(format!(
            "dimension {n} outside {MIN_DIM}..={MAX_DIM}"
        )));
    }
    let m = (n - 1) as usize;
    let rn = random_with_trace(rng, m, scale, &BigRational::zero());
    let mut raw = Tensor::zeros(m, 4);
    for idx in raw.indices().collect::<Vec<_>>() {
        raw.set(&idx, random_entry(rng));
    }
    // W̄ ≡ 0 when the boundary has dimension ≤ 3
    let wbar = project_weyl(&raw).scale(scale);
    let n2 = random_entry(rng) * scale;
    Ok((rn, wbar, n2))
}

/// Deterministic pseudo-random curvature data satisfying every identity,
/// with all higher jets left at their default completions.
pub fn random_admissible(n: u32, seed: u64, scale: &BigRational) -> Result<BoundaryCurvature> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rn, wbar, n2) = random_core(n, &mut rng, scale)?;
    BoundaryCurvature::new(n, rn, wbar, n2)
}

/// Like [`random_admissible`], but every jet is drawn at random subject to
/// its trace constraints instead of taking the default completion.
pub fn random_admissible_with_jets(
    n: u32,
    seed: u64,
    scale: &BigRational,
) -> Result<BoundaryCurvature> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rn, wbar, n2) = random_core(n, &mut rng, scale)?;
    let m = (n - 1) as usize;
    let s = rn.norm_squared();
    let w2 = wbar.norm_squared();
    let d = -&n2 / int(2) - &s;
    let jets = Jets {
        rbar: Some(wbar.clone()),
        rn_k: Some(random_trace_free_3(&mut rng, m).scale(scale)),
        rn_n: Some(random_with_trace(&mut rng, m, scale, &BigRational::zero())),
        rn_kl: Some(random_second_jet(&mut rng, m, scale, &d)),
        rn_nk: Some(random_trace_free_3(&mut rng, m).scale(scale)),
        rn_nn: Some(random_with_trace(&mut rng, m, scale, &(-s * int(2)))),
        r_ij: Some(random_with_trace(&mut rng, m, scale, &(-w2 / int(6)))),
    };
    BoundaryCurvature::with_jets(n, rn, wbar, n2, jets)
}
