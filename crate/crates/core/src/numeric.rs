//! Floating-point instantiation of the symbolic constants.

use std::f64::consts::PI;

use num_traits::ToPrimitive;

use crate::exact_integrals::half_line_normal_form;

/// Area of the unit sphere `S^k ⊂ ℝ^{k+1}`, by the recursion
/// `σ_k = 2π/(k-1) · σ_{k-2}` from `σ_0 = 2`, `σ_1 = 2π`.
pub fn sphere_area(k: u32) -> f64 {
    match k {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / f64::from(k - 1) * sphere_area(k - 2),
    }
}

/// Volume of the unit ball in ℝ^d.
pub fn ball_volume(d: u32) -> f64 {
    if d == 0 {
        1.0
    } else {
        sphere_area(d - 1) / f64::from(d)
    }
}

/// `J(α, m) = ∫₀^∞ s^α/(1+s²)^m ds` for the two base cases of the normal form.
fn half_line_base(parity: u32) -> f64 {
    if parity == 0 {
        PI / 2.0
    } else {
        0.5
    }
}

/// `J(α, m)` evaluated through its exact normal form. Panics on a divergent
/// pair; callers pass validated exponents.
pub fn half_line_value(alpha: i64, m: i64) -> f64 {
    let (q, p) = half_line_normal_form(alpha, m).expect("convergent J(α, m)");
    q.to_f64().unwrap() * half_line_base(p)
}

/// `I = J(n, n)`.
pub fn i_value(n: u32) -> f64 {
    half_line_value(i64::from(n), i64::from(n))
}
