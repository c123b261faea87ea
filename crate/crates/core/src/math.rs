//! Overflow-safe scalar helpers shared by the closed-form evaluators.

use std::f64::consts::LN_2;

/// `ln(cosh(x))` without overflow for large `|x|`.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// `ln(sum(exp(x_k)))` shifted by the largest exponent.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `cosh(x) * exp(y - shift)`, evaluated without forming `cosh(x)` when it would overflow.
pub(crate) fn cosh_scaled(x: f64, y: f64, shift: f64) -> f64 {
    if x.abs() < 20.0 {
        x.cosh() * (y - shift).exp()
    } else {
        0.5 * ((x + y - shift).exp() + (-x + y - shift).exp())
    }
}

/// `sinh(x) * exp(y - shift)`; same scheme as [`cosh_scaled`].
pub(crate) fn sinh_scaled(x: f64, y: f64, shift: f64) -> f64 {
    if x.abs() < 20.0 {
        x.sinh() * (y - shift).exp()
    } else {
        0.5 * ((x + y - shift).exp() - (-x + y - shift).exp())
    }
}

/// `sinh(x) / (cosh(x) + cosh(r))`, bounded in (-1, 1), stable for any magnitude.
pub(crate) fn sinh_over_cosh_sum(x: f64, r: f64) -> f64 {
    let m = x.abs().max(r.abs());
    let num = 0.5 * ((x - m).exp() - (-x - m).exp());
    let den = 0.5 * ((x - m).exp() + (-x - m).exp() + (r - m).exp() + (-r - m).exp());
    num / den
}
