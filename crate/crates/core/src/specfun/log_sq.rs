//! The regularised log-square sum `S(x)` and the reflection pair `S(x) + S(1−x)`.
//!
//! Integral form, valid for `0 < x < 1`:
//!
//! ```text
//! S(x) = 2 ∫_0^∞ E_x(t) (γ + log t) / t dt,
//! E_x(t) = (x−1)e^{−t} + (e^{−xt} − e^{−t}) / (1 − e^{−t})
//! ```
//!
//! Every exponential in `E_x` decays, so the integrand falls off like
//! `e^{−xt}`. Adding the same expression at `1−x` gives the pair kernel
//! `−e^{−t} + (e^{−xt} + e^{−(1−x)t} − 2e^{−t}) / (1 − e^{−t})` with decay
//! `c = min(x, 1−x)`. For `t < 1` both kernels are evaluated from their
//! Taylor series (coefficients built from Bernoulli polynomials) since the
//! closed forms cancel to `O(t)` there.

use super::em::bernoulli;
use super::quadrature::exp_sinh;
use super::series::{s_pair_series_c, s_series};
use super::{EvalConfig, EULER_GAMMA};
use crate::error::{Error, Result};

/// Taylor terms kept for `t < 1`; the series has radius `2π`.
const SMALL_T_TERMS: usize = 26;

/// `B_n(y)/n!` from `Σ_i (B_i/i!)·(y^{n−i}/(n−i)!)`.
fn bernoulli_poly_scaled(n: usize, y: f64) -> f64 {
    let mut inv_fact = vec![1.0; n + 1];
    for i in 1..=n {
        inv_fact[i] = inv_fact[i - 1] / i as f64;
    }
    let mut acc = 0.0;
    let mut ypow = 1.0; // y^{n−i}, built from i = n downwards
    for i in (0..=n).rev() {
        acc += bernoulli(i) * inv_fact[i] * ypow * inv_fact[n - i];
        ypow *= y;
    }
    acc
}

/// Coefficients `e_1..e_K` of the kernel's Taylor series at `t = 0`.
fn small_t_coeffs(x: f64, pair: bool) -> [f64; SMALL_T_TERMS] {
    let mut out = [0.0; SMALL_T_TERMS];
    let mut inv_fact = 1.0; // 1/k!
    for (i, e) in out.iter_mut().enumerate() {
        let k = i + 1;
        inv_fact /= k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let b0 = bernoulli(k + 1) * inv_fact / (k + 1) as f64;
        *e = if pair {
            bernoulli_poly_scaled(k + 1, 1.0 - x) + bernoulli_poly_scaled(k + 1, x) - 2.0 * b0
                - sign * inv_fact
        } else {
            bernoulli_poly_scaled(k + 1, 1.0 - x) - b0 + (x - 1.0) * sign * inv_fact
        };
    }
    out
}

fn kernel_series(coeffs: &[f64; SMALL_T_TERMS], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &e| (acc + e) * t)
}

fn kernel_closed(x: f64, pair: bool, t: f64) -> f64 {
    let denom = -(-t).exp_m1();
    let et = (-t).exp();
    let y = 1.0 - x;
    // e^{−xt} − e^{−t} = e^{−xt}(1 − e^{−(1−x)t})
    let a = (-x * t).exp() * -(-y * t).exp_m1();
    if pair {
        let b = (-y * t).exp() * -(-x * t).exp_m1();
        -et + (a + b) / denom
    } else {
        (x - 1.0) * et + a / denom
    }
}

/// `t·f(t)` for the S integrand, i.e. `2·E(t)·(γ + log t)`.
fn integrand(x: f64, pair: bool, coeffs: &[f64; SMALL_T_TERMS], t: f64) -> f64 {
    let kernel = if t < 1.0 { kernel_series(coeffs, t) } else { kernel_closed(x, pair, t) };
    2.0 * kernel * (EULER_GAMMA + t.ln())
}

/// `S(x)` by double-exponential quadrature of the integral form, regardless
/// of the switch threshold. Slow to converge for `x` near 0.
pub fn s_integral(x: f64, cfg: &EvalConfig) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain { func: "s_integral", x });
    }
    cfg.validate()?;
    let coeffs = small_t_coeffs(x, false);
    exp_sinh(
        |t| integrand(x, false, &coeffs, t),
        1.0 / x,
        cfg.target_abs_error,
        cfg.quadrature_levels,
        "s_integral",
        x,
    )
}

pub(crate) fn s_pair_integral_c(c: f64, cfg: &EvalConfig) -> Result<f64> {
    if !(c > 0.0 && c <= 0.5) {
        return Err(Error::Domain { func: "s_pair_integral", x: c });
    }
    cfg.validate()?;
    let coeffs = small_t_coeffs(c, true);
    exp_sinh(
        |t| integrand(c, true, &coeffs, t),
        1.0 / c,
        cfg.target_abs_error,
        cfg.quadrature_levels,
        "s_pair_integral",
        c,
    )
}

/// `S(x) + S(1−x)` by quadrature of the symmetric integral.
pub fn s_pair_integral(x: f64, cfg: &EvalConfig) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain { func: "s_pair_integral", x });
    }
    s_pair_integral_c(x.min(1.0 - x), cfg)
}

/// `S(x)` for `0 < x ≤ 1`, with `S(1) = 0`.
///
/// Uses quadrature when `min(x, 1−x)` is at least the configured switch
/// threshold and the accelerated series otherwise.
pub fn s_function(x: f64, cfg: &EvalConfig) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain { func: "s_function", x });
    }
    cfg.validate()?;
    if x == 1.0 {
        return Ok(0.0);
    }
    if x.min(1.0 - x) >= cfg.series_switch_threshold {
        s_integral(x, cfg)
    } else {
        s_series(x, cfg)
    }
}

/// `S(c) + S(1−c)` given `c = min(x, 1−x)` directly, which avoids the
/// rounding of `1 − x` when `x` is close to 1.
pub(crate) fn s_pair_c(c: f64, cfg: &EvalConfig) -> Result<f64> {
    if c >= cfg.series_switch_threshold {
        s_pair_integral_c(c, cfg)
    } else {
        s_pair_series_c(c, cfg)
    }
}

/// `S(x) + S(1−x)` for `0 < x < 1`, computed in one pass.
pub fn s_pair(x: f64, cfg: &EvalConfig) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain { func: "s_pair", x });
    }
    cfg.validate()?;
    s_pair_c(x.min(1.0 - x), cfg)
}
