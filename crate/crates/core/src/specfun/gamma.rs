//! Digamma and log-gamma on the unit interval.
//!
//! Both are expanded around 2, where
//!
//! ```text
//! ψ(2+z)    = 1 − γ + Σ_{k≥2} (−1)^k (ζ(k)−1) z^{k−1}
//! logΓ(2+z) = (1 − γ) z + Σ_{k≥2} (−1)^k (ζ(k)−1)/k · z^k
//! ```
//!
//! converge like `(|z|/2)^k` for `|z| < 2`. Arguments in `(0, 1/2)` use
//! `z = x` and two recurrence steps, arguments in `[1/2, 1]` use `z = x−1`
//! and one step. Every term stays small, so no cancellation against large
//! Stirling terms occurs.

use std::sync::OnceLock;

use super::em;
use super::EULER_GAMMA;
use crate::error::{Error, Result};

const ZETA_TERMS: usize = 64;

/// `ζ(k) − 1` for `k = 0..ZETA_TERMS` (entries 0 and 1 unused).
fn zeta_minus_one() -> &'static [f64; ZETA_TERMS] {
    static Z: OnceLock<[f64; ZETA_TERMS]> = OnceLock::new();
    Z.get_or_init(|| {
        let mut out = [0.0; ZETA_TERMS];
        for (k, z) in out.iter_mut().enumerate().skip(2) {
            *z = zeta_minus_one_at(k);
        }
        out
    })
}

fn zeta_minus_one_at(k: usize) -> f64 {
    let kf = k as f64;
    if k > 20 {
        return (2..=60).rev().map(|n| (n as f64).powf(-kf)).sum();
    }
    const CUT: usize = 16;
    let n = CUT as f64;
    let head: f64 = (2..CUT).rev().map(|m| (m as f64).powf(-kf)).sum();
    // F(t) = t^{−k}: F^{(2j+1)}(N) = −k(k+1)···(k+2j) / N^{k+2j+1}
    let deriv = |j: usize| -> f64 {
        let r = 2 * j + 1;
        let rising: f64 = (0..r).map(|i| kf + i as f64).product();
        -rising * n.powf(-(kf + r as f64))
    };
    let (tail, _) = em::tail(n.powf(1.0 - kf) / (kf - 1.0), n.powf(-kf), deriv, 1e-18 * 2f64.powf(-kf))
        .expect("zeta tail converges at N=16 for k <= 20");
    head + tail
}

/// `ψ(2+z)` for `|z| ≤ 1`.
fn digamma_around_two(z: f64) -> f64 {
    let zm = zeta_minus_one();
    let mut acc = 0.0;
    let mut pow = 1.0; // z^{k−1}
    for (k, &c) in zm.iter().enumerate().skip(2) {
        pow *= z;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * c * pow;
        acc += term;
        if term.abs() < 1e-18 * acc.abs().max(1e-300) || pow == 0.0 {
            break;
        }
    }
    (1.0 - EULER_GAMMA) + acc
}

/// `logΓ(2+z)` for `|z| ≤ 1`.
fn log_gamma_around_two(z: f64) -> f64 {
    let zm = zeta_minus_one();
    let mut acc = 0.0;
    let mut pow = z; // z^k
    for (k, &c) in zm.iter().enumerate().skip(2) {
        pow *= z;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * c * pow / k as f64;
        acc += term;
        if term.abs() < 1e-18 * acc.abs().max(1e-300) || pow == 0.0 {
            break;
        }
    }
    (1.0 - EULER_GAMMA) * z + acc
}

/// ψ(x) for `0 < x ≤ 1`; outside that range the caller must shift.
pub(crate) fn digamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        digamma_around_two(x) - 1.0 / x - 1.0 / (1.0 + x)
    } else {
        digamma_around_two(x - 1.0) - 1.0 / x
    }
}

/// logΓ(x) for `0 < x ≤ 1`.
pub(crate) fn log_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        log_gamma_around_two(x) - x.ln() - x.ln_1p()
    } else {
        log_gamma_around_two(x - 1.0) - x.ln()
    }
}

/// The digamma function ψ = Γ'/Γ on `(0, 1]`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain { func: "digamma", x });
    }
    Ok(digamma_pos(x))
}

/// `log Γ(x)` on the open interval `(0, 1)`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain { func: "log_gamma", x });
    }
    Ok(log_gamma_pos(x))
}
