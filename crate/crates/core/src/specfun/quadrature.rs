//! Exp-sinh (double-exponential) quadrature on `(0, ∞)`.
//!
//! `t = s·exp(π/2·sinh u)` maps the real line onto `(0, ∞)`; the
//! trapezoidal rule in `u` converges geometrically in the number of nodes
//! once both ends decay. Levels halve the step and reuse all earlier nodes.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const FIRST_STEP: f64 = 0.5;
const MAX_U: f64 = 6.5;

/// `∫_0^∞ f(t) dt` where the caller passes `g(t) = t·f(t)`.
///
/// `scale` should be the length over which `f` decays. Stops when two
/// successive levels agree to `target / 4` (or to rounding level), failing
/// after `max_levels` halvings.
pub(crate) fn exp_sinh(
    g: impl Fn(f64) -> f64,
    scale: f64,
    target: f64,
    max_levels: usize,
    func: &'static str,
    x: f64,
) -> Result<f64> {
    let node = |u: f64| {
        let t = scale * (FRAC_PI_2 * u.sinh()).exp();
        let w = FRAC_PI_2 * u.cosh();
        let v = g(t) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let negligible = 1e-4 * target;

    let mut sum = node(0.0);
    let mut abs_sum = sum.abs();
    let mut u_hi = 0.0;
    let mut u_lo = 0.0;
    for dir in [1.0, -1.0] {
        let mut quiet = 0;
        let mut k = 1;
        loop {
            let u = dir * k as f64 * FIRST_STEP;
            if u.abs() > MAX_U {
                break;
            }
            let v = node(u);
            sum += v;
            abs_sum += v.abs();
            if dir > 0.0 {
                u_hi = u;
            } else {
                u_lo = u;
            }
            quiet = if v.abs() < negligible { quiet + 1 } else { 0 };
            if quiet >= 2 && u.abs() >= 1.0 {
                break;
            }
            k += 1;
        }
    }

    let mut h = FIRST_STEP;
    let mut prev = h * sum;
    let mut last_diff = f64::INFINITY;
    for _ in 0..max_levels {
        h *= 0.5;
        let mut u = u_lo + h;
        while u < u_hi {
            let v = node(u);
            sum += v;
            abs_sum += v.abs();
            u += 2.0 * h;
        }
        let current = h * sum;
        last_diff = (current - prev).abs();
        let floor = 64.0 * f64::EPSILON * h * abs_sum;
        if last_diff <= (0.25 * target).max(floor) {
            return Ok(current);
        }
        prev = current;
    }
    Err(Error::Quadrature { func, x, disagreement: last_diff })
}
