//! Series evaluations: T, the S series (single and paired), ψ_n and γ_n.
//!
//! All of them are sums over `m` of smooth summands decaying like
//! `(log m)^k / m²`; each is split into an explicit head and an
//! Euler-Maclaurin tail (see [`super::em`]).

use super::em::{self, binomial_row, log_pow_derivs, phi_shift};
use super::{EvalConfig, EULER_GAMMA, GAMMA1};
use crate::error::{Error, Result};
use crate::sum::Neumaier;

/// Largest index accepted by [`gamma_n`].
pub const GAMMA_N_MAX: usize = 30;
/// Largest index accepted by [`psi_n`].
const PSI_N_MAX: usize = 40;

/// Agreement demanded between the two γ_n series.
const GAMMA_N_AGREEMENT: f64 = 1e-12;

/// `log(1+u) − u`, accurate also for small `|u|`.
pub(crate) fn log1p_minus(u: f64) -> f64 {
    if u.abs() < 0.1 {
        let mut pow = u * u;
        let mut acc = 0.0;
        let mut k = 2.0;
        // alternating series Σ_{k≥2} (−1)^{k+1} u^k / k
        loop {
            let term = -pow / k;
            acc += term;
            if term.abs() < 1e-18 * acc.abs() {
                break;
            }
            pow *= -u;
            k += 1.0;
        }
        acc
    } else {
        u.ln_1p() - u
    }
}

/// `Σ_{m≥first} F(m)` with the cut-off `N` moved out geometrically from
/// `start` until the tail supplied by `tail_at(N)` converges.
fn accelerated(
    func: &'static str,
    x: f64,
    cfg: &EvalConfig,
    first: usize,
    start: usize,
    term: impl Fn(f64) -> f64,
    tail_at: impl Fn(f64) -> Result<(f64, f64), f64>,
) -> Result<f64> {
    let mut head = Neumaier::new();
    let mut m = first;
    let mut cut = start.min(cfg.max_terms).max(first);
    loop {
        while m < cut {
            head.add(term(m as f64));
            m += 1;
        }
        match tail_at(cut as f64) {
            Ok((tail, _)) => {
                head.add(tail);
                return Ok(head.value());
            }
            Err(estimate) => {
                let next = cut + cut / 2;
                if next > cfg.max_terms {
                    return Err(Error::NonConvergence { func, x, terms: cut, estimate });
                }
                cut = next;
            }
        }
    }
}

fn tail_tol(cfg: &EvalConfig) -> f64 {
    cfg.target_abs_error / 8.0
}

fn check_unit(func: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { func, x })
    }
}

/// `T(x) = γ₁ + ψ₁(x)` for `0 < x ≤ 1`, from
/// `T(x) = −log x / x − Σ_{m≥1} (log(m+x)/(m+x) − log m / m)`.
///
/// The result is accurate to `target_abs_error · max(1, |T(x)|)`; near
/// `x = 0` the leading `−log x / x` is only known to relative precision.
pub fn t_function(x: f64, cfg: &EvalConfig) -> Result<f64> {
    check_unit("t_function", x)?;
    cfg.validate()?;
    if x == 1.0 {
        return Ok(0.0);
    }
    let d1 = log_pow_derivs(1);
    let term = |m: f64| {
        let d = (x / m).ln_1p();
        (d - x * m.ln() / m) / (m + x)
    };
    let tail_at = |n: f64| {
        let d = (x / n).ln_1p();
        let integral = -0.5 * d * (2.0 * n.ln() + d);
        em::tail(
            integral,
            term(n),
            |j| d1.eval(2 * j + 1, n + x) - d1.eval(2 * j + 1, n),
            tail_tol(cfg),
        )
    };
    let sum = accelerated("t_function", x, cfg, 1, 10, term, tail_at)?;
    Ok(-x.ln() / x - sum)
}

/// `S(x)` for `0 < x ≤ 1` from the series
/// `S(x) = 2γ₁x + log²x + Σ_{m≥1} (log²(m+x) − log²m − 2x·log m / m)`.
pub fn s_series(x: f64, cfg: &EvalConfig) -> Result<f64> {
    check_unit("s_series", x)?;
    cfg.validate()?;
    if x == 1.0 {
        return Ok(0.0);
    }
    let d1 = log_pow_derivs(1);
    let term = |m: f64| {
        let u = x / m;
        let d = u.ln_1p();
        2.0 * m.ln() * log1p_minus(u) + d * d
    };
    let tail_at = |n: f64| {
        em::tail(
            -phi_shift(n, x, false),
            term(n),
            |j| {
                let r = 2 * j;
                2.0 * (d1.eval(r, n + x) - d1.eval(r, n) - x * d1.eval(r + 1, n))
            },
            tail_tol(cfg),
        )
    };
    let sum = accelerated("s_series", x, cfg, 1, 10, term, tail_at)?;
    let l = x.ln();
    Ok(2.0 * GAMMA1 * x + l * l + sum)
}

/// `S(c) + S(1−c)` for `0 < c ≤ 1/2` from
/// `log²c + Σ_{m≥1} (log²(m+c) + log²(m−c) − 2 log²m)`.
pub(crate) fn s_pair_series_c(c: f64, cfg: &EvalConfig) -> Result<f64> {
    if !(c > 0.0 && c <= 0.5) {
        return Err(Error::Domain { func: "s_pair_series", x: c });
    }
    cfg.validate()?;
    let d1 = log_pow_derivs(1);
    let term = |m: f64| {
        let u = c / m;
        let dp = u.ln_1p();
        let dm = (-u).ln_1p();
        2.0 * m.ln() * (-u * u).ln_1p() + dp * dp + dm * dm
    };
    let tail_at = |n: f64| {
        em::tail(
            -phi_shift(n, c, true),
            term(n),
            |j| {
                let r = 2 * j;
                2.0 * (d1.eval(r, n + c) + d1.eval(r, n - c) - 2.0 * d1.eval(r, n))
            },
            tail_tol(cfg),
        )
    };
    let sum = accelerated("s_pair_series", c, cfg, 1, 10, term, tail_at)?;
    let l = c.ln();
    Ok(l * l + sum)
}

/// `S(x) + S(1−x)` for `0 < x < 1` from the symmetric series.
pub fn s_pair_series(x: f64, cfg: &EvalConfig) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain { func: "s_pair_series", x });
    }
    s_pair_series_c(x.min(1.0 - x), cfg)
}

/// Hurwitz-type constant `γ_n(x) = lim_N Σ_{k≤N} f_n(k+x) − log^{n+1}(N+x)/(n+1)`
/// with `f_n(t) = (log t)^n / t`.
///
/// Summed in telescoped form, `Σ_k [f_n(t) − (log^{n+1}(t+1) − log^{n+1} t)/(n+1)]`
/// with `t = k + x`, minus `log^{n+1}(x)/(n+1)`: the summands are small, so
/// the head does not cancel against a large integral term.
fn hurwitz_gamma(n: usize, x: f64, cfg: &EvalConfig) -> Result<f64> {
    let binom = binomial_row(n + 1);
    let dn = log_pow_derivs(n);
    let term = |k: f64| gamma_n_terms(n, &binom, k + x).0;
    let tail_at = |big_n: f64| {
        let t = big_n + x;
        em::tail(0.0, dn.eval(0, t), |j| dn.eval(2 * j + 1, t), tail_tol(cfg))
    };
    let sum = accelerated("psi_n", x, cfg, 0, 12, term, tail_at)?;
    Ok(sum - x.ln().powi(n as i32 + 1) / (n + 1) as f64)
}

/// The generalized digamma function `ψ_n(x) = −γ_n(x)` for `0 < x ≤ 1`.
///
/// `ψ_0 = ψ` and `ψ_n(1) = −γ_n`.
pub fn psi_n(n: usize, x: f64, cfg: &EvalConfig) -> Result<f64> {
    check_unit("psi_n", x)?;
    cfg.validate()?;
    if n > PSI_N_MAX {
        return Err(Error::OutOfRange(format!("psi_n: n={n} exceeds {PSI_N_MAX}")));
    }
    Ok(-hurwitz_gamma(n, x, cfg)?)
}

/// Summands of the two γ_n series at `m`, with `L = log m`, `d = log(1 + 1/m)`:
///
/// * first form: `L^n/m − (1/(n+1)) Σ_{j=0}^{n} C(n+1,j) L^j d^{n+1−j}`
/// * second form: `L^n (1/m − d) − (1/(n+1)) Σ_{j=0}^{n−1} C(n+1,j) L^j d^{n+1−j}`
fn gamma_n_terms(n: usize, binom: &[f64], m: f64) -> (f64, f64) {
    let l = m.ln();
    let d = m.recip().ln_1p();
    let mut mixed = 0.0;
    let mut lp = 1.0;
    for (j, b) in binom.iter().enumerate().take(n) {
        mixed += b * lp * d.powi((n + 1 - j) as i32);
        lp *= l;
    }
    // lp = L^n now
    let scale = 1.0 / (n + 1) as f64;
    let full = lp / m - scale * (mixed + binom[n] * lp * d);
    let split = -lp * log1p_minus(m.recip()) - scale * mixed;
    (full, split)
}

/// Both evaluations of the Stieltjes constant γ_n, in the order
/// (first form, second form). The two use different cut-offs.
pub fn gamma_n_pair(n: usize) -> Result<(f64, f64)> {
    if n > GAMMA_N_MAX {
        return Err(Error::OutOfRange(format!("gamma_n: n={n} exceeds {GAMMA_N_MAX}")));
    }
    let cfg = EvalConfig::default();
    let binom = binomial_row(n + 1);
    let dn = log_pow_derivs(n);
    let tail_at = |big_n: f64| {
        em::tail(0.0, dn.eval(0, big_n), |j| dn.eval(2 * j + 1, big_n), tail_tol(&cfg))
    };
    let first = accelerated(
        "gamma_n",
        n as f64,
        &cfg,
        1,
        12,
        |m| gamma_n_terms(n, &binom, m).0,
        tail_at,
    )?;
    let second = accelerated(
        "gamma_n",
        n as f64,
        &cfg,
        1,
        15,
        |m| gamma_n_terms(n, &binom, m).1,
        tail_at,
    )?;
    Ok((first, second))
}

/// The Stieltjes constant γ_n for `0 ≤ n ≤ 30`, accepted only when both
/// series agree to `1e-12`.
pub fn gamma_n(n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(EULER_GAMMA);
    }
    let (first, second) = gamma_n_pair(n)?;
    if (first - second).abs() > GAMMA_N_AGREEMENT {
        return Err(Error::Disagreement { n, first, second });
    }
    Ok(0.5 * (first + second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::digamma;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    #[test]
    fn log1p_minus_branches_agree() {
        for &u in &[0.099_f64, 0.1, -0.099, 1e-3, 0.5, -0.5] {
            let exact = u.ln_1p() - u;
            assert!((log1p_minus(u) - exact).abs() < 1e-16, "u={u}");
        }
        assert!((log1p_minus(1e-9) + 0.5e-18).abs() < 1e-27);
    }

    #[test]
    fn t_at_one_and_half() {
        assert_eq!(t_function(1.0, &cfg()).unwrap(), 0.0);
        // (log 2)² + 2γ log 2
        let l2 = 2f64.ln();
        let exact = l2 * l2 + 2.0 * EULER_GAMMA * l2;
        assert!((t_function(0.5, &cfg()).unwrap() - exact).abs() < 1e-14);
    }

    #[test]
    fn t_sum_identity_q5() {
        let q = 5.0_f64;
        let total: f64 = (1..5).map(|a| t_function(a as f64 / q, &cfg()).unwrap()).sum();
        let l = q.ln();
        let exact = 0.5 * q * l * l + EULER_GAMMA * q * l;
        assert!((total - exact).abs() < 4e-14);
        assert!((total - 11.120_689_858_667_51).abs() < 1e-13);
    }

    #[test]
    fn s_series_reference_values() {
        assert_eq!(s_series(1.0, &cfg()).unwrap(), 0.0);
        // mpmath, 40 digits
        assert!((s_series(0.3, &cfg()).unwrap() - 1.446_762_335_898_621_5).abs() < 1e-14);
        let pair = s_series(1.0 / 3.0, &cfg()).unwrap() + s_series(2.0 / 3.0, &cfg()).unwrap();
        assert!((pair - 1.390_124_101_192_276_2).abs() < 1e-14);
    }

    #[test]
    fn pair_series_matches_single_series() {
        for &x in &[0.5, 0.3, 0.01, 1e-4, 0.77] {
            let a = s_pair_series(x, &cfg()).unwrap();
            let b = s_series(x, &cfg()).unwrap() + s_series(1.0 - x, &cfg()).unwrap();
            assert!((a - b).abs() < 1e-12, "x={x}: {a} vs {b}");
        }
        let reference = 21.207_733_938_231_12;
        assert!((s_pair_series(0.01, &cfg()).unwrap() - reference).abs() < 1e-13);
    }

    #[test]
    fn psi_zero_is_digamma() {
        for &x in &[1.0, 0.5, 0.25, 0.01, 0.9] {
            let a = psi_n(0, x, &cfg()).unwrap();
            let b = digamma(x).unwrap();
            assert!((a - b).abs() < 1e-13 * b.abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn psi_one_is_t_minus_gamma1() {
        for &x in &[1.0, 0.5, 0.2, 0.03] {
            let a = psi_n(1, x, &cfg()).unwrap();
            let b = t_function(x, &cfg()).unwrap() - GAMMA1;
            assert!((a - b).abs() < 1e-13 * b.abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn psi_two_at_one() {
        let v = psi_n(2, 1.0, &cfg()).unwrap();
        assert!((v - 0.009_690_363_192_872_318).abs() < 1e-14);
    }

    #[test]
    fn gamma_n_low_orders() {
        assert_eq!(gamma_n(0).unwrap(), EULER_GAMMA);
        assert!((gamma_n(1).unwrap() - GAMMA1).abs() < 1e-14);
        assert!((gamma_n(2).unwrap() + 0.009_690_363_192_872_318).abs() < 1e-14);
        assert!((gamma_n(10).unwrap() - 2.053_328_149_090_648e-4).abs() < 1e-12);
    }

    #[test]
    fn both_gamma_n_forms_run_at_zero() {
        let (a, b) = gamma_n_pair(0).unwrap();
        assert!((a - EULER_GAMMA).abs() < 1e-14);
        assert!((b - EULER_GAMMA).abs() < 1e-14);
    }

    #[test]
    fn domain_checks() {
        assert!(t_function(0.0, &cfg()).is_err());
        assert!(t_function(1.5, &cfg()).is_err());
        assert!(s_series(-1.0, &cfg()).is_err());
        assert!(s_pair_series(1.0, &cfg()).is_err());
        assert!(psi_n(41, 0.5, &cfg()).is_err());
        assert!(gamma_n(31).is_err());
    }

    #[test]
    fn tiny_max_terms_reports_non_convergence() {
        let tight = EvalConfig { max_terms: 10, target_abs_error: 1e-16, ..EvalConfig::default() };
        match psi_n(40, 0.5, &tight) {
            Err(Error::NonConvergence { .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
