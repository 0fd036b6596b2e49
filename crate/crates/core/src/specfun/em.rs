//! Euler-Maclaurin tails for sums of `(log t)^n / t`-type summands.
//!
//! Every series in this crate is summed as an explicit head `m < N` plus a
//! tail `Σ_{m≥N} F(m)` replaced by
//!
//! ```text
//! ∫_N^∞ F + F(N)/2 − Σ_{j=1}^{J} B_{2j}/(2j)! · F^{(2j−1)}(N)
//! ```
//!
//! The first omitted correction is returned as the remainder estimate.

use std::sync::OnceLock;

/// Largest number of Bernoulli corrections available (B_2 .. B_28); B_30 is
/// kept for the remainder estimate.
pub(crate) const MAX_ORDER: usize = 14;

/// Even Bernoulli numbers B_0, B_2, ..., B_30 (index i holds B_{2i}).
const BERNOULLI_EVEN: [f64; 16] = [
    1.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// B_n for 0 ≤ n ≤ 31, with B_1 = −1/2.
pub(crate) fn bernoulli(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => -0.5,
        n if n % 2 == 1 => 0.0,
        n => BERNOULLI_EVEN[n / 2],
    }
}

/// B_{2j} / (2j)! for j = 1..=MAX_ORDER+1.
fn em_weights() -> &'static [f64] {
    static W: OnceLock<Vec<f64>> = OnceLock::new();
    W.get_or_init(|| {
        let mut fact = 1.0;
        let mut out = Vec::with_capacity(MAX_ORDER + 1);
        for (j, b) in BERNOULLI_EVEN.iter().enumerate().take(MAX_ORDER + 2).skip(1) {
            fact *= ((2 * j - 1) * (2 * j)) as f64;
            out.push(b / fact);
        }
        out
    })
}

/// Row `n` of Pascal's triangle as floats.
pub(crate) fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n + 1 - k) as f64 / k as f64;
    }
    row.iter_mut().for_each(|c| *c = c.round());
    row
}

/// Tail `Σ_{m≥N} F(m)` from the integral `∫_N^∞ F`, the value `F(N)` and a
/// callback `odd_deriv(j) = F^{(2j+1)}(N)`.
///
/// Corrections are added until the next one drops below `tol`; that term is
/// returned as the remainder estimate. Fails with the smallest correction
/// seen when the (divergent) asymptotic series starts growing first or the
/// Bernoulli table runs out, in which case `N` has to move further out.
pub(crate) fn tail(
    integral: f64,
    value: f64,
    mut odd_deriv: impl FnMut(usize) -> f64,
    tol: f64,
) -> Result<(f64, f64), f64> {
    let w = em_weights();
    let mut acc = integral + 0.5 * value;
    let mut prev = f64::INFINITY;
    for (j, wj) in w.iter().enumerate() {
        let term = wj * odd_deriv(j);
        if term.abs() <= tol {
            return Ok((acc, term.abs()));
        }
        if term.abs() > prev {
            return Err(prev);
        }
        if j == MAX_ORDER {
            return Err(term.abs());
        }
        acc -= term;
        prev = term.abs();
    }
    Err(prev)
}

/// Derivatives of `f_n(t) = (log t)^n / t`.
///
/// `D^r f_n(t) = t^{−(r+1)} · P_{n,r}(log t)` where `P_{n,0}(L) = L^n` and
/// `P_{n,r+1} = −(r+1)·P_{n,r} + P_{n,r}'`.
#[derive(Debug, Clone)]
pub(crate) struct LogPowDerivs {
    /// `coeffs[r][i]` is the coefficient of `L^i` in `P_{n,r}`.
    coeffs: Vec<Vec<f64>>,
}

impl LogPowDerivs {
    pub(crate) fn new(n: usize, max_order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(max_order + 1);
        let mut p = vec![0.0; n + 1];
        p[n] = 1.0;
        coeffs.push(p);
        for r in 0..max_order {
            let prev = &coeffs[r];
            let next: Vec<f64> = (0..=n)
                .map(|i| {
                    let d = if i < n { (i + 1) as f64 * prev[i + 1] } else { 0.0 };
                    -((r + 1) as f64) * prev[i] + d
                })
                .collect();
            coeffs.push(next);
        }
        Self { coeffs }
    }

    pub(crate) fn max_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `D^r f_n(t)` for `t > 0`.
    pub(crate) fn eval(&self, r: usize, t: f64) -> f64 {
        let l = t.ln();
        let p = &self.coeffs[r];
        let poly = p.iter().rev().fold(0.0, |acc, &c| acc * l + c);
        poly * t.powi(-(r as i32 + 1))
    }
}

/// Derivative table for `f_n`, deep enough for every tail correction and
/// the Taylor shifts below. Cached for the `n` used by the library.
pub(crate) fn log_pow_derivs(n: usize) -> &'static LogPowDerivs {
    const CACHED: usize = 41;
    static T: OnceLock<Vec<LogPowDerivs>> = OnceLock::new();
    let all = T.get_or_init(|| (0..CACHED).map(|n| LogPowDerivs::new(n, 64)).collect());
    &all[n]
}

/// `Σ_{k≥2} φ^{(k)}(N)·x^k/k!` with `φ(u) = u(log²u − 2 log u + 2)`, i.e. the
/// Taylor remainder `φ(N+x) − φ(N) − x·log²N` computed without cancellation.
///
/// With `even_only` set, only even `k` are kept and doubled, which yields the
/// symmetric second difference `φ(N+x) + φ(N−x) − 2φ(N)`.
pub(crate) fn phi_shift(big_n: f64, x: f64, even_only: bool) -> f64 {
    let d = log_pow_derivs(1);
    let mut acc = 0.0;
    let mut pow_fact = x; // x^k / k!, starting at k = 1
    for k in 2..=d.max_order() + 1 {
        pow_fact *= x / k as f64;
        if even_only && k % 2 == 1 {
            continue;
        }
        // φ^{(k)} = 2·D^{k−2} f_1
        let term = 2.0 * d.eval(k - 2, big_n) * pow_fact;
        acc += if even_only { 2.0 * term } else { term };
        if term.abs() < 1e-22 * acc.abs().max(1e-300) {
            break;
        }
    }
    acc
}
