//! Stieltjes constants in arithmetic progressions,
//!
//! `γ_k(a,q) = lim_{x→∞} ( Σ_{m ≤ x, m ≡ a (q)} (log m)^k / m − (log x)^{k+1} / (q(k+1)) )`,
//!
//! computed from the generalized digamma functions:
//!
//! `γ_k(a,q) = −(1/q)·( L^{k+1}/(k+1) + Σ_{n=0}^{k} C(k,n)·L^{k−n}·ψ_n(a/q) )`, `L = log q`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::specfun::{self, EvalConfig, EULER_GAMMA, GAMMA1};
use crate::sum::Neumaier;

/// Largest `k` accepted by [`gammak_aq`].
pub const K_MAX: usize = 20;
/// Largest modulus accepted by [`gammak_aq`].
pub const Q_MAX: u64 = 100;

fn check_residue(a: u64, q: u64) -> Result<()> {
    if q >= 1 && (1..=q).contains(&a) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("need 1 ≤ a ≤ q, got a={a}, q={q}")))
    }
}

/// `γ_0(a,q)`.
pub fn gamma0_aq(a: u64, q: u64) -> Result<f64> {
    check_residue(a, q)?;
    let qf = q as f64;
    let lq = qf.ln();
    if a == q {
        return Ok((EULER_GAMMA - lq) / qf);
    }
    Ok(-(lq + specfun::digamma(a as f64 / qf)?) / qf)
}

/// `γ_1(a,q)`, from ψ and the T function.
pub fn gamma1_aq(a: u64, q: u64) -> Result<f64> {
    check_residue(a, q)?;
    let qf = q as f64;
    let lq = qf.ln();
    if a == q {
        return Ok((GAMMA1 + EULER_GAMMA * lq - 0.5 * lq * lq) / qf);
    }
    let x = a as f64 / qf;
    let cfg = EvalConfig::default();
    let psi = specfun::digamma(x)?;
    let t = specfun::t_function(x, &cfg)?;
    Ok((GAMMA1 - 0.5 * lq * lq - lq * psi - t) / qf)
}

/// `γ_k(a,q)` for `k ≤ 20`, `q ≤ 100`.
pub fn gammak_aq(k: usize, a: u64, q: u64) -> Result<f64> {
    check_residue(a, q)?;
    if k > K_MAX {
        return Err(Error::OutOfRange(format!("k must be at most {K_MAX}, got {k}")));
    }
    if q > Q_MAX {
        return Err(Error::OutOfRange(format!("q must be at most {Q_MAX}, got {q}")));
    }
    let cfg = EvalConfig::default();
    let qf = q as f64;
    let lq = qf.ln();
    let x = a as f64 / qf;
    let mut acc = Neumaier::new();
    acc.add(lq.powi(k as i32 + 1) / (k as f64 + 1.0));
    let mut binom = 1.0;
    for n in 0..=k {
        acc.add(binom * lq.powi((k - n) as i32) * specfun::psi_n(n, x, &cfg)?);
        binom = binom * (k - n) as f64 / (n + 1) as f64;
    }
    Ok(-acc.value() / qf)
}

/// `γ_k(a,q)` for `0 ≤ k ≤ k_max` and every residue `1 ≤ a ≤ q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesTable {
    q: u64,
    k_max: usize,
    /// Row `k`, column `a − 1`.
    values: Vec<Vec<f64>>,
}

impl StieltjesTable {
    /// Evaluates all cells in parallel; the result is independent of the
    /// worker count.
    pub fn new(q: u64, k_max: usize) -> Result<Self> {
        let cells: Vec<(usize, u64)> =
            (0..=k_max).flat_map(|k| (1..=q).map(move |a| (k, a))).collect();
        let flat = cells
            .par_iter()
            .map(|&(k, a)| gammak_aq(k, a, q))
            .collect::<Result<Vec<f64>>>()?;
        let values = flat.chunks(q as usize).map(|row| row.to_vec()).collect();
        Ok(Self { q, k_max, values })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// `γ_k(a,q)`, or `None` outside the table.
    pub fn get(&self, k: usize, a: u64) -> Option<f64> {
        if a == 0 {
            return None;
        }
        self.values.get(k)?.get(a as usize - 1).copied()
    }

    /// `Σ_a γ_k(a,q)`, which equals `γ_k`.
    pub fn row_sum(&self, k: usize) -> Option<f64> {
        Some(self.values.get(k)?.iter().copied().sum::<Neumaier>().value())
    }
}

/// Reference value of `γ_k(a,q)` straight from the defining limit: the
/// progression is summed up to about `n_max` with the boundary half-term
/// removed, then one Richardson step against the sum to `n_max/2` cancels
/// the leading `O(N⁻²)` remainder. Slow; meant as a test oracle.
pub fn brute_force_gamma_k(k: usize, a: u64, q: u64, n_max: u64) -> Result<f64> {
    check_residue(a, q)?;
    let terms = n_max / q;
    if terms < 16 {
        return Err(Error::OutOfRange(format!("n_max {n_max} too small for q={q}")));
    }
    let f = |m: f64| m.ln().powi(k as i32) / m;
    let qf = q as f64;
    let mut acc = Neumaier::new();
    let mut at_half = 0.0;
    let half = terms / 2;
    for n in 0..=terms {
        let m = (a + n * q) as f64;
        acc.add(f(m));
        if n == half {
            at_half = acc.value();
        }
    }
    let limit_at = |partial: f64, last: u64| {
        let m = (a + last * q) as f64;
        partial - 0.5 * f(m) - m.ln().powi(k as i32 + 1) / (qf * (k as f64 + 1.0))
    };
    let coarse = limit_at(at_half, half);
    let fine = limit_at(acc.value(), terms);
    let ratio = (terms as f64 / half as f64).powi(2);
    Ok((ratio * fine - coarse) / (ratio - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma_n;

    #[test]
    fn closed_forms() {
        assert_eq!(gamma0_aq(1, 1).unwrap(), EULER_GAMMA);
        assert!((gamma0_aq(3, 3).unwrap() + 0.173_798_874_588_858_9).abs() < 1e-15);
        assert!((gamma1_aq(1, 1).unwrap() - GAMMA1).abs() < 1e-16);
        assert!((gamma1_aq(7, 7).unwrap() + 0.120_412_739_865_187).abs() < 1e-15);
        assert!(gamma0_aq(0, 3).is_err() && gamma0_aq(4, 3).is_err());
        assert!(gammak_aq(21, 1, 1).is_err() && gammak_aq(1, 1, 101).is_err());
    }

    #[test]
    fn binomial_form_specialises() {
        for q in 1..=9u64 {
            for a in 1..=q {
                let g0 = gammak_aq(0, a, q).unwrap();
                assert!((g0 - gamma0_aq(a, q).unwrap()).abs() < 1e-13, "a={a} q={q}");
                let g1 = gammak_aq(1, a, q).unwrap();
                assert!((g1 - gamma1_aq(a, q).unwrap()).abs() < 1e-12, "a={a} q={q}");
            }
        }
        for k in 0..=10 {
            assert!((gammak_aq(k, 1, 1).unwrap() - gamma_n(k).unwrap()).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn rows_sum_to_full_constants() {
        let table = StieltjesTable::new(7, 4).unwrap();
        for k in 0..=4 {
            let expect = gamma_n(k).unwrap();
            assert!((table.row_sum(k).unwrap() - expect).abs() < 1e-12, "k={k}");
        }
        assert_eq!(table.get(2, 3), Some(gammak_aq(2, 3, 7).unwrap()));
        assert_eq!(table.get(5, 1), None);
        assert_eq!(table.get(0, 8), None);
    }

    #[test]
    fn limit_oracle() {
        for &(k, a, q) in &[(1usize, 2u64, 5u64), (2, 1, 3), (0, 4, 7), (3, 9, 9)] {
            let oracle = brute_force_gamma_k(k, a, q, 10_000_000).unwrap();
            let fast = gammak_aq(k, a, q).unwrap();
            assert!((oracle - fast).abs() < 1e-8, "k={k} a={a} q={q}: {oracle} vs {fast}");
        }
    }
}
