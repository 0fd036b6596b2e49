//! The greedy sequence of admissible prime offsets and the score
//! `v(q) = Σ 1/b` over offsets `b > 0` with `b·q + 1` prime.
//!
//! A finite set of integers is admissible when, for every prime `r`, its
//! residues mod `r` miss at least one class. `n` integers cannot cover the
//! `r > n` classes of a larger prime, so only primes `r ≤ n` need checking.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::multgroup::is_prime;
use crate::sum::Neumaier;

/// Length of the standard sequence used by [`v_of_q`].
pub const STANDARD_COUNT: usize = 2089;

/// An admissible, strictly increasing sequence starting at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffsetSequence {
    b: Vec<u64>,
}

impl OffsetSequence {
    pub fn terms(&self) -> &[u64] {
        &self.b
    }

    pub fn count(&self) -> usize {
        self.b.len()
    }

    /// `Σ 1/b` over every term except the leading 0.
    pub fn reciprocal_sum(&self) -> f64 {
        self.b.iter().skip(1).rev().map(|&b| 1.0 / b as f64).sum::<Neumaier>().value()
    }
}

fn primes_up_to(n: usize) -> Vec<usize> {
    (2..=n).filter(|&r| is_prime(r as u64)).collect()
}

/// True when the residues of `set` miss a class modulo every prime.
pub fn is_admissible(set: &[u64]) -> bool {
    primes_up_to(set.len()).into_iter().all(|r| {
        let mut hit = vec![false; r];
        for &b in set {
            hit[(b % r as u64) as usize] = true;
        }
        hit.contains(&false)
    })
}

/// The first `count` terms: `b(1) = 0`, and each later term is the smallest
/// integer above its predecessor that keeps the prefix admissible.
pub fn greedy_offsets(count: usize) -> Result<OffsetSequence> {
    if !(1..=STANDARD_COUNT).contains(&count) {
        return Err(Error::OutOfRange(format!(
            "count must lie in 1..={STANDARD_COUNT}, got {count}"
        )));
    }
    let primes = primes_up_to(count);
    // hit[i][c]: some term is ≡ c (mod primes[i]); covered[i] counts them
    let mut hit: Vec<Vec<bool>> = primes.iter().map(|&r| vec![false; r]).collect();
    let mut covered = vec![0usize; primes.len()];
    let mut b = Vec::with_capacity(count);
    let mut candidate = 0u64;
    while b.len() < count {
        let len = b.len() + 1;
        let blocked = primes.iter().take_while(|&&r| r <= len).enumerate().any(|(i, &r)| {
            let c = (candidate % r as u64) as usize;
            !hit[i][c] && covered[i] + 1 == r
        });
        if !blocked {
            for (i, &r) in primes.iter().enumerate() {
                let c = (candidate % r as u64) as usize;
                if !hit[i][c] {
                    hit[i][c] = true;
                    covered[i] += 1;
                }
            }
            b.push(candidate);
        }
        candidate += 1;
    }
    Ok(OffsetSequence { b })
}

/// The first [`STANDARD_COUNT`] greedy offsets, built once.
pub fn standard_offsets() -> &'static OffsetSequence {
    static SEQ: OnceLock<OffsetSequence> = OnceLock::new();
    SEQ.get_or_init(|| greedy_offsets(STANDARD_COUNT).expect("standard count is in range"))
}

/// `Σ 1/b(i)` over `i ≥ 2` with `b(i)·q + 1` prime, summed from the largest
/// `b` down.
pub fn v_of_q(q: u64, seq: &OffsetSequence) -> Result<f64> {
    if q < 3 {
        return Err(Error::OutOfRange(format!("q must be at least 3, got {q}")));
    }
    let hits = seq
        .terms()
        .par_iter()
        .skip(1)
        .map(|&b| {
            let n = b.checked_mul(q).and_then(|v| v.checked_add(1)).ok_or(Error::Overflow { b, q })?;
            Ok(is_prime(n).then_some(b))
        })
        .collect::<Result<Vec<Option<u64>>>>()?;
    Ok(hits.into_iter().flatten().rev().map(|b| 1.0 / b as f64).sum::<Neumaier>().value())
}

/// Every prime `q` in `[q_min, q_max]`, `q ≥ 3`, with `v(q) > threshold`,
/// in ascending order.
pub fn scan_candidates(
    q_min: u64,
    q_max: u64,
    threshold: f64,
    seq: &OffsetSequence,
) -> Result<Vec<(u64, f64)>> {
    if q_min > q_max {
        return Err(Error::OutOfRange(format!("empty range [{q_min}, {q_max}]")));
    }
    let lo = q_min.max(3);
    if lo > q_max {
        return Ok(Vec::new());
    }
    let found = (lo..=q_max)
        .into_par_iter()
        .filter(|&q| is_prime(q))
        .map(|q| v_of_q(q, seq).map(|v| (q, v)))
        .filter(|r| !matches!(r, Ok((_, v)) if *v <= threshold))
        .collect::<Result<Vec<_>>>()?;
    Ok(found)
}
