//! The multiplicative group `(ℤ/qℤ)*` of an odd prime: primality,
//! factorisation, primitive roots and the index sequence `a_k = g^k mod q`.

use crate::error::{Error, Result};

/// Witnesses that make Miller-Rabin deterministic for every 64-bit input.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const TRIAL_LIMIT: u64 = 1_000_000;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A non-trivial factor of the odd composite `n` (Pollard rho, Brent's
/// cycle detection).
fn rho_factor(n: u64) -> u64 {
    for c in 1.. {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        let mut power = 1u64;
        let mut lam = 1u64;
        while d == 1 {
            if power == lam {
                x = y;
                power <<= 1;
                lam = 0;
            }
            y = f(y);
            lam += 1;
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

fn push_prime_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = rho_factor(n);
    push_prime_factors(d, out);
    push_prime_factors(n / d, out);
}

/// Prime factorisation as ascending `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && p * p <= n {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        push_prime_factors(n, &mut primes);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn require_odd_prime(q: u64) -> Result<()> {
    if q > 2 && is_prime(q) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(q))
    }
}

/// The smallest primitive root modulo the odd prime `q`.
pub fn primitive_root(q: u64) -> Result<u64> {
    require_odd_prime(q)?;
    let order = q - 1;
    let cofactors: Vec<u64> = factorize(order).iter().map(|&(p, _)| order / p).collect();
    (2..q)
        .find(|&g| cofactors.iter().all(|&e| pow_mod(g, e, q) != 1))
        .ok_or(Error::NotOddPrime(q))
}

/// An odd prime `q` with its smallest primitive root `g` and the index
/// sequence `a_k = g^k mod q`, `0 ≤ k < q−1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeContext {
    q: u64,
    g: u64,
    a_seq: Vec<u64>,
}

impl PrimeContext {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    /// `(q−1)/2`, the half length. Also `a_{k+m} = q − a_k`.
    pub fn m(&self) -> usize {
        self.a_seq.len() / 2
    }

    /// Group order `q−1`.
    pub fn order(&self) -> usize {
        self.a_seq.len()
    }

    pub fn a_seq(&self) -> &[u64] {
        &self.a_seq
    }

    /// `a_k / q`.
    pub fn x(&self, k: usize) -> f64 {
        self.a_seq[k] as f64 / self.q as f64
    }

    /// `min(a_k, q − a_k) / q`, the distance of `a_k/q` from the nearer end
    /// of the unit interval, without the rounding of `1 − a_k/q`.
    pub fn reflected_x(&self, k: usize) -> f64 {
        let a = self.a_seq[k];
        a.min(self.q - a) as f64 / self.q as f64
    }
}

/// Builds the [`PrimeContext`] of an odd prime.
pub fn build_context(q: u64) -> Result<PrimeContext> {
    let g = primitive_root(q)?;
    let n = (q - 1) as usize;
    let mut a_seq = Vec::with_capacity(n);
    let mut a = 1u64;
    for _ in 0..n {
        a_seq.push(a);
        a = mul_mod(a, g, q);
    }
    Ok(PrimeContext { q, g, a_seq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn agrees_with_trial_division_below_a_million() {
        // sieve instead of per-number trial division to keep this fast
        let limit = 1_000_000usize;
        let mut composite = vec![false; limit + 1];
        for i in 2..=limit {
            if !composite[i] {
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
            assert_eq!(is_prime(i as u64), !composite[i], "n={i}");
        }
        assert!(!is_prime(0) && !is_prime(1));
    }

    #[test]
    fn known_values() {
        assert!(is_prime(2));
        assert!(is_prime(9_109_334_831));
        assert!(!is_prime(1_000_000));
        assert!(is_prime(18_446_744_073_709_551_557)); // largest 64-bit prime
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(!is_prime(3_825_123_056_546_413_051));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(3).unwrap(), 2);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(5).unwrap(), 2);
        let g = primitive_root(1009).unwrap();
        for (p, _) in factorize(1008) {
            assert_ne!(pow_mod(g, 1008 / p, 1009), 1);
        }
        assert!(matches!(primitive_root(9), Err(Error::NotOddPrime(9))));
        assert!(primitive_root(2).is_err());
    }

    #[test]
    fn factorization_with_large_factors() {
        let n = 1_000_003u64 * 1_000_033;
        assert_eq!(factorize(n), vec![(1_000_003, 1), (1_000_033, 1)]);
        assert_eq!(factorize(1008), vec![(2, 4), (3, 2), (7, 1)]);
        assert_eq!(factorize(1), vec![]);
        let big = 18_446_744_073_709_551_556u64; // 2^64 − 60
        let f = factorize(big);
        let back: u128 = f.iter().map(|&(p, e)| (p as u128).pow(e)).product();
        assert_eq!(back, big as u128);
        assert!(f.iter().all(|&(p, _)| is_prime(p)));
    }

    #[test]
    fn context_for_five() {
        let ctx = build_context(5).unwrap();
        assert_eq!(ctx.g(), 2);
        assert_eq!(ctx.a_seq(), &[1, 2, 4, 3]);
        for k in 0..2 {
            assert_eq!(ctx.a_seq()[k + 2] + ctx.a_seq()[k], 5);
        }
        assert!(build_context(4).is_err());
    }

    proptest! {
        #[test]
        fn context_invariants(idx in 1usize..300) {
            let q = (3u64..).filter(|&n| is_prime(n)).nth(idx).unwrap();
            let ctx = build_context(q).unwrap();
            let mut sorted = ctx.a_seq().to_vec();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (1..q).collect::<Vec<_>>());
            prop_assert_eq!(ctx.a_seq()[0], 1);
            let m = ctx.m();
            for k in 0..m {
                prop_assert_eq!(ctx.a_seq()[k + m], q - ctx.a_seq()[k]);
            }
        }

        #[test]
        fn is_prime_matches_trial_division(n in 0u64..5_000_000_000) {
            prop_assert_eq!(is_prime(n), trial_division(n));
        }
    }
}
