//! Discrete Fourier transforms of arbitrary length and the decimation in
//! frequency that splits a length-`2m` transform into its even and odd bins.
//!
//! Convention: `X[j] = Σ_k e(σ·jk/N)·x[k]` with `e(t) = exp(2πit)`,
//! unnormalised. The inverse is the transform with `−σ`, divided by `N`.

mod plan;

pub use num_complex::Complex64;
pub use plan::Plan;

pub(crate) use plan::unit_root;

use crate::error::{Error, Result};

/// Largest input accepted by [`naive_dft`].
pub const NAIVE_MAX_LEN: usize = 10_000;

/// Exponent sign σ of the transform kernel `e(σ·jk/N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn int(self) -> i128 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Transform output indexed by frequency bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
    sign: Sign,
    decimated: bool,
}

impl Spectrum {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// True when the bins are half-length outputs of a decimation branch.
    pub fn decimated(&self) -> bool {
        self.decimated
    }

    pub(crate) fn mark_decimated(mut self) -> Self {
        self.decimated = true;
        self
    }
}

impl std::ops::Index<usize> for Spectrum {
    type Output = Complex64;

    fn index(&self, j: usize) -> &Complex64 {
        &self.values[j]
    }
}

/// Fast transform of a complex sequence.
pub fn dft(x: &[Complex64], sign: Sign) -> Spectrum {
    let values = Plan::new(x.len(), sign.value()).run(x);
    Spectrum { values, sign, decimated: false }
}

/// Fast transform of a real sequence.
pub fn dft_real(x: &[f64], sign: Sign) -> Spectrum {
    let c: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    dft(&c, sign)
}

/// Inverse of [`dft`]: the `−σ` transform divided by the length.
pub fn inverse(spec: &Spectrum) -> Vec<Complex64> {
    let n = spec.len() as f64;
    let back = Plan::new(spec.len(), spec.sign.flip().value()).run(&spec.values);
    back.into_iter().map(|v| v / n).collect()
}

/// Direct `O(N²)` evaluation, used as a test oracle.
pub fn naive_dft(x: &[Complex64], sign: Sign) -> Result<Spectrum> {
    let n = x.len();
    if n > NAIVE_MAX_LEN {
        return Err(Error::LengthGuard { len: n, max: NAIVE_MAX_LEN });
    }
    let values = (0..n)
        .map(|j| {
            x.iter()
                .enumerate()
                .map(|(k, &v)| v * unit_root(sign.int() * ((j * k) % n) as i128, n as i128))
                .sum()
        })
        .collect();
    Ok(Spectrum { values, sign, decimated: false })
}

/// The two half-length inputs produced by decimation in frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct DifPair {
    /// `f[k] + f[k+m]`; its transform gives the even bins `2t`.
    pub b_seq: Vec<f64>,
    /// `e(σk/N)·(f[k] − f[k+m])`; its transform gives the odd bins `2t+1`.
    pub c_seq: Vec<Complex64>,
}

impl DifPair {
    pub fn len(&self) -> usize {
        self.b_seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b_seq.is_empty()
    }
}

/// Splits a real length-`2m` sequence for decimation in frequency.
pub fn dif_split(f_vals: &[f64], sign: Sign) -> Result<DifPair> {
    let n = f_vals.len();
    if n % 2 == 1 {
        return Err(Error::OddLength(n));
    }
    let m = n / 2;
    let (lo, hi) = f_vals.split_at(m);
    let b_seq = lo.iter().zip(hi).map(|(a, b)| a + b).collect();
    let c_seq = lo
        .iter()
        .zip(hi)
        .enumerate()
        .map(|(k, (a, b))| unit_root(sign.int() * k as i128, n as i128) * (a - b))
        .collect();
    Ok(DifPair { b_seq, c_seq })
}

/// Transform of the `c`-branch of a decimation, i.e. `f`'s odd bins.
pub fn dft_odd_bins(pair: &DifPair, sign: Sign) -> Spectrum {
    dft(&pair.c_seq, sign).mark_decimated()
}

/// Transform of the `b`-branch of a decimation, i.e. `f`'s even bins.
pub fn dft_even_bins(pair: &DifPair, sign: Sign) -> Spectrum {
    dft_real(&pair.b_seq, sign).mark_decimated()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn trivial_transforms() {
        let delta = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let s = dft(&delta, Sign::Plus);
        assert!(s.values().iter().all(|v| (v - c(1.0, 0.0)).norm() < 1e-15));
        let ones = [c(1.0, 0.0); 4];
        let s = dft(&ones, Sign::Plus);
        assert!(max_err(s.values(), &[c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]) < 1e-15);
        let s = naive_dft(&[c(0.0, 0.0), c(1.0, 0.0)], Sign::Plus).unwrap();
        assert!(max_err(s.values(), &[c(1.0, 0.0), c(-1.0, 0.0)]) < 1e-15);
        assert_eq!(dft(&[c(2.5, -1.0)], Sign::Minus).values(), &[c(2.5, -1.0)]);
    }

    #[test]
    fn sign_convention() {
        // X[1] of a delta at k=1 is e(σ/4)
        let x = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!((dft(&x, Sign::Plus)[1] - c(0.0, 1.0)).norm() < 1e-15);
        assert!((dft(&x, Sign::Minus)[1] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn naive_guard() {
        let big = vec![c(0.0, 0.0); NAIVE_MAX_LEN + 1];
        assert!(matches!(naive_dft(&big, Sign::Plus), Err(Error::LengthGuard { .. })));
    }

    #[test]
    fn length_360_against_naive() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(360);
        let x: Vec<Complex64> = (0..360).map(|_| c(rng.gen_range(-1.0..1.0), 0.0)).collect();
        let norm1: f64 = x.iter().map(|v| v.norm()).sum();
        for sign in [Sign::Plus, Sign::Minus] {
            let err = max_err(dft(&x, sign).values(), naive_dft(&x, sign).unwrap().values());
            assert!(err <= 1e-10 * norm1);
        }
    }

    #[test]
    fn dif_split_by_hand() {
        let pair = dif_split(&[0.0, 1.0, 2.0, 3.0], Sign::Plus).unwrap();
        assert_eq!(pair.b_seq, vec![2.0, 4.0]);
        assert!((pair.c_seq[0] - c(-2.0, 0.0)).norm() < 1e-15);
        assert!((pair.c_seq[1] - c(0.0, -2.0)).norm() < 1e-15); // e(1/4)·(−2)
        assert!(matches!(dif_split(&[1.0, 2.0, 3.0], Sign::Plus), Err(Error::OddLength(3))));
    }

    #[test]
    fn dif_bins_for_small_primes() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(13);
        for q in (3usize..=101).filter(|&q| crate::multgroup::is_prime(q as u64)) {
            let f: Vec<f64> = (0..q - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
            for sign in [Sign::Plus, Sign::Minus] {
                let full = naive_dft(&f.iter().map(|&v| c(v, 0.0)).collect::<Vec<_>>(), sign).unwrap();
                let pair = dif_split(&f, sign).unwrap();
                let even = dft_even_bins(&pair, sign);
                let odd = dft_odd_bins(&pair, sign);
                for t in 0..pair.len() {
                    assert!((even[t] - full[2 * t]).norm() < 1e-12, "q={q} t={t}");
                    assert!((odd[t] - full[2 * t + 1]).norm() < 1e-12, "q={q} t={t}");
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn fast_matches_naive(len in 2usize..=512, seed in any::<u64>(), plus in any::<bool>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let x: Vec<Complex64> =
                (0..len).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let sign = if plus { Sign::Plus } else { Sign::Minus };
            let err = max_err(dft(&x, sign).values(), naive_dft(&x, sign).unwrap().values());
            prop_assert!(err <= 1e-10);
        }

        #[test]
        fn round_trip_and_parseval(len in 1usize..=700, seed in any::<u64>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let x: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let spec = dft_real(&x, Sign::Plus);
            let back = inverse(&spec);
            let scale = x.iter().map(|v| v.abs()).fold(1e-300, f64::max);
            for (a, b) in back.iter().zip(&x) {
                prop_assert!((a.re - b).abs() <= 1e-12 * scale && a.im.abs() <= 1e-12 * scale);
            }
            let energy_t: f64 = x.iter().map(|v| v * v).sum();
            let energy_f: f64 = spec.values().iter().map(|v| v.norm_sqr()).sum();
            prop_assert!((energy_f - len as f64 * energy_t).abs() <= 1e-10 * energy_f.max(1e-300));
            for j in 1..len {
                prop_assert!((spec[len - j] - spec[j].conj()).norm() <= 1e-12 * len as f64 * scale);
            }
        }
    }
}
