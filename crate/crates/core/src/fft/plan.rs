//! Mixed-radix decimation-in-time transform for arbitrary lengths.
//!
//! `N = p·M` is split into `p` interleaved transforms of length `M`, which
//! are then combined with twiddles and a `p`-point transform per output
//! column. Prime factors up to `NAIVE_RADIX_MAX` use a direct `p`-point
//! transform; larger ones go through Bluestein's chirp convolution on a
//! power-of-two length.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

const NAIVE_RADIX_MAX: usize = 31;

/// `e(num/den) = exp(2πi·num/den)` with the fraction reduced first, so the
/// angle stays in `[0, 2π)` and carries no large-argument error.
pub(crate) fn unit_root(num: i128, den: i128) -> Complex64 {
    let r = num.rem_euclid(den);
    let angle = 2.0 * PI * (r as f64 / den as f64);
    Complex64::from_polar(1.0, angle)
}

fn factorize_length(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    while n % 4 == 0 {
        out.push(4);
        n /= 4;
    }
    if n % 2 == 0 {
        out.push(2);
        n /= 2;
    }
    let mut p = 3;
    while p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Chirp-z evaluation of a prime-length transform.
#[derive(Debug)]
struct Bluestein {
    len: usize,
    /// `e(σ·j²/(2p))` for `0 ≤ j < p`.
    chirp: Vec<Complex64>,
    /// Transform of the conjugate chirp, wrapped onto the convolution length.
    kernel_hat: Vec<Complex64>,
    forward: Box<Plan>,
    backward: Box<Plan>,
}

impl Bluestein {
    fn new(p: usize, sign: f64) -> Self {
        let conv = (2 * p - 1).next_power_of_two();
        let two_p = 2 * p as i128;
        let chirp: Vec<Complex64> = (0..p)
            .map(|j| {
                let j = j as i128;
                unit_root(sign as i128 * ((j * j) % two_p), two_p)
            })
            .collect();
        let forward = Box::new(Plan::new(conv, 1.0));
        let backward = Box::new(Plan::new(conv, -1.0));
        let mut kernel = vec![Complex64::new(0.0, 0.0); conv];
        kernel[0] = chirp[0].conj();
        for j in 1..p {
            kernel[j] = chirp[j].conj();
            kernel[conv - j] = chirp[j].conj();
        }
        let kernel_hat = forward.run(&kernel);
        Self { len: p, chirp, kernel_hat, forward, backward }
    }

    fn run(&self, data: &mut [Complex64]) {
        let conv = self.kernel_hat.len();
        let mut a = vec![Complex64::new(0.0, 0.0); conv];
        for (j, (dst, &x)) in a.iter_mut().zip(data.iter()).enumerate() {
            *dst = x * self.chirp[j];
        }
        let mut a_hat = self.forward.run(&a);
        for (v, k) in a_hat.iter_mut().zip(&self.kernel_hat) {
            *v *= k;
        }
        let conv_out = self.backward.run(&a_hat);
        let scale = 1.0 / conv as f64;
        for (k, out) in data.iter_mut().enumerate().take(self.len) {
            *out = conv_out[k] * self.chirp[k] * scale;
        }
    }
}

/// A reusable transform of fixed length and sign.
#[derive(Debug)]
pub struct Plan {
    len: usize,
    sign: f64,
    factors: Vec<usize>,
    /// `e(σ·j/N)` for `0 ≤ j < N`.
    roots: Vec<Complex64>,
    bluestein: HashMap<usize, Bluestein>,
}

impl Plan {
    /// Plans `X[j] = Σ_k e(sign·jk/len)·x[k]` with `sign = ±1`.
    pub fn new(len: usize, sign: f64) -> Self {
        let factors = if len > 1 { factorize_length(len) } else { Vec::new() };
        let s = if sign >= 0.0 { 1 } else { -1 };
        let roots = (0..len).map(|j| unit_root(s * j as i128, len as i128)).collect();
        let mut bluestein = HashMap::new();
        for &p in &factors {
            if p > NAIVE_RADIX_MAX {
                bluestein.entry(p).or_insert_with(|| Bluestein::new(p, s as f64));
            }
        }
        Self { len, sign: s as f64, factors, roots, bluestein }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sign(&self) -> f64 {
        self.sign
    }

    /// Transforms `input` (of the planned length) into a new buffer.
    pub fn run(&self, input: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(input.len(), self.len, "input length differs from plan");
        let mut out = vec![Complex64::new(0.0, 0.0); self.len];
        if self.len == 0 {
            return out;
        }
        let mut scratch = Vec::new();
        self.recurse(input, 0, 1, &self.factors, &mut out, &mut scratch);
        out
    }

    fn recurse(
        &self,
        input: &[Complex64],
        offset: usize,
        stride: usize,
        factors: &[usize],
        out: &mut [Complex64],
        scratch: &mut Vec<Complex64>,
    ) {
        let n = out.len();
        if n == 1 {
            out[0] = input[offset];
            return;
        }
        let p = factors[0];
        let m = n / p;
        for r in 0..p {
            self.recurse(
                input,
                offset + r * stride,
                stride * p,
                &factors[1..],
                &mut out[r * m..(r + 1) * m],
                scratch,
            );
        }
        // W_n^j = roots[j·step]
        let step = self.len / n;
        scratch.resize(p, Complex64::new(0.0, 0.0));
        let mut column = vec![Complex64::new(0.0, 0.0); p];
        for k1 in 0..m {
            for r in 0..p {
                let tw = self.roots[(r * k1 % n) * step];
                column[r] = out[r * m + k1] * tw;
            }
            self.small_dft(&mut column, scratch, n, step);
            for (k2, &v) in column.iter().enumerate() {
                out[k1 + m * k2] = v;
            }
        }
    }

    /// In-place `p`-point transform of `column`, where `p` divides the
    /// current length `n` and `W_p^j = roots[(j·n/p mod n)·step]`.
    fn small_dft(&self, column: &mut [Complex64], scratch: &mut [Complex64], n: usize, step: usize) {
        let p = column.len();
        if let Some(b) = self.bluestein.get(&p) {
            b.run(column);
            return;
        }
        let stride = (n / p) * step;
        match p {
            2 => {
                let (a, b) = (column[0], column[1]);
                column[0] = a + b;
                column[1] = a - b;
            }
            4 => {
                let i_sigma = Complex64::new(0.0, self.sign);
                let (a, b, c, d) = (column[0], column[1], column[2], column[3]);
                let s0 = a + c;
                let s1 = a - c;
                let s2 = b + d;
                let s3 = (b - d) * i_sigma;
                column[0] = s0 + s2;
                column[1] = s1 + s3;
                column[2] = s0 - s2;
                column[3] = s1 - s3;
            }
            _ => {
                for (k, dst) in scratch.iter_mut().enumerate().take(p) {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (r, &x) in column.iter().enumerate() {
                        acc += x * self.roots[(r * k % p) * stride];
                    }
                    *dst = acc;
                }
                column.copy_from_slice(&scratch[..p]);
            }
        }
    }
}
