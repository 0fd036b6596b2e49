//! Euler-Kronecker constants of prime cyclotomic fields and their real
//! subfields, and the largest `|L'/L(1,χ)|`, assembled from FFTs of
//! special-function tables.
//!
//! Characters are labelled `χ_j` with `χ_j(g^k) = e(jk/(q−1))`, `g` the
//! smallest primitive root. `χ_j` is even iff `j` is even. With the tables
//! ordered by `k`, the conjugate sums `Σ_a χ̄_j(a)f(a/q)` are bin `j` of the
//! `σ = −1` transform, and the plain sums `Σ_a χ_j(a)f(a/q)` are bin `j` of
//! the `σ = +1` transform.
//!
//! Two routes to `L'/L(1,χ)`:
//!
//! * `S`: odd `χ` give `γ + log 2π + Σχ̄ logΓ / B_{1,χ̄}`, even `χ ≠ χ₀` give
//!   `γ + log 2π − ½ Σχ̄ S / Σχ̄ logΓ`.
//! * `T`: every `χ ≠ χ₀` gives `−log q − Σχ T / Σχ ψ`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::cache::{self, FunctionTag, ValueTable};
use crate::error::{Error, Result};
use crate::fft::{self, Complex64, Sign, Spectrum};
use crate::multgroup::PrimeContext;
use crate::specfun::{EvalConfig, EULER_GAMMA};
use crate::sum::Neumaier;

/// Largest tolerated imaginary part of an assembled real quantity, unless
/// the rounding bound `4ε·Σ|v|` of the sum itself is larger.
pub const IMAGINARY_LIMIT: f64 = 1e-10;
/// Smallest tolerated modulus of a divisor in the character sums.
pub const DIVISOR_FLOOR: f64 = 1e-12;

fn log_2pi() -> f64 {
    (2.0 * PI).ln()
}

/// Which pipeline produces the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    S,
    T,
    Both,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::S => "s",
            Method::T => "t",
            Method::Both => "both",
        }
    }

    /// Tables the method reads.
    pub fn tags(self) -> &'static [FunctionTag] {
        match self {
            Method::S => &[FunctionTag::LogGamma, FunctionTag::SPair],
            Method::T => &[FunctionTag::T, FunctionTag::Psi],
            Method::Both => &FunctionTag::ALL,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s" => Ok(Method::S),
            "t" => Ok(Method::T),
            "both" => Ok(Method::Both),
            _ => Err(Error::OutOfRange(format!("unknown method {s:?}"))),
        }
    }
}

/// The complete tables a computation reads. Absent tables are simply not
/// needed by the chosen method.
#[derive(Debug, Clone, Default)]
pub struct Caches {
    pub log_gamma: Option<ValueTable>,
    pub s_pair: Option<ValueTable>,
    pub t: Option<ValueTable>,
    pub psi: Option<ValueTable>,
}

impl Caches {
    /// Evaluates every table `method` needs.
    pub fn compute(ctx: &PrimeContext, method: Method, cfg: &EvalConfig) -> Result<Self> {
        let mut caches = Caches::default();
        for &tag in method.tags() {
            caches.insert(cache::precompute_full(ctx, tag, cfg)?);
        }
        Ok(caches)
    }

    /// Stores `table` in the slot for its tag, returning the previous one.
    pub fn insert(&mut self, table: ValueTable) -> Option<ValueTable> {
        let slot = self.slot_mut(table.tag());
        slot.replace(table)
    }

    pub fn get(&self, tag: FunctionTag) -> Option<&ValueTable> {
        match tag {
            FunctionTag::LogGamma => self.log_gamma.as_ref(),
            FunctionTag::SPair => self.s_pair.as_ref(),
            FunctionTag::T => self.t.as_ref(),
            FunctionTag::Psi => self.psi.as_ref(),
        }
    }

    fn slot_mut(&mut self, tag: FunctionTag) -> &mut Option<ValueTable> {
        match tag {
            FunctionTag::LogGamma => &mut self.log_gamma,
            FunctionTag::SPair => &mut self.s_pair,
            FunctionTag::T => &mut self.t,
            FunctionTag::Psi => &mut self.psi,
        }
    }

    /// The complete `tag` table for `ctx`, or an error naming what is wrong.
    pub fn require(&self, ctx: &PrimeContext, tag: FunctionTag) -> Result<&ValueTable> {
        let table = self
            .get(tag)
            .ok_or_else(|| Error::IncompleteTable { q: ctx.q(), tag: tag.to_string() })?;
        table.require_full_for(ctx, tag)?;
        Ok(table)
    }
}

/// `|observed sum − closed form|` for a complete table belonging to `ctx`.
pub fn checksum(ctx: &PrimeContext, table: &ValueTable) -> Result<f64> {
    table.require_full_for(ctx, table.tag())?;
    table.checksum_residual()
}

/// The three transforms of the `S` route.
#[derive(Debug, Clone)]
pub struct CharacterSums {
    /// `Σχ̄_j logΓ`, full length `q−1`.
    log_gamma_spec: Spectrum,
    /// `Σχ̄_{2t} S` at bin `t`, from the pair table.
    s_even_spec: Spectrum,
    /// `B_{1,χ̄_{2t+1}}` at bin `t`.
    bern_odd_spec: Spectrum,
}

impl CharacterSums {
    pub fn new(ctx: &PrimeContext, log_gamma: &ValueTable, s_pair: &ValueTable) -> Result<Self> {
        log_gamma.require_full_for(ctx, FunctionTag::LogGamma)?;
        s_pair.require_full_for(ctx, FunctionTag::SPair)?;
        let ((log_gamma_spec, s_even_spec), bern_odd_spec) = rayon::join(
            || {
                rayon::join(
                    || fft::dft_real(log_gamma.values(), Sign::Minus),
                    || fft::dft_real(s_pair.values(), Sign::Minus).mark_decimated(),
                )
            },
            || bernoulli_odd_spectrum(ctx),
        );
        let bern_odd_spec = bern_odd_spec?;
        Ok(Self { log_gamma_spec, s_even_spec, bern_odd_spec })
    }

    pub fn log_gamma_spec(&self) -> &Spectrum {
        &self.log_gamma_spec
    }

    pub fn s_even_spec(&self) -> &Spectrum {
        &self.s_even_spec
    }

    pub fn bern_odd_spec(&self) -> &Spectrum {
        &self.bern_odd_spec
    }

    /// `L'/L(1, χ_{2t})` for `1 ≤ t < m`.
    pub fn even_value(&self, t: usize) -> Result<Complex64> {
        let j = 2 * t;
        let lg = self.log_gamma_spec[j];
        if lg.norm() < DIVISOR_FLOOR {
            return Err(Error::NearZeroDivisor { j, value: lg.norm() });
        }
        Ok(EULER_GAMMA + log_2pi() - 0.5 * self.s_even_spec[t] / lg)
    }

    /// `L'/L(1, χ_{2t+1})` from the odd bins of the full logΓ spectrum.
    pub fn odd_value(&self, t: usize) -> Result<Complex64> {
        odd_value(2 * t + 1, self.log_gamma_spec[2 * t + 1], self.bern_odd_spec[t])
    }
}

fn odd_value(j: usize, lg: Complex64, bern: Complex64) -> Result<Complex64> {
    if bern.norm() < DIVISOR_FLOOR {
        return Err(Error::NearZeroDivisor { j, value: bern.norm() });
    }
    Ok(EULER_GAMMA + log_2pi() + lg / bern)
}

/// `B_{1,χ̄}` for the odd characters, bin `t` holding `χ_{2t+1}`: the
/// `c`-branch transform of `f(x) = x`.
pub fn bernoulli_odd_spectrum(ctx: &PrimeContext) -> Result<Spectrum> {
    let x: Vec<f64> = (0..ctx.order()).map(|k| ctx.x(k)).collect();
    let pair = fft::dif_split(&x, Sign::Minus)?;
    Ok(fft::dft_odd_bins(&pair, Sign::Minus))
}

/// Odd-character values `L'/L(1, χ_{2t+1})` computed from the half-length
/// `c`-branch of the logΓ table.
fn odd_values_decimated(ctx: &PrimeContext, log_gamma: &ValueTable) -> Result<Vec<Complex64>> {
    log_gamma.require_full_for(ctx, FunctionTag::LogGamma)?;
    let (lg, bern) = rayon::join(
        || fft::dif_split(log_gamma.values(), Sign::Minus).map(|p| fft::dft_odd_bins(&p, Sign::Minus)),
        || bernoulli_odd_spectrum(ctx),
    );
    let (lg, bern) = (lg?, bern?);
    (0..ctx.m()).map(|t| odd_value(2 * t + 1, lg[t], bern[t])).collect()
}

/// Real part of `Σ values`, failing if the imaginary part exceeds
/// [`IMAGINARY_LIMIT`] (scaled up for very long sums). Returns
/// `(real, |imag|)`.
fn real_sum<'a>(values: impl IntoIterator<Item = &'a Complex64>) -> Result<(f64, f64)> {
    let (mut re, mut im) = (Neumaier::new(), Neumaier::new());
    let mut magnitude = 0.0;
    for v in values {
        re.add(v.re);
        im.add(v.im);
        magnitude += v.norm();
    }
    let imag = im.value().abs();
    let limit = IMAGINARY_LIMIT.max(4.0 * f64::EPSILON * magnitude);
    if imag > limit {
        return Err(Error::ImaginaryResidue { value: imag, limit });
    }
    Ok((re.value(), imag))
}

/// `Σ_{χ odd} L'/L(1,χ) = 𝔊_q − 𝔊_q⁺`, from half-length transforms of the
/// logΓ table.
pub fn compute_odd_sum(ctx: &PrimeContext, log_gamma: &ValueTable) -> Result<f64> {
    Ok(real_sum(&odd_values_decimated(ctx, log_gamma)?)?.0)
}

/// `𝔊_q⁺ = γ + Σ_{χ even, χ ≠ χ₀} L'/L(1,χ)`.
pub fn compute_even_part(ctx: &PrimeContext, caches: &Caches) -> Result<f64> {
    let sums = CharacterSums::new(
        ctx,
        caches.require(ctx, FunctionTag::LogGamma)?,
        caches.require(ctx, FunctionTag::SPair)?,
    )?;
    let even = (1..ctx.m()).map(|t| sums.even_value(t)).collect::<Result<Vec<_>>>()?;
    Ok(EULER_GAMMA + real_sum(&even)?.0)
}

/// `(M_q^odd, M_q^even)`, the largest `|L'/L(1,χ)|` over odd and over
/// nontrivial even characters. `M_q^even` is 0 when there is no nontrivial
/// even character (`q = 3`).
pub fn compute_mq(ctx: &PrimeContext, caches: &Caches) -> Result<(f64, f64)> {
    let values = log_derivatives_s(ctx, caches)?;
    Ok(max_moduli(&values))
}

fn max_moduli(values: &[Complex64]) -> (f64, f64) {
    let (mut odd, mut even) = (0.0f64, 0.0f64);
    for (j, v) in values.iter().enumerate().skip(1) {
        if j % 2 == 1 {
            odd = odd.max(v.norm());
        } else {
            even = even.max(v.norm());
        }
    }
    (odd, even)
}

/// `L'/L(1, χ_j)` for `0 ≤ j < q−1` via the `S` route. Entry 0 (the trivial
/// character) is zero. Odd entries come from the half-length branch.
pub fn log_derivatives_s(ctx: &PrimeContext, caches: &Caches) -> Result<Vec<Complex64>> {
    let log_gamma = caches.require(ctx, FunctionTag::LogGamma)?;
    let sums = CharacterSums::new(ctx, log_gamma, caches.require(ctx, FunctionTag::SPair)?)?;
    let odd = odd_values_decimated(ctx, log_gamma)?;
    let mut out = vec![Complex64::new(0.0, 0.0); ctx.order()];
    for t in 0..ctx.m() {
        if t > 0 {
            out[2 * t] = sums.even_value(t)?;
        }
        out[2 * t + 1] = odd[t];
    }
    Ok(out)
}

/// `L'/L(1, χ_j)` for `0 ≤ j < q−1` via the `T` route; entry 0 is zero.
pub fn log_derivatives_t(ctx: &PrimeContext, caches: &Caches) -> Result<Vec<Complex64>> {
    let t = caches.require(ctx, FunctionTag::T)?;
    let psi = caches.require(ctx, FunctionTag::Psi)?;
    let (t_spec, psi_spec) = rayon::join(
        || fft::dft_real(t.values(), Sign::Plus),
        || fft::dft_real(psi.values(), Sign::Plus),
    );
    let lq = (ctx.q() as f64).ln();
    let mut out = vec![Complex64::new(0.0, 0.0); ctx.order()];
    for j in 1..ctx.order() {
        let d = psi_spec[j];
        if d.norm() < DIVISOR_FLOOR {
            return Err(Error::NearZeroDivisor { j, value: d.norm() });
        }
        out[j] = -lq - t_spec[j] / d;
    }
    Ok(out)
}

/// Everything computed for one prime.
#[derive(Debug, Clone, PartialEq)]
pub struct EKResult {
    pub q: u64,
    /// 𝔊_q.
    pub ek: f64,
    /// 𝔊_q⁺.
    pub ek_plus: f64,
    /// 𝔊_q − 𝔊_q⁺, the odd-character sum.
    pub ek_diff: f64,
    pub mq_odd: f64,
    pub mq_even: f64,
    pub mq: f64,
    /// 𝔊_q / log q.
    pub ek_norm: f64,
    /// 𝔊_q⁺ / log q.
    pub ek_plus_norm: f64,
    /// M_q / log log q.
    pub mq_norm: f64,
    pub method: Method,
    /// `|𝔊_q^S − 𝔊_q^T|` when both routes ran.
    pub method_discrepancy: Option<f64>,
    /// Largest imaginary part dropped from an assembled sum.
    pub imaginary_residue: f64,
    /// For the `S` route, the disagreement between the odd-character sum
    /// from the full-length logΓ transform and from the half-length branch.
    /// For `T`, zero.
    pub identity_residual: f64,
}

struct Assembled {
    ek: f64,
    ek_plus: f64,
    ek_diff: f64,
    mq_odd: f64,
    mq_even: f64,
    imaginary_residue: f64,
    identity_residual: f64,
}

fn assemble_s(ctx: &PrimeContext, caches: &Caches) -> Result<Assembled> {
    let log_gamma = caches.require(ctx, FunctionTag::LogGamma)?;
    let sums = CharacterSums::new(ctx, log_gamma, caches.require(ctx, FunctionTag::SPair)?)?;
    let even = (1..ctx.m()).map(|t| sums.even_value(t)).collect::<Result<Vec<_>>>()?;
    let odd = odd_values_decimated(ctx, log_gamma)?;
    let odd_full = (0..ctx.m()).map(|t| sums.odd_value(t)).collect::<Result<Vec<_>>>()?;

    let (even_sum, im_even) = real_sum(&even)?;
    let (odd_sum, im_odd) = real_sum(&odd)?;
    let (odd_full_sum, im_full) = real_sum(&odd_full)?;
    let ek_plus = EULER_GAMMA + even_sum;
    let ek = ek_plus + odd_sum;

    let mq_odd = odd.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mq_even = even.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(Assembled {
        ek,
        ek_plus,
        ek_diff: odd_sum,
        mq_odd,
        mq_even,
        imaginary_residue: im_even.max(im_odd).max(im_full),
        identity_residual: (odd_full_sum - odd_sum).abs(),
    })
}

fn assemble_t(ctx: &PrimeContext, caches: &Caches) -> Result<Assembled> {
    let values = log_derivatives_t(ctx, caches)?;
    let odd: Vec<Complex64> = values.iter().skip(1).step_by(2).copied().collect();
    let even: Vec<Complex64> = values.iter().skip(2).step_by(2).copied().collect();
    let (odd_sum, im_odd) = real_sum(&odd)?;
    let (even_sum, im_even) = real_sum(&even)?;
    let ek_plus = EULER_GAMMA + even_sum;
    let (mq_odd, mq_even) = max_moduli(&values);
    Ok(Assembled {
        ek: ek_plus + odd_sum,
        ek_plus,
        ek_diff: odd_sum,
        mq_odd,
        mq_even,
        imaginary_residue: im_odd.max(im_even),
        identity_residual: 0.0,
    })
}

/// Runs the chosen pipeline(s). With [`Method::Both`] the reported values
/// come from the `S` route and the `T` route supplies the discrepancy.
pub fn compute_ek(ctx: &PrimeContext, caches: &Caches, method: Method) -> Result<EKResult> {
    let (main, discrepancy) = match method {
        Method::S => (assemble_s(ctx, caches)?, None),
        Method::T => (assemble_t(ctx, caches)?, None),
        Method::Both => {
            let (s, t) = rayon::join(|| assemble_s(ctx, caches), || assemble_t(ctx, caches));
            let (s, t) = (s?, t?);
            let d = (s.ek - t.ek).abs();
            (s, Some(d))
        }
    };
    let lq = (ctx.q() as f64).ln();
    let mq = main.mq_odd.max(main.mq_even);
    Ok(EKResult {
        q: ctx.q(),
        ek: main.ek,
        ek_plus: main.ek_plus,
        ek_diff: main.ek_diff,
        mq_odd: main.mq_odd,
        mq_even: main.mq_even,
        mq,
        ek_norm: main.ek / lq,
        ek_plus_norm: main.ek_plus / lq,
        mq_norm: mq / lq.ln(),
        method,
        method_discrepancy: discrepancy,
        imaginary_residue: main.imaginary_residue,
        identity_residual: main.identity_residual,
    })
}

/// Builds the context, evaluates the tables and runs [`compute_ek`].
pub fn compute(q: u64, method: Method, cfg: &EvalConfig) -> Result<EKResult> {
    let ctx = crate::multgroup::build_context(q)?;
    let caches = Caches::compute(&ctx, method, cfg)?;
    compute_ek(&ctx, &caches, method)
}
