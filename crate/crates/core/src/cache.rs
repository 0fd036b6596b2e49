//! Precomputed special-function tables indexed by `k` (argument `a_k/q`),
//! their text format on disk, chunk merging and closed-form checksums.
//!
//! File layout:
//!
//! ```text
//! EKCACHE 1 q=<q> g=<g> tag=<tag> k0=<k0> k1=<k1> digits=<d>
//! <k> <value>            one line per k in [k0, k1)
//! SUM <partial_sum> COUNT <n>
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::multgroup::PrimeContext;
use crate::specfun::{self, EvalConfig, EULER_GAMMA, ZETA_SECOND_DERIV_AT_0};
use crate::sum::Neumaier;

const MAGIC: &str = "EKCACHE";
const VERSION: &str = "1";
pub const DEFAULT_DIGITS: u32 = 19;
const MAX_DIGITS: u32 = 40;

/// Which function a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionTag {
    /// `log Γ(a_k/q)`, `0 ≤ k < q−1`.
    LogGamma,
    /// `S(a_k/q) + S(1 − a_k/q)`, `0 ≤ k < (q−1)/2`.
    SPair,
    /// `T(a_k/q)`, `0 ≤ k < q−1`.
    T,
    /// `ψ(a_k/q)`, `0 ≤ k < q−1`.
    Psi,
}

impl FunctionTag {
    pub const ALL: [FunctionTag; 4] =
        [FunctionTag::LogGamma, FunctionTag::SPair, FunctionTag::T, FunctionTag::Psi];

    pub fn as_str(self) -> &'static str {
        match self {
            FunctionTag::LogGamma => "LOGGAMMA",
            FunctionTag::SPair => "S_PAIR",
            FunctionTag::T => "T",
            FunctionTag::Psi => "PSI",
        }
    }

    /// Number of entries in a complete table for `q`.
    pub fn full_len(self, q: u64) -> usize {
        match self {
            FunctionTag::SPair => ((q - 1) / 2) as usize,
            _ => (q - 1) as usize,
        }
    }

    /// The tabulated value at index `k`.
    pub fn eval(self, ctx: &PrimeContext, k: usize, cfg: &EvalConfig) -> Result<f64> {
        match self {
            FunctionTag::LogGamma => specfun::log_gamma(ctx.x(k)),
            FunctionTag::SPair => specfun::s_pair_c(ctx.reflected_x(k), cfg),
            FunctionTag::T => specfun::t_function(ctx.x(k), cfg),
            FunctionTag::Psi => specfun::digamma(ctx.x(k)),
        }
    }

    /// Closed form of the sum over a complete table, i.e. over all
    /// `a = 1..q−1` (each reflection pair once for `S_PAIR`).
    pub fn closed_form_sum(self, q: u64) -> f64 {
        let qf = q as f64;
        let lq = qf.ln();
        let l2pi = (2.0 * PI).ln();
        match self {
            FunctionTag::LogGamma => 0.5 * (qf - 1.0) * l2pi - 0.5 * lq,
            FunctionTag::SPair => -ZETA_SECOND_DERIV_AT_0 * (qf - 1.0) - lq * l2pi - 0.5 * lq * lq,
            FunctionTag::T => 0.5 * qf * lq * lq + EULER_GAMMA * qf * lq,
            FunctionTag::Psi => -(qf - 1.0) * EULER_GAMMA - qf * lq,
        }
    }
}

impl fmt::Display for FunctionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FunctionTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::OutOfRange(format!("unknown function tag {s:?}")))
    }
}

/// A contiguous slice `[k_lo, k_hi)` of a tabulated function.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    q: u64,
    g: u64,
    tag: FunctionTag,
    k_lo: usize,
    k_hi: usize,
    values: Vec<f64>,
    digits: u32,
    partial_sum: f64,
}

impl ValueTable {
    fn from_parts(
        q: u64,
        g: u64,
        tag: FunctionTag,
        k_lo: usize,
        values: Vec<f64>,
        digits: u32,
    ) -> Self {
        let partial_sum = values.iter().copied().sum::<Neumaier>().value();
        let k_hi = k_lo + values.len();
        Self { q, g, tag, k_lo, k_hi, values, digits, partial_sum }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn tag(&self) -> FunctionTag {
        self.tag
    }

    pub fn k_range(&self) -> Range<usize> {
        self.k_lo..self.k_hi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn partial_sum(&self) -> f64 {
        self.partial_sum
    }

    pub fn is_full(&self) -> bool {
        self.k_lo == 0 && self.k_hi == self.tag.full_len(self.q)
    }

    /// Sets the number of significant digits written by [`save`].
    pub fn with_digits(mut self, digits: u32) -> Result<Self> {
        check_digits(digits)?;
        self.digits = digits;
        Ok(self)
    }

    /// `|Σ values − closed form|`; only defined for complete tables.
    pub fn checksum_residual(&self) -> Result<f64> {
        if !self.is_full() {
            return Err(Error::IncompleteTable { q: self.q, tag: self.tag.to_string() });
        }
        Ok((self.partial_sum - self.tag.closed_form_sum(self.q)).abs())
    }

    /// Residual allowed for a complete table whose entries each carry an
    /// error of `target·max(1, |v|)`, plus the rounding of the decimal
    /// representation at `digits` significant digits.
    pub fn checksum_tolerance(&self, target: f64) -> f64 {
        let scale: f64 = self.values.iter().map(|v| v.abs().max(1.0)).sum();
        let magnitude: f64 = self.values.iter().map(|v| v.abs()).sum();
        10.0 * target * scale + magnitude * 10f64.powi(1 - self.digits as i32)
    }

    /// Fails with [`Error::ChecksumMismatch`] when a complete table violates
    /// its closed form; partial tables pass unchecked.
    pub fn verify_checksum(&self, target: f64) -> Result<()> {
        if !self.is_full() {
            return Ok(());
        }
        let residual = self.checksum_residual()?;
        let tolerance = self.checksum_tolerance(target);
        if residual > tolerance {
            return Err(Error::ChecksumMismatch { residual, tolerance });
        }
        Ok(())
    }

    /// Checks that this is the complete `tag` table belonging to `ctx`.
    pub fn require_full_for(&self, ctx: &PrimeContext, tag: FunctionTag) -> Result<()> {
        if self.q != ctx.q() {
            return Err(Error::Mismatch { field: "q" });
        }
        if self.g != ctx.g() {
            return Err(Error::Mismatch { field: "g" });
        }
        if self.tag != tag {
            return Err(Error::Mismatch { field: "tag" });
        }
        if !self.is_full() {
            return Err(Error::IncompleteTable { q: self.q, tag: self.tag.to_string() });
        }
        Ok(())
    }
}

fn check_digits(digits: u32) -> Result<()> {
    if (1..=MAX_DIGITS).contains(&digits) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("digits must lie in 1..={MAX_DIGITS}, got {digits}")))
    }
}

/// Evaluates `tag` at `k ∈ k_range`, in parallel on the current rayon pool.
/// The result does not depend on the number of workers.
pub fn precompute(
    ctx: &PrimeContext,
    tag: FunctionTag,
    k_range: Range<usize>,
    cfg: &EvalConfig,
) -> Result<ValueTable> {
    cfg.validate()?;
    let full = tag.full_len(ctx.q());
    if k_range.start > k_range.end || k_range.end > full {
        return Err(Error::OutOfRange(format!(
            "k range {}..{} outside 0..{full} for {tag}",
            k_range.start, k_range.end
        )));
    }
    let values = k_range
        .clone()
        .into_par_iter()
        .map(|k| tag.eval(ctx, k, cfg))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ValueTable::from_parts(ctx.q(), ctx.g(), tag, k_range.start, values, DEFAULT_DIGITS))
}

/// Complete table for `tag`.
pub fn precompute_full(ctx: &PrimeContext, tag: FunctionTag, cfg: &EvalConfig) -> Result<ValueTable> {
    precompute(ctx, tag, 0..tag.full_len(ctx.q()), cfg)
}

/// Joins contiguous chunks into one table. Chunks may come in any order.
pub fn merge(mut parts: Vec<ValueTable>) -> Result<ValueTable> {
    let first = parts
        .first()
        .ok_or_else(|| Error::OutOfRange("merge needs at least one table".into()))?;
    let (q, g, tag, digits) = (first.q, first.g, first.tag, first.digits);
    for p in &parts {
        if p.q != q {
            return Err(Error::Mismatch { field: "q" });
        }
        if p.g != g {
            return Err(Error::Mismatch { field: "g" });
        }
        if p.tag != tag {
            return Err(Error::Mismatch { field: "tag" });
        }
        if p.digits != digits {
            return Err(Error::Mismatch { field: "digits" });
        }
    }
    parts.sort_by_key(|p| (p.k_lo, p.k_hi));
    let k_lo = parts[0].k_lo;
    let mut expected = k_lo;
    let mut values = Vec::new();
    let mut sum = Neumaier::new();
    for p in &parts {
        if p.k_lo > expected {
            return Err(Error::Gap { at: expected as u64 });
        }
        if p.k_lo < expected {
            return Err(Error::Overlap { at: p.k_lo as u64 });
        }
        values.extend_from_slice(&p.values);
        sum.add(p.partial_sum);
        expected = p.k_hi;
    }
    Ok(ValueTable {
        q,
        g,
        tag,
        k_lo,
        k_hi: expected,
        values,
        digits,
        partial_sum: sum.value(),
    })
}

/// `<tag>_q<q>_part<i>.ekc`
pub fn file_name(tag: FunctionTag, q: u64, part: usize) -> String {
    format!("{tag}_q{q}_part{part}.ekc")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn fmt_value(v: f64, digits: u32) -> String {
    format!("{:.*e}", digits as usize - 1, v)
}

/// Serialises `table` to the text format.
pub fn to_text(table: &ValueTable) -> String {
    let mut out = String::with_capacity(32 * (table.values.len() + 2));
    out.push_str(&format!(
        "{MAGIC} {VERSION} q={} g={} tag={} k0={} k1={} digits={}\n",
        table.q, table.g, table.tag, table.k_lo, table.k_hi, table.digits
    ));
    for (i, v) in table.values.iter().enumerate() {
        out.push_str(&format!("{} {}\n", table.k_lo + i, fmt_value(*v, table.digits)));
    }
    out.push_str(&format!(
        "SUM {} COUNT {}\n",
        fmt_value(table.partial_sum, table.digits),
        table.values.len()
    ));
    out
}

/// Writes `table` to `path`.
pub fn save(table: &ValueTable, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    w.write_all(to_text(table).as_bytes()).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

fn header_field<'a>(token: Option<&'a str>, key: &str, line: usize) -> Result<&'a str> {
    let token = token.ok_or_else(|| Error::Format { line, msg: format!("missing {key}") })?;
    token
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::Format { line, msg: format!("expected {key}=..., found {token:?}") })
}

fn parse_num<T: FromStr>(s: &str, what: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| Error::Format { line, msg: format!("bad {what} {s:?}") })
}

/// Parses the text format. Verifies the trailer and, for complete tables,
/// the closed-form checksum at the default accuracy target.
pub fn from_text(text: &str) -> Result<ValueTable> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (ln, header) = lines.next().ok_or(Error::Format { line: 1, msg: "empty file".into() })?;
    let mut tok = header.split_whitespace();
    if tok.next() != Some(MAGIC) {
        return Err(Error::Format { line: ln, msg: format!("missing {MAGIC} header") });
    }
    match tok.next() {
        Some(VERSION) => {}
        Some(v) => return Err(Error::FormatVersion(v.to_string())),
        None => return Err(Error::Format { line: ln, msg: "missing version".into() }),
    }
    let q: u64 = parse_num(header_field(tok.next(), "q", ln)?, "q", ln)?;
    let g: u64 = parse_num(header_field(tok.next(), "g", ln)?, "g", ln)?;
    let tag: FunctionTag = header_field(tok.next(), "tag", ln)?
        .parse()
        .map_err(|e: Error| Error::Format { line: ln, msg: e.to_string() })?;
    let k0: usize = parse_num(header_field(tok.next(), "k0", ln)?, "k0", ln)?;
    let k1: usize = parse_num(header_field(tok.next(), "k1", ln)?, "k1", ln)?;
    let digits: u32 = parse_num(header_field(tok.next(), "digits", ln)?, "digits", ln)?;
    if tok.next().is_some() {
        return Err(Error::Format { line: ln, msg: "trailing header fields".into() });
    }
    check_digits(digits).map_err(|e| Error::Format { line: ln, msg: e.to_string() })?;
    if q < 3 || k0 > k1 || k1 > tag.full_len(q) {
        return Err(Error::Format { line: ln, msg: format!("invalid range {k0}..{k1} for q={q}") });
    }

    let mut values = Vec::with_capacity(k1 - k0);
    let mut trailer = None;
    for (ln, line) in lines.by_ref() {
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("SUM") => {
                let sum: f64 = parse_num(tok.next().unwrap_or(""), "SUM", ln)?;
                if tok.next() != Some("COUNT") {
                    return Err(Error::Format { line: ln, msg: "expected COUNT".into() });
                }
                let count: usize = parse_num(tok.next().unwrap_or(""), "COUNT", ln)?;
                trailer = Some((ln, sum, count));
                break;
            }
            Some(k) => {
                let k: usize = parse_num(k, "index", ln)?;
                if k != k0 + values.len() {
                    return Err(Error::Format {
                        line: ln,
                        msg: format!("expected index {}, found {k}", k0 + values.len()),
                    });
                }
                let v: f64 = parse_num(tok.next().unwrap_or(""), "value", ln)?;
                if !v.is_finite() {
                    return Err(Error::Format { line: ln, msg: "non-finite value".into() });
                }
                values.push(v);
            }
            None => return Err(Error::Format { line: ln, msg: "blank line".into() }),
        }
    }
    let (tln, sum, count) =
        trailer.ok_or(Error::Format { line: 0, msg: "missing SUM/COUNT trailer".into() })?;
    if let Some((ln, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::Format { line: ln, msg: "content after trailer".into() });
    }
    if count != values.len() || count != k1 - k0 {
        return Err(Error::Format {
            line: tln,
            msg: format!("COUNT {count} but {} values for range {k0}..{k1}", values.len()),
        });
    }
    let table = ValueTable::from_parts(q, g, tag, k0, values, digits);
    let magnitude: f64 = table.values.iter().map(|v| v.abs()).sum();
    let sum_tol = magnitude * 10f64.powi(1 - digits as i32) + 1e-300;
    if (table.partial_sum - sum).abs() > sum_tol {
        return Err(Error::ChecksumMismatch {
            residual: (table.partial_sum - sum).abs(),
            tolerance: sum_tol,
        });
    }
    table.verify_checksum(EvalConfig::default().target_abs_error)?;
    Ok(table)
}

/// Reads a table written by [`save`].
pub fn load(path: &Path) -> Result<ValueTable> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    from_text(&text)
}

/// All chunk files for `(tag, q)` in `dir`, ordered by part number.
pub fn part_files(dir: &Path, tag: FunctionTag, q: u64) -> Result<Vec<PathBuf>> {
    let prefix = format!("{tag}_q{q}_part");
    let mut found = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let entry = entry.map_err(io_err(dir))?;
        let name = entry.file_name();
        let Some(name) = name.to_str() else { continue };
        if let Some(part) = name.strip_prefix(&prefix).and_then(|r| r.strip_suffix(".ekc")) {
            if let Ok(i) = part.parse::<usize>() {
                found.push((i, entry.path()));
            }
        }
    }
    found.sort();
    Ok(found.into_iter().map(|(_, p)| p).collect())
}

/// Loads and merges every chunk for `(tag, q)` found in `dir`; `None` when
/// there is none.
pub fn load_dir(dir: &Path, tag: FunctionTag, q: u64) -> Result<Option<ValueTable>> {
    let files = part_files(dir, tag, q)?;
    if files.is_empty() {
        return Ok(None);
    }
    let parts = files.iter().map(|p| load(p)).collect::<Result<Vec<_>>>()?;
    let merged = merge(parts)?;
    merged.verify_checksum(EvalConfig::default().target_abs_error)?;
    Ok(Some(merged))
}
