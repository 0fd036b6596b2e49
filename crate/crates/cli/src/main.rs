//! `ek`: Euler-Kronecker constants of prime cyclotomic fields from the
//! command line.

mod scan;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ek_core::cache::{self, FunctionTag};
use ek_core::ek::{self, Caches, Method};
use ek_core::multgroup::build_context;
use ek_core::{offsets, specfun, stieltjes, EvalConfig};

use scan::ScanRow;

/// Marks an error as caused by the invocation rather than the computation.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Parser)]
#[command(name = "ek", version, about = "Euler-Kronecker constants of prime cyclotomic fields")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    S,
    T,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::S => Method::S,
            MethodArg::T => Method::T,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TagArg {
    #[value(name = "LOGGAMMA")]
    LogGamma,
    #[value(name = "S_PAIR")]
    SPair,
    #[value(name = "T")]
    T,
    #[value(name = "PSI")]
    Psi,
}

impl From<TagArg> for FunctionTag {
    fn from(t: TagArg) -> Self {
        match t {
            TagArg::LogGamma => FunctionTag::LogGamma,
            TagArg::SPair => FunctionTag::SPair,
            TagArg::T => FunctionTag::T,
            TagArg::Psi => FunctionTag::Psi,
        }
    }
}

#[derive(Args)]
struct CacheArg {
    /// Directory holding `<tag>_q<q>_part<i>.ekc` tables.
    #[arg(long, env = "EK_CACHE_DIR")]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute 𝔊_q, 𝔊_q⁺ and M_q for one prime.
    Compute {
        q: u64,
        #[arg(long, value_enum, default_value = "s")]
        method: MethodArg,
        /// Digits after the decimal point.
        #[arg(long, default_value_t = 15)]
        digits: usize,
        #[command(flatten)]
        cache: CacheArg,
    },
    /// Compute every prime in [Q_MIN, Q_MAX] and write CSV rows.
    Scan {
        q_min: u64,
        q_max: u64,
        #[arg(long, value_enum, default_value = "s")]
        method: MethodArg,
        #[arg(long, default_value_t = 15)]
        digits: usize,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add the v(q) column.
        #[arg(long)]
        with_vq: bool,
    },
    /// Tabulate one function for a prime and write it in the cache format.
    Precompute {
        q: u64,
        #[arg(long, value_enum)]
        tag: TagArg,
        /// Index range [K0, K1) (default: the full table).
        #[arg(long, num_args = 2, value_names = ["K0", "K1"])]
        range: Option<Vec<usize>>,
        /// Part number used in the file name inside the cache directory.
        #[arg(long, default_value_t = 0)]
        part: usize,
        /// Significant digits written per value.
        #[arg(long, default_value_t = cache::DEFAULT_DIGITS)]
        digits: u32,
        /// Output file; overrides the cache directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        cache: CacheArg,
    },
    /// Join table chunks into one file.
    Merge {
        #[arg(required = true)]
        parts: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare a complete table's sum against its closed form.
    Checksum {
        q: u64,
        #[arg(long, value_enum)]
        tag: TagArg,
        #[command(flatten)]
        cache: CacheArg,
    },
    /// Stieltjes constants γ_k(a,q) for 0 ≤ k ≤ K_MAX and 1 ≤ a ≤ q.
    Stieltjes {
        q: u64,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long, default_value_t = 15)]
        digits: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The Stieltjes constant γ_n.
    #[command(name = "gamma-n")]
    GammaN {
        n: usize,
        #[arg(long, default_value_t = 19)]
        digits: usize,
        /// Print both series evaluations as well.
        #[arg(long)]
        both: bool,
    },
    /// The first COUNT greedy prime offsets.
    Offsets {
        #[arg(default_value_t = offsets::STANDARD_COUNT)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// v(q) over the standard offset sequence.
    Vq {
        q: u64,
        #[arg(long, default_value_t = 15)]
        digits: usize,
    },
    /// Primes in [Q_MIN, Q_MAX] with v(q) above a threshold.
    Candidates {
        q_min: u64,
        q_max: u64,
        #[arg(long, default_value_t = 1.2)]
        threshold: f64,
        #[arg(long, default_value_t = 15)]
        digits: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn context_for(q: u64) -> Result<ek_core::PrimeContext> {
    build_context(q).map_err(|e| match e {
        ek_core::Error::NotOddPrime(_) => usage(e.to_string()),
        other => other.into(),
    })
}

/// Full tables from `dir` where present, the rest computed in memory.
fn gather_caches(
    ctx: &ek_core::PrimeContext,
    method: Method,
    dir: Option<&Path>,
    cfg: &EvalConfig,
) -> Result<Caches> {
    let mut caches = Caches::default();
    for &tag in method.tags() {
        let loaded = match dir {
            Some(d) if d.is_dir() => cache::load_dir(d, tag, ctx.q())
                .with_context(|| format!("loading {tag} tables for q={} from {}", ctx.q(), d.display()))?,
            _ => None,
        };
        let table = match loaded {
            Some(t) if t.is_full() => t,
            Some(_) => bail!("{tag} tables for q={} in the cache do not cover the full range", ctx.q()),
            None => cache::precompute_full(ctx, tag, cfg)?,
        };
        caches.insert(table);
    }
    Ok(caches)
}

fn cmd_compute(q: u64, method: Method, digits: usize, dir: Option<&Path>) -> Result<()> {
    let ctx = context_for(q)?;
    let cfg = EvalConfig::default();
    let caches = gather_caches(&ctx, method, dir, &cfg)?;
    let r = ek::compute_ek(&ctx, &caches, method)?;
    let mut s = String::new();
    writeln!(s, "q = {}", r.q)?;
    writeln!(s, "method = {}", r.method)?;
    for (name, v) in [
        ("ek", r.ek),
        ("ek_plus", r.ek_plus),
        ("ek_diff", r.ek_diff),
        ("mq", r.mq),
        ("mq_odd", r.mq_odd),
        ("mq_even", r.mq_even),
        ("ek_norm", r.ek_norm),
        ("ek_plus_norm", r.ek_plus_norm),
        ("mq_norm", r.mq_norm),
    ] {
        writeln!(s, "{name} = {v:.digits$}")?;
    }
    if let Some(d) = r.method_discrepancy {
        writeln!(s, "method_discrepancy = {d:.3e}")?;
    }
    writeln!(s, "imaginary_residue = {:.3e}", r.imaginary_residue)?;
    writeln!(s, "identity_residual = {:.3e}", r.identity_residual)?;
    emit(None, &s)
}

fn cmd_scan(
    q_min: u64,
    q_max: u64,
    method: Method,
    digits: usize,
    out: Option<&Path>,
    with_vq: bool,
) -> Result<()> {
    if q_min > q_max {
        return Err(usage(format!("empty range: {q_min} > {q_max}")));
    }
    let rows = scan::scan(q_min, q_max, method, with_vq, &EvalConfig::default())?;
    let mut s = String::from(ScanRow::HEADER);
    s.push('\n');
    for row in &rows {
        s.push_str(&row.to_csv(digits));
        s.push('\n');
    }
    emit(out, &s)
}

#[allow(clippy::too_many_arguments)]
fn cmd_precompute(
    q: u64,
    tag: FunctionTag,
    range: Option<Vec<usize>>,
    part: usize,
    digits: u32,
    out: Option<PathBuf>,
    dir: Option<PathBuf>,
) -> Result<()> {
    let ctx = context_for(q)?;
    let range = match range.as_deref() {
        Some(&[k0, k1]) => {
            if k0 > k1 || k1 > tag.full_len(q) {
                return Err(usage(format!("range {k0}..{k1} outside 0..{}", tag.full_len(q))));
            }
            k0..k1
        }
        _ => 0..tag.full_len(q),
    };
    let table = cache::precompute(&ctx, tag, range, &EvalConfig::default())?.with_digits(digits)?;
    let path = match (out, dir) {
        (Some(p), _) => p,
        (None, Some(d)) => {
            fs::create_dir_all(&d).with_context(|| format!("creating {}", d.display()))?;
            d.join(cache::file_name(tag, q, part))
        }
        (None, None) => return Err(usage("precompute needs --out or --cache (or EK_CACHE_DIR)")),
    };
    cache::save(&table, &path)?;
    emit(None, &format!("{}\n", path.display()))
}

fn cmd_merge(parts: &[PathBuf], out: &Path) -> Result<()> {
    let tables = parts
        .iter()
        .map(|p| cache::load(p).with_context(|| format!("loading {}", p.display())))
        .collect::<Result<Vec<_>>>()?;
    let merged = cache::merge(tables)?;
    merged.verify_checksum(EvalConfig::default().target_abs_error)?;
    cache::save(&merged, out)?;
    emit(None, &format!("{} k={}..{}\n", out.display(), merged.k_range().start, merged.k_range().end))
}

fn cmd_checksum(q: u64, tag: FunctionTag, dir: Option<&Path>) -> Result<bool> {
    let ctx = context_for(q)?;
    let cfg = EvalConfig::default();
    let table = match dir {
        Some(d) => cache::load_dir(d, tag, q)?
            .with_context(|| format!("no {tag} tables for q={q} in {}", d.display()))?,
        None => cache::precompute_full(&ctx, tag, &cfg)?,
    };
    let residual = ek::checksum(&ctx, &table)?;
    let tolerance = table.checksum_tolerance(cfg.target_abs_error);
    let ok = residual <= tolerance;
    emit(
        None,
        &format!(
            "q = {q}\ntag = {tag}\nresidual = {residual:.3e}\ntolerance = {tolerance:.3e}\nstatus = {}\n",
            if ok { "ok" } else { "mismatch" }
        ),
    )?;
    Ok(ok)
}

fn cmd_stieltjes(q: u64, k_max: usize, digits: usize, out: Option<&Path>) -> Result<()> {
    if q == 0 || q > stieltjes::Q_MAX || k_max > stieltjes::K_MAX {
        return Err(usage(format!(
            "need 1 ≤ q ≤ {} and k_max ≤ {}",
            stieltjes::Q_MAX,
            stieltjes::K_MAX
        )));
    }
    let table = stieltjes::StieltjesTable::new(q, k_max)?;
    let mut s = String::from("k,a,value\n");
    for k in 0..=k_max {
        for a in 1..=q {
            let v = table.get(k, a).expect("cell inside the table");
            writeln!(s, "{k},{a},{v:.digits$}")?;
        }
    }
    emit(out, &s)
}

fn cmd_gamma_n(n: usize, digits: usize, both: bool) -> Result<()> {
    if n > specfun::GAMMA_N_MAX {
        return Err(usage(format!("n must be at most {}", specfun::GAMMA_N_MAX)));
    }
    let mut s = String::new();
    if both && n > 0 {
        let (a, b) = specfun::gamma_n_pair(n)?;
        writeln!(s, "first = {a:.digits$}\nsecond = {b:.digits$}")?;
    }
    let v = specfun::gamma_n(n)?;
    writeln!(s, "{v:.digits$}")?;
    emit(None, &s)
}

fn cmd_offsets(count: usize, out: Option<&Path>) -> Result<()> {
    if !(1..=offsets::STANDARD_COUNT).contains(&count) {
        return Err(usage(format!("count must lie in 1..={}", offsets::STANDARD_COUNT)));
    }
    let seq = offsets::greedy_offsets(count)?;
    let mut s = String::new();
    for (i, b) in seq.terms().iter().enumerate() {
        writeln!(s, "{} {b}", i + 1)?;
    }
    writeln!(s, "# reciprocal sum {:.15}", seq.reciprocal_sum())?;
    emit(out, &s)
}

fn cmd_vq(q: u64, digits: usize) -> Result<()> {
    if q < 3 {
        return Err(usage("q must be at least 3"));
    }
    let v = offsets::v_of_q(q, offsets::standard_offsets())?;
    emit(None, &format!("{v:.digits$}\n"))
}

fn cmd_candidates(q_min: u64, q_max: u64, threshold: f64, digits: usize, out: Option<&Path>) -> Result<()> {
    if q_min > q_max {
        return Err(usage(format!("empty range: {q_min} > {q_max}")));
    }
    let found = offsets::scan_candidates(q_min, q_max, threshold, offsets::standard_offsets())?;
    let mut s = String::from("q,v_q\n");
    for (q, v) in found {
        writeln!(s, "{q},{v:.digits$}")?;
    }
    emit(out, &s)
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match cli.command {
        Command::Compute { q, method, digits, cache } => {
            cmd_compute(q, method.into(), digits, cache.cache.as_deref())?
        }
        Command::Scan { q_min, q_max, method, digits, out, with_vq } => {
            cmd_scan(q_min, q_max, method.into(), digits, out.as_deref(), with_vq)?
        }
        Command::Precompute { q, tag, range, part, digits, out, cache } => {
            cmd_precompute(q, tag.into(), range, part, digits, out, cache.cache)?
        }
        Command::Merge { parts, out } => cmd_merge(&parts, &out)?,
        Command::Checksum { q, tag, cache } => return cmd_checksum(q, tag.into(), cache.cache.as_deref()),
        Command::Stieltjes { q, k_max, digits, out } => cmd_stieltjes(q, k_max, digits, out.as_deref())?,
        Command::GammaN { n, digits, both } => cmd_gamma_n(n, digits, both)?,
        Command::Offsets { count, out } => cmd_offsets(count, out.as_deref())?,
        Command::Vq { q, digits } => cmd_vq(q, digits)?,
        Command::Candidates { q_min, q_max, threshold, digits, out } => {
            cmd_candidates(q_min, q_max, threshold, digits, out.as_deref())?
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
