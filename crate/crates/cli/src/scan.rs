//! One CSV row per prime over a range.

use anyhow::Result;
use rayon::prelude::*;

use ek_core::ek::{self, EKResult, Method};
use ek_core::multgroup::is_prime;
use ek_core::{offsets, EvalConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub q: u64,
    pub ek: f64,
    pub ek_plus: f64,
    pub ek_diff: f64,
    pub mq: f64,
    pub mq_odd: f64,
    pub mq_even: f64,
    pub ek_norm: f64,
    pub ek_plus_norm: f64,
    pub mq_norm: f64,
    pub v_q: Option<f64>,
}

impl ScanRow {
    pub const HEADER: &'static str =
        "q,ek,ek_plus,ek_diff,mq,mq_odd,mq_even,ek_norm,ek_plus_norm,mq_norm,v_q";

    pub fn new(r: &EKResult, v_q: Option<f64>) -> Self {
        Self {
            q: r.q,
            ek: r.ek,
            ek_plus: r.ek_plus,
            ek_diff: r.ek_diff,
            mq: r.mq,
            mq_odd: r.mq_odd,
            mq_even: r.mq_even,
            ek_norm: r.ek_norm,
            ek_plus_norm: r.ek_plus_norm,
            mq_norm: r.mq_norm,
            v_q,
        }
    }

    /// Every real field with exactly `digits` digits after the point.
    pub fn to_csv(&self, digits: usize) -> String {
        let fields = [
            self.ek,
            self.ek_plus,
            self.ek_diff,
            self.mq,
            self.mq_odd,
            self.mq_even,
            self.ek_norm,
            self.ek_plus_norm,
            self.mq_norm,
        ];
        let mut out = self.q.to_string();
        for v in fields {
            out.push_str(&format!(",{v:.digits$}"));
        }
        out.push(',');
        if let Some(v) = self.v_q {
            out.push_str(&format!("{v:.digits$}"));
        }
        out
    }
}

/// Rows for every odd prime in `[q_min, q_max]`, ascending.
pub fn scan(q_min: u64, q_max: u64, method: Method, with_vq: bool, cfg: &EvalConfig) -> Result<Vec<ScanRow>> {
    let primes: Vec<u64> = (q_min.max(3)..=q_max).filter(|&q| is_prime(q)).collect();
    let rows = primes
        .par_iter()
        .map(|&q| -> Result<ScanRow> {
            let r = ek::compute(q, method, cfg)?;
            let v = if with_vq { Some(offsets::v_of_q(q, offsets::standard_offsets())?) } else { None };
            Ok(ScanRow::new(&r, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let r = ek::compute(3, Method::S, &EvalConfig::default()).unwrap();
        let row = ScanRow::new(&r, None);
        let line = row.to_csv(4);
        assert!(line.starts_with("3,0.9455,0.5772,0.3683,"));
        assert!(line.ends_with(','));
        assert_eq!(line.split(',').count(), ScanRow::HEADER.split(',').count());
        let with_v = ScanRow::new(&r, Some(1.0)).to_csv(2);
        assert!(with_v.ends_with(",1.00"));
    }
}
