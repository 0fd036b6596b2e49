//! Compensated (Neumaier) summation.

use std::iter::Sum;
use std::ops::AddAssign;

/// Running sum carrying the rounding error of every addition.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator in, keeping both compensation terms.
    pub fn merge(&mut self, other: &Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for Neumaier {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl Sum<f64> for Neumaier {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

impl<'a> Sum<&'a f64> for Neumaier {
    fn sum<I: Iterator<Item = &'a f64>>(iter: I) -> Self {
        iter.copied().sum()
    }
}

/// Compensated sum of a slice.
pub fn sum(values: &[f64]) -> f64 {
    values.iter().sum::<Neumaier>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(sum(&xs), 2.0);
        let naive: f64 = xs.iter().sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (1..1000).map(|i| 1.0 / i as f64).collect();
        let mut a: Neumaier = xs[..500].iter().sum();
        let b: Neumaier = xs[500..].iter().sum();
        a.merge(&b);
        assert!((a.value() - sum(&xs)).abs() < 1e-15);
    }
}
