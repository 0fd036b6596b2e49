//! Special functions: ψ, logΓ, the T and S functions, generalized digamma
//! functions ψ_n and the Stieltjes constants γ_n.

mod log_sq;
mod em;
mod gamma;
mod quadrature;
mod series;

pub use log_sq::{s_function, s_integral, s_pair, s_pair_integral};
pub use gamma::{digamma, log_gamma};
pub use series::{gamma_n, gamma_n_pair, psi_n, s_pair_series, s_series, t_function, GAMMA_N_MAX};

pub(crate) use log_sq::s_pair_c;


use crate::error::{Error, Result};

/// Euler's constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// The first Stieltjes constant γ₁.
pub const GAMMA1: f64 = -0.072_815_845_483_676_72;
/// ζ″(0).
pub const ZETA_SECOND_DERIV_AT_0: f64 = -2.006_356_455_908_585;

/// The fixed constants used throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub euler_gamma: f64,
    pub gamma1: f64,
    pub zeta_second_deriv_at_0: f64,
}

pub const CONSTANTS: Constants = Constants {
    euler_gamma: EULER_GAMMA,
    gamma1: GAMMA1,
    zeta_second_deriv_at_0: ZETA_SECOND_DERIV_AT_0,
};

/// Accuracy and effort knobs shared by the series and quadrature routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    /// Absolute error goal per value.
    pub target_abs_error: f64,
    /// Upper bound on the explicit head of any series.
    pub max_terms: usize,
    /// Maximum number of step halvings in the double-exponential quadrature.
    pub quadrature_levels: usize,
    /// Below this decay parameter `min(x, 1−x)` the S integral is replaced
    /// by the accelerated series.
    pub series_switch_threshold: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            target_abs_error: 1e-14,
            max_terms: 1 << 16,
            quadrature_levels: 8,
            series_switch_threshold: 0.05,
        }
    }
}

impl EvalConfig {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN too
    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_error > 0.0) {
            return Err(Error::OutOfRange(format!(
                "target_abs_error must be positive, got {}",
                self.target_abs_error
            )));
        }
        if self.max_terms < 1 {
            return Err(Error::OutOfRange("max_terms must be at least 1".into()));
        }
        if !(self.series_switch_threshold > 0.0 && self.series_switch_threshold <= 0.5) {
            return Err(Error::OutOfRange(format!(
                "series_switch_threshold must lie in (0, 1/2], got {}",
                self.series_switch_threshold
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_in_documented_ranges() {
        let c = CONSTANTS;
        assert!(c.euler_gamma > 0.577215 && c.euler_gamma < 0.577216);
        assert!(c.gamma1 > -0.072816 && c.gamma1 < -0.072815);
        assert!(c.zeta_second_deriv_at_0 > -2.006357 && c.zeta_second_deriv_at_0 < -2.006356);
    }

    #[test]
    fn config_validation() {
        assert!(EvalConfig::default().validate().is_ok());
        let bad = EvalConfig { target_abs_error: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = EvalConfig { series_switch_threshold: 0.6, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = EvalConfig { max_terms: 0, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
