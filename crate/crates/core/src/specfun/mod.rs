//! Self-contained special-function kernel.
//!
//! Log-gamma, (log-)beta, the incomplete beta function and its inverse, the
//! Gauss hypergeometric ₂F₁ on [0, 1], and ₃F₂ at unit argument. Everything
//! here is a pure function; the kernel holds no state.

mod beta;
mod gamma;
mod hyp2f1;
mod hyp3f2;
pub(crate) mod levin;

pub use beta::{beta, inc_beta_lower, inv_reg_inc_beta, log_beta, reg_inc_beta};
pub use gamma::log_gamma;
pub use hyp2f1::hyp2f1;
pub(crate) use hyp2f1::hyp2f1_zc;
pub use hyp3f2::hyp3f2_unit;

pub(crate) use beta::{ln_beta_unchecked, reg_inc_beta_over_pow, reg_inc_beta_unchecked};
pub(crate) use gamma::ln_gamma;

/// Truncation and acceleration policy for hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Relative tolerance for series summation.
    pub rel_tol: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
    /// Convergence exponent below which sequence acceleration is applied to
    /// unit-argument series.
    pub accel_threshold: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-12,
            max_terms: 100_000,
            accel_threshold: 2.0,
        }
    }
}

impl SeriesControl {
    /// A control with a different relative tolerance, other fields default.
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        SeriesControl {
            rel_tol,
            ..SeriesControl::default()
        }
    }

    pub(crate) fn validate(&self, op: &'static str) -> crate::error::Result<()> {
        if !(self.rel_tol > 0.0) || self.max_terms == 0 {
            return Err(crate::error::Error::domain(
                op,
                format!(
                    "invalid series control: rel_tol {} (must be > 0), max_terms {} (must be >= 1)",
                    self.rel_tol, self.max_terms
                ),
            ));
        }
        Ok(())
    }
}

/// True when x is (exactly) a nonpositive integer, which for the Pochhammer
/// numerators means a terminating series and for gammas a pole.
pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor() && x.is_finite()
}
