//! Approximations for `q_n = P(max(X_1..X_n) ≤ x)` of a 1-dependent
//! stationary sequence, each with an explicit error bound expressed through
//! the coefficients `K(α)` and `Γ(α)`.

mod approx;
mod coefficients;
mod series;

use serde::Serialize;

pub use approx::{
    approx_qn_t3, approx_qn_t4, approx_qnlambda_centers, p_from_q, q_sequence_from_p, qn_from_p,
    LambdaCenters, PFromQ, T3Approx, T4Approx,
};
pub use coefficients::{
    error_coefficients, legacy_bounds, solve_cubic_t2, solve_cubic_t2_with_margin, CubicRoot,
    ErrorCoefficients, LegacyBounds, ALPHA_MAX, LEGACY_P1_MAX, L_MARGIN,
};
pub use series::{c_series_eval, solve_lambda, tail_majorant, LambdaResult, SeriesValue};

/// Result of an operation whose bound only applies within a parameter range.
///
/// The tables print a dash where a bound is inapplicable; callers need the
/// marker as data rather than as an error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Gated<T> {
    Applicable(T),
    Inapplicable(RangeExceeded),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeExceeded {
    pub value: f64,
    pub limit: f64,
}

impl<T> Gated<T> {
    pub(crate) fn check(value: f64, limit: f64, f: impl FnOnce() -> T) -> Self {
        if value > limit {
            Gated::Inapplicable(RangeExceeded { value, limit })
        } else {
            Gated::Applicable(f())
        }
    }

    pub fn applicable(self) -> Option<T> {
        match self {
            Gated::Applicable(v) => Some(v),
            Gated::Inapplicable(_) => None,
        }
    }

    pub fn is_applicable(&self) -> bool {
        matches!(self, Gated::Applicable(_))
    }
}
