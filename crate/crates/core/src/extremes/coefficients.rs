use serde::Serialize;

use super::Gated;
use crate::error::{Error, Result};

/// Upper end of the range of `α` covered by the error coefficients.
pub const ALPHA_MAX: f64 = 0.1;

/// Range of `p_1` covered by the older constants 87 and 561.
pub const LEGACY_P1_MAX: f64 = 0.025;

/// Default gap between `l` and `t2³`.
///
/// The bracket `(1, 1 + l·p_1)` needs `l > t2³` strictly; `1e-4` is the gap
/// the published coefficient tables were computed with.
pub const L_MARGIN: f64 = 1e-4;

const NEWTON_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicRoot {
    /// Root of `α t³ − t + 1 = 0` in `(1, 1/√(3α))`.
    pub t2: f64,
    /// Bracket multiplier `l = t2³ + margin`.
    pub l: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha <= ALPHA_MAX {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// Solves `α t³ − t + 1 = 0` for its root in `(1, 1/√(3α))` and sets
/// `l = t2³ + L_MARGIN`.
pub fn solve_cubic_t2(alpha: f64) -> Result<CubicRoot> {
    solve_cubic_t2_with_margin(alpha, L_MARGIN)
}

/// As [`solve_cubic_t2`] with an explicit `l − t2³` (0 gives `l = t2³`).
pub fn solve_cubic_t2_with_margin(alpha: f64, margin: f64) -> Result<CubicRoot> {
    check_alpha(alpha)?;
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "l margin must be >= 0, got {margin}"
        )));
    }
    let f = |t: f64| alpha * t * t * t - t + 1.0;
    let df = |t: f64| 3.0 * alpha * t * t - 1.0;

    // f(1) = α > 0 and f(1/√(3α)) = 1 − 2/(3√(3α)) < 0 for α < 4/27. f is
    // convex and decreasing on the bracket, so Newton from the left endpoint
    // increases monotonically to the root; the bisection fallback only
    // guards against rounding.
    let mut lo = 1.0;
    let mut hi = 1.0 / (3.0 * alpha).sqrt();
    let mut t = 1.0;
    for _ in 0..200 {
        let ft = f(t);
        if ft == 0.0 {
            break;
        }
        if ft > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let mut next = t - ft / df(t);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - t).abs();
        t = next;
        if step <= NEWTON_TOL * t {
            break;
        }
    }
    Ok(CubicRoot {
        t2: t,
        l: t * t * t + margin,
    })
}

/// All α-dependent constants of the λ and `q_n λ^n` error bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorCoefficients {
    pub alpha: f64,
    pub t2: f64,
    pub l: f64,
    /// `1 + l·α`
    pub eta: f64,
    /// Bound coefficient for `|λ − μ₂| ≤ K p_1³`.
    pub k: f64,
    /// `L(α)`, the first part of `Γ`.
    pub l_coef: f64,
    /// `E(α)`, the second part of `Γ`.
    pub e_coef: f64,
    /// `Γ = L + E`, bound coefficient for `|q_n λ^n − μ₁| ≤ Γ p_1³`.
    pub gamma: f64,
}

impl ErrorCoefficients {
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_margin(alpha, L_MARGIN)
    }

    pub fn with_margin(alpha: f64, margin: f64) -> Result<Self> {
        let CubicRoot { t2, l } = solve_cubic_t2_with_margin(alpha, margin)?;
        let a = alpha;
        let eta = 1.0 + l * a;

        let d = 1.0 - a * eta * eta;
        let k_denom = 1.0 - 2.0 * a * eta / (d * d);
        if d <= 0.0 || k_denom <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "K(α) denominator not positive at α = {a}, l = {l}"
            )));
        }
        let k_first = (11.0 - 3.0 * a) / ((1.0 - a) * (1.0 - a));
        let k_second =
            2.0 * l * (1.0 + 3.0 * a) * (2.0 + 3.0 * l * a - a * (2.0 - l * a) * eta * eta)
                / (d * d * d);
        let k = (k_first + k_second) / k_denom;

        let s = 1.0 + a + 3.0 * a * a;
        let l_coef = 3.0 * k * s * (s + k * a.powi(3))
            + a.powi(6) * k.powi(3)
            + 9.0 * a * (4.0 + 3.0 * a + 3.0 * a * a)
            + 55.0;

        let w = 1.0 - a * eta * eta;
        let e_inner = w * w - a * eta * eta * (1.0 + eta - 2.0 * a * eta).powi(2);
        if e_inner <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "E(α) denominator not positive at α = {a}, l = {l}"
            )));
        }
        let e_num = eta.powi(5)
            * (1.0 + (1.0 - 2.0 * a) * eta).powi(4)
            * (1.0 + a * (eta - 2.0))
            * (1.0 + eta + (1.0 - 3.0 * a) * eta * eta);
        let e_coef = 0.1 + e_num / (2.0 * w.powi(4) * e_inner);

        Ok(Self {
            alpha,
            t2,
            l,
            eta,
            k,
            l_coef,
            e_coef,
            gamma: l_coef + e_coef,
        })
    }

    /// `1 + αK(α)`, the coefficient of `p_1²` in the two-term λ bound.
    pub fn c1_coef(&self) -> f64 {
        1.0 + self.alpha * self.k
    }

    /// `3 + αΓ(α)`, the coefficient of `p_1²` in the two-term `q_n λ^n` bound.
    pub fn c2_coef(&self) -> f64 {
        3.0 + self.alpha * self.gamma
    }
}

pub fn error_coefficients(alpha: f64) -> Result<ErrorCoefficients> {
    ErrorCoefficients::new(alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegacyBounds {
    /// `87 p_1³`, the older bound on `|λ − μ₂|`.
    pub bound_th1: f64,
    /// `561 p_1³`, the older bound on `|q_n λ^n − μ₁|`.
    pub bound_th2: f64,
}

/// The older constant bounds, valid only for `p_1 ≤ 0.025`.
pub fn legacy_bounds(p1: f64) -> Result<Gated<LegacyBounds>> {
    if !(p1.is_finite() && p1 >= 0.0) {
        return Err(Error::InvalidInput(format!("p1 must be >= 0, got {p1}")));
    }
    let p3 = p1 * p1 * p1;
    Ok(Gated::check(p1, LEGACY_P1_MAX, || LegacyBounds {
        bound_th1: 87.0 * p3,
        bound_th2: 561.0 * p3,
    }))
}
