//! Error-bounded approximations for the distribution of the maximum of a
//! 1-dependent stationary sequence, and their application to the discrete
//! scan statistic over Bernoulli trials.
//!
//! The crate is organised bottom-up:
//!
//! * [`extremes`] holds the α-dependent error coefficients, the root λ of the
//!   alternating series `C(z)` and the closed-form approximations of `q_n`.
//! * [`scan`] computes the exact scan distribution by Markov chain embedding,
//!   a brute-force enumeration oracle and the block sequences `W_k`.
//! * [`pipeline`] ties the two together into scan reports and the reference
//!   tables.
//! * [`montecarlo`] is a seeded simulation oracle.
//! * [`display`] renders numbers the way the reference tables print them.

pub mod display;
pub mod error;
pub mod extremes;
pub mod montecarlo;
pub mod pipeline;
pub mod scan;
pub mod sequences;

pub use error::{Error, Result};
pub use extremes::{
    approx_qn_t3, approx_qn_t4, approx_qnlambda_centers, c_series_eval, error_coefficients,
    legacy_bounds, p_from_q, qn_from_p, solve_cubic_t2, solve_lambda, ErrorCoefficients, Gated,
    LambdaResult, RangeExceeded,
};
pub use pipeline::{reproduce_table, sandwich, scan_approximation, ScanReport, Table};
pub use scan::{
    block_p_sequence, block_q_sequence, brute_force_scan_cdf, exact_scan_cdf, BernoulliScanSpec,
};
pub use sequences::{PSequence, QSequence};
