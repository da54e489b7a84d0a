//! Scan-statistic approximation reports and the reference tables.

use rayon::prelude::*;
use serde::Serialize;

use crate::display::{table_bound, table_fixed, table_probability};
use crate::error::{Error, Result};
use crate::extremes::{
    approx_qn_t3, approx_qn_t4, ErrorCoefficients, RangeExceeded, ALPHA_MAX, LEGACY_P1_MAX,
};
use crate::scan::{block_q_sequence, exact_scan_cdf, BernoulliScanSpec};

/// α values of the coefficient tables.
pub const COEFFICIENT_ALPHAS: [f64; 4] = [0.1, 0.05, 0.025, 0.01];

/// Parameters of a scan-distribution table: `(m, p, L, thresholds)`.
#[derive(Debug, Clone, Copy)]
pub struct ScanTableParams {
    pub window: usize,
    pub p: f64,
    pub blocks: usize,
    pub thresholds: (usize, usize),
}

pub const TABLE3: ScanTableParams = ScanTableParams {
    window: 9,
    p: 0.05,
    blocks: 10,
    thresholds: (2, 7),
};

pub const TABLE4: ScanTableParams = ScanTableParams {
    window: 10,
    p: 0.0165,
    blocks: 15,
    thresholds: (1, 5),
};

/// Approximation of `P(S_m(Lm) ≤ n)` with its error bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub window: usize,
    pub p: f64,
    /// `L`; the scan covers `N = Lm` trials and `L − 1` blocks.
    pub blocks: usize,
    pub threshold: usize,
    /// `P(S_m(2m) ≤ n)`
    pub q1: f64,
    /// `P(S_m(3m) ≤ n)`
    pub q2: f64,
    pub q3: Option<f64>,
    pub q4: Option<f64>,
    /// `α = P(W_1 > n) = 1 − q1`
    pub alpha_used: f64,
    pub approx_t4: Option<f64>,
    pub approx_t3: Option<f64>,
    /// `Δ₁(α, L−1)(1 − q1)³`, present with `approx_t3`.
    pub t3_bound: Option<f64>,
    /// New bound on `|approx_t4 − P(S_m(Lm) ≤ n)|`.
    pub e_bound: Option<f64>,
    /// Older bound, only for `α ≤ 0.025`.
    pub eh_bound: Option<f64>,
    pub exact: Option<f64>,
    /// Set when `α > 0.1` and no approximation applies.
    pub range_exceeded: Option<RangeExceeded>,
}

/// `{9 + 561a + 3.3(L−1)[1 + 4.7(L−1)a²]}a²` with `a = 1 − q1`.
pub fn legacy_scan_bound(q1: f64, blocks: usize) -> f64 {
    let a = 1.0 - q1;
    let n = (blocks - 1) as f64;
    (9.0 + 561.0 * a + 3.3 * n * (1.0 + 4.7 * n * a * a)) * a * a
}

/// Runs the whole approximation for `P(S_m(Lm) ≤ n)`.
///
/// The approximated index is always `L − 1`, the number of blocks.
pub fn scan_approximation(
    window: usize,
    p: f64,
    blocks: usize,
    threshold: usize,
    want_exact: bool,
    want_t3: bool,
) -> Result<ScanReport> {
    if blocks < 2 {
        return Err(Error::InvalidInput(format!("L must be >= 2, got {blocks}")));
    }
    let spec = BernoulliScanSpec::new(window, p, blocks * window, threshold)?;
    let q = block_q_sequence(window, p, threshold, if want_t3 { 4 } else { 2 })?;
    let q1 = q.require(1)?;
    let q2 = q.require(2)?;
    let (q3, q4) = if want_t3 {
        (Some(q.require(3)?), Some(q.require(4)?))
    } else {
        (None, None)
    };
    let alpha_used = 1.0 - q1;
    let n_blocks = blocks - 1;

    let mut report = ScanReport {
        window,
        p,
        blocks,
        threshold,
        q1,
        q2,
        q3,
        q4,
        alpha_used,
        approx_t4: None,
        approx_t3: None,
        t3_bound: None,
        e_bound: None,
        eh_bound: None,
        exact: None,
        range_exceeded: None,
    };

    if alpha_used > ALPHA_MAX {
        report.range_exceeded = Some(RangeExceeded {
            value: alpha_used,
            limit: ALPHA_MAX,
        });
    } else {
        // when q1 = 1 every bound carries a factor 1 − q1 = 0 and the
        // coefficients only need a valid α
        let coef_alpha = if alpha_used > 0.0 {
            alpha_used
        } else {
            ALPHA_MAX
        };
        if let Some(t4) = approx_qn_t4(q1, q2, n_blocks, coef_alpha)?.applicable() {
            report.approx_t4 = Some(t4.value);
            report.e_bound = Some(t4.bound);
        }
        if let (Some(q3), Some(q4)) = (q3, q4) {
            if let Some(t3) = approx_qn_t3(q1, q2, q3, q4, n_blocks, coef_alpha)?.applicable() {
                report.approx_t3 = Some(t3.value);
                report.t3_bound = Some(t3.bound);
            }
        }
        if alpha_used <= LEGACY_P1_MAX {
            report.eh_bound = Some(legacy_scan_bound(q1, blocks));
        }
    }
    if want_exact {
        report.exact = Some(exact_scan_cdf(&spec)?);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sandwich {
    /// `L = ⌊N/m⌋`
    pub blocks: usize,
    /// `P(S_m((L+1)m) ≤ n)`
    pub lower: f64,
    /// `P(S_m(Lm) ≤ n)`
    pub upper: f64,
    /// `P(S_m(N) ≤ n)`
    pub value: f64,
}

/// Brackets `P(S_m(N) ≤ n)` between the two neighbouring multiples of `m`.
pub fn sandwich(window: usize, p: f64, trials: usize, threshold: usize) -> Result<Sandwich> {
    let spec = BernoulliScanSpec::new(window, p, trials, threshold)?;
    if spec.is_degenerate() {
        return Err(Error::InvalidInput(format!(
            "N = {trials} < m = {window}: no complete block"
        )));
    }
    let blocks = trials / window;
    Ok(Sandwich {
        blocks,
        lower: exact_scan_cdf(&spec.with_trials((blocks + 1) * window)?)?,
        upper: exact_scan_cdf(&spec.with_trials(blocks * window)?)?,
        value: exact_scan_cdf(&spec)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Value { value: f64, display: String },
    Dash,
}

impl Cell {
    fn new(value: f64, display: String) -> Self {
        Cell::Value { value, display }
    }

    fn opt(value: Option<f64>, render: fn(f64) -> String) -> Self {
        value.map_or(Cell::Dash, |v| Cell::new(v, render(v)))
    }

    pub fn display(&self) -> Option<&str> {
        match self {
            Cell::Value { display, .. } => Some(display),
            Cell::Dash => None,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value { value, .. } => Some(*value),
            Cell::Dash => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    /// Machine key used in CSV headers and JSON objects.
    pub key: &'static str,
    /// Human label used in markdown.
    pub label: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub id: u8,
    pub title: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

const fn col(key: &'static str, label: &'static str) -> Column {
    Column { key, label }
}

fn coefficient_table(id: u8) -> Result<Table> {
    let (title, columns) = if id == 1 {
        (
            "Error coefficients of the lambda bounds",
            vec![
                col("alpha", "α"),
                col("l", "l"),
                col("k", "K(α)"),
                col("one_plus_alpha_k", "1+αK(α)"),
            ],
        )
    } else {
        (
            "Error coefficients of the q_n lambda^n bounds",
            vec![
                col("alpha", "α"),
                col("gamma", "Γ(α)"),
                col("three_plus_alpha_gamma", "3+αΓ(α)"),
            ],
        )
    };
    let rows = COEFFICIENT_ALPHAS
        .iter()
        .map(|&alpha| {
            let c = ErrorCoefficients::new(alpha)?;
            let alpha_cell = Cell::new(alpha, table_fixed(alpha, 3));
            Ok(if id == 1 {
                vec![
                    alpha_cell,
                    Cell::new(c.l, table_fixed(c.l, 4)),
                    Cell::new(c.k, table_fixed(c.k, 4)),
                    Cell::new(c.c1_coef(), table_fixed(c.c1_coef(), 4)),
                ]
            } else {
                vec![
                    alpha_cell,
                    Cell::new(c.gamma, table_fixed(c.gamma, 3)),
                    Cell::new(c.c2_coef(), table_fixed(c.c2_coef(), 4)),
                ]
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        id,
        title: title.to_string(),
        columns,
        rows,
    })
}

/// Rows of a scan table, one per threshold.
pub fn scan_table_reports(params: &ScanTableParams) -> Result<Vec<ScanReport>> {
    let (lo, hi) = params.thresholds;
    (lo..=hi)
        .into_par_iter()
        .map(|n| scan_approximation(params.window, params.p, params.blocks, n, true, false))
        .collect()
}

fn scan_table(id: u8, params: &ScanTableParams) -> Result<Table> {
    let rows = scan_table_reports(params)?
        .into_iter()
        .map(|r| {
            vec![
                Cell::new(r.threshold as f64, r.threshold.to_string()),
                Cell::new(r.q1, table_probability(r.q1)),
                Cell::new(r.q2, table_probability(r.q2)),
                Cell::opt(r.approx_t4, table_probability),
                Cell::opt(r.exact, table_probability),
                Cell::opt(r.eh_bound, table_bound),
                Cell::opt(r.e_bound, table_bound),
            ]
        })
        .collect();
    Ok(Table {
        id,
        title: format!(
            "Distribution of the scan statistic P(S_m(Lm) <= n) for m={}, p={}, L={}",
            params.window, params.p, params.blocks
        ),
        columns: vec![
            col("n", "n"),
            col("q1", "q₁"),
            col("q2", "q₂"),
            col("approx", "Approx"),
            col("exact", "Exact"),
            col("eh", "EH"),
            col("e", "E"),
        ],
        rows,
    })
}

/// Regenerates one of the four reference tables.
pub fn reproduce_table(which: u8) -> Result<Table> {
    match which {
        1 | 2 => coefficient_table(which),
        3 => scan_table(3, &TABLE3),
        4 => scan_table(4, &TABLE4),
        _ => Err(Error::InvalidInput(format!(
            "no table {which}; choose 1..4"
        ))),
    }
}
