//! Text renderings of results: CSV tables and solution JSON.
//!
//! All builders return complete documents as strings so callers own the IO.
//! CSV files use a header row, comma separators, LF line endings, and plain
//! decimal numbers rounded to six significant digits; JSON keeps full
//! precision for round-tripping.

use nalgebra::DMatrix;

use crate::analytics::{
    CorrelationRecord, ProfitDistribution, Strategy, VolatilityRecord,
};
use crate::error::HedgeError;
use crate::frontier::FrontierPoint;
use crate::solver::HedgeSolution;

/// Number of significant digits used in CSV output.
pub const CSV_SIGNIFICANT_DIGITS: u32 = 6;

/// Formats a number in plain decimal (never scientific) notation rounded to
/// the given number of significant digits.
pub fn format_significant(value: f64, digits: u32) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = digits as i32 - 1 - magnitude;
    if decimals <= 0 {
        let scale = 10f64.powi(-decimals);
        format!("{:.0}", (value / scale).round() * scale)
    } else {
        format!("{:.*}", decimals as usize, value)
    }
}

fn num(value: f64) -> String {
    format_significant(value, CSV_SIGNIFICANT_DIGITS)
}

fn csv(rows: Vec<Vec<String>>) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// CSV of both claim curves, one row per support node, tagged by axis.
pub fn claims_csv(
    price_support: &[f64],
    price_claim: &[f64],
    weather_support: &[f64],
    weather_claim: &[f64],
) -> String {
    let mut rows = vec![vec![
        "axis".to_string(),
        "support".to_string(),
        "claim".to_string(),
    ]];
    for (s, x) in price_support.iter().zip(price_claim) {
        rows.push(vec!["price".to_string(), num(*s), num(*x)]);
    }
    for (s, x) in weather_support.iter().zip(weather_claim) {
        rows.push(vec!["weather".to_string(), num(*s), num(*x)]);
    }
    csv(rows)
}

/// CSV of frontier samples: risk aversion, hedged mean, hedged variance.
pub fn frontier_csv(points: &[FrontierPoint]) -> String {
    let mut rows = vec![vec![
        "a".to_string(),
        "mean".to_string(),
        "variance".to_string(),
    ]];
    for p in points {
        rows.push(vec![num(p.a), num(p.mean), num(p.variance)]);
    }
    csv(rows)
}

/// Quantile table: one row per level, one column per strategy.
pub fn quantile_table_csv(levels: &[f64], columns: &[(Strategy, Vec<f64>)]) -> String {
    let mut header = vec!["level".to_string()];
    header.extend(columns.iter().map(|(s, _)| s.to_string()));
    let mut rows = vec![header];
    for (row_idx, &level) in levels.iter().enumerate() {
        let mut row = vec![num(level)];
        for (_, values) in columns {
            row.push(num(values[row_idx]));
        }
        rows.push(row);
    }
    csv(rows)
}

/// CSV of a discrete profit distribution: value, probability, cumulative.
pub fn distribution_csv(dist: &ProfitDistribution) -> String {
    let mut rows = vec![vec![
        "value".to_string(),
        "probability".to_string(),
        "cumulative".to_string(),
    ]];
    let mut cumulative = 0.0;
    for o in dist.outcomes() {
        cumulative += o.probability;
        rows.push(vec![num(o.value), num(o.probability), num(cumulative)]);
    }
    csv(rows)
}

/// Correlation-sweep summary: utilities and hedged moments per rho.
pub fn correlation_summary_csv(records: &[CorrelationRecord]) -> String {
    let mut rows = vec![vec![
        "rho_wp".to_string(),
        "utility_general".to_string(),
        "utility_proxy".to_string(),
        "utility_gap".to_string(),
        "mean_general".to_string(),
        "variance_general".to_string(),
        "mean_proxy".to_string(),
        "variance_proxy".to_string(),
    ]];
    for r in records {
        rows.push(vec![
            num(r.rho_wp),
            num(r.utility_general),
            num(r.utility_proxy),
            num(r.utility_general - r.utility_proxy),
            num(r.mean_general),
            num(r.variance_general),
            num(r.mean_proxy),
            num(r.variance_proxy),
        ]);
    }
    csv(rows)
}

/// Volatility-sweep summary: hedged moments and claim ranges per sigma.
pub fn volatility_summary_csv(records: &[VolatilityRecord]) -> String {
    let mut rows = vec![vec![
        "sigma".to_string(),
        "mean".to_string(),
        "variance".to_string(),
        "price_claim_range".to_string(),
        "weather_claim_range".to_string(),
    ]];
    for r in records {
        rows.push(vec![
            num(r.sigma),
            num(r.mean),
            num(r.variance),
            num(claim_range(&r.solution.x_p)),
            num(claim_range(&r.solution.x_w)),
        ]);
    }
    csv(rows)
}

/// Max minus min of a claim payoff vector.
pub fn claim_range(claim: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in claim {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if claim.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// CSV dump of a dense matrix, full precision, no header.
pub fn matrix_csv(matrix: &DMatrix<f64>) -> String {
    let mut rows = Vec::with_capacity(matrix.nrows());
    for r in 0..matrix.nrows() {
        rows.push(
            (0..matrix.ncols())
                .map(|c| format!("{}", matrix[(r, c)]))
                .collect(),
        );
    }
    csv(rows)
}

/// Pretty-printed JSON of a solution, full precision.
pub fn solution_json(sol: &HedgeSolution) -> Result<String, HedgeError> {
    serde_json::to_string_pretty(sol)
        .map_err(|e| HedgeError::InvalidParameter(format!("solution serialization failed: {e}")))
}
