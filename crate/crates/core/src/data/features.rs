//! The 82-column per-market feature table.
//!
//! Columns 1–14 are market-specific (calendar, price, volume change,
//! lagged returns, rate-of-change, moving averages); columns 15–34 are
//! economic levels, spreads, and yield changes; columns 35–82 are the
//! daily returns of commodities, world indices, exchange rates, large
//! companies, and futures, shared across every market.
//!
//! Shared inputs are level series; derived transforms (returns, spreads,
//! first differences) are computed after the level has been forward-
//! filled onto the target market's calendar, so a closed foreign market
//! contributes a zero change rather than a stale repeated return.

use std::collections::BTreeMap;

use crate::data::calendar::align_to_calendar;
use crate::data::FeatureTable;
use crate::error::{DataError, Error, Result};
use crate::indicators::{
    day_of_week, ema, first_diff, mom_lag, rel_change, roc, spread, Ohlcv, Series,
};

/// How one feature column is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    /// 0 = Monday … 4 = Friday.
    DayOfWeek,
    /// The market's adjusted close, used as its price level.
    AdjClose,
    /// Relative change of the market's volume.
    VolumeChange,
    /// One-day return of the market close, lagged by `j` days.
    MomLag(usize),
    /// n-day rate of change of the market close, in percent.
    Roc(usize),
    /// n-day exponential moving average of the market close.
    Ema(usize),
    /// A shared source level, forward-filled onto the market calendar.
    Level(&'static str),
    /// Difference of two shared levels.
    Spread(&'static str, &'static str),
    /// First difference of a shared level.
    Diff(&'static str),
    /// Relative change of a shared level.
    Return(&'static str),
}

#[derive(Debug, Clone, Copy)]
pub struct FeatureDef {
    pub name: &'static str,
    pub kind: FeatureKind,
}

use FeatureKind::*;

/// All 82 columns in canonical order. The three oil rows carry distinct
/// names (source market suffixes) so that columns stay uniquely named.
pub const FEATURE_DEFS: [FeatureDef; 82] = [
    FeatureDef { name: "Day", kind: DayOfWeek },
    FeatureDef { name: "Close", kind: AdjClose },
    FeatureDef { name: "Vol", kind: VolumeChange },
    FeatureDef { name: "MOM-1", kind: MomLag(1) },
    FeatureDef { name: "MOM-2", kind: MomLag(2) },
    FeatureDef { name: "MOM-3", kind: MomLag(3) },
    FeatureDef { name: "ROC-5", kind: Roc(5) },
    FeatureDef { name: "ROC-10", kind: Roc(10) },
    FeatureDef { name: "ROC-15", kind: Roc(15) },
    FeatureDef { name: "ROC-20", kind: Roc(20) },
    FeatureDef { name: "EMA-10", kind: Ema(10) },
    FeatureDef { name: "EMA-20", kind: Ema(20) },
    FeatureDef { name: "EMA-50", kind: Ema(50) },
    FeatureDef { name: "EMA-200", kind: Ema(200) },
    FeatureDef { name: "DTB4WK", kind: Level("DTB4WK") },
    FeatureDef { name: "DTB3", kind: Level("DTB3") },
    FeatureDef { name: "DTB6", kind: Level("DTB6") },
    FeatureDef { name: "DGS5", kind: Level("DGS5") },
    FeatureDef { name: "DGS10", kind: Level("DGS10") },
    FeatureDef { name: "DAAA", kind: Level("DAAA") },
    FeatureDef { name: "DBAA", kind: Level("DBAA") },
    FeatureDef { name: "TE1", kind: Spread("DGS10", "DTB4WK") },
    FeatureDef { name: "TE2", kind: Spread("DGS10", "DTB3") },
    FeatureDef { name: "TE3", kind: Spread("DGS10", "DTB6") },
    FeatureDef { name: "TE5", kind: Spread("DTB3", "DTB4WK") },
    FeatureDef { name: "TE6", kind: Spread("DTB6", "DTB4WK") },
    FeatureDef { name: "DE1", kind: Spread("DBAA", "DAAA") },
    FeatureDef { name: "DE2", kind: Spread("DBAA", "DGS10") },
    FeatureDef { name: "DE4", kind: Spread("DBAA", "DTB6") },
    FeatureDef { name: "DE5", kind: Spread("DBAA", "DTB3") },
    FeatureDef { name: "DE6", kind: Spread("DBAA", "DTB4WK") },
    FeatureDef { name: "CTB3M", kind: Diff("DGS3MO") },
    FeatureDef { name: "CTB6M", kind: Diff("DGS6MO") },
    FeatureDef { name: "CTB1Y", kind: Diff("DGS1") },
    FeatureDef { name: "Oil", kind: Return("Oil") },
    FeatureDef { name: "Oil-Brent", kind: Return("Oil-Brent") },
    FeatureDef { name: "Oil-WTI", kind: Return("Oil-WTI") },
    FeatureDef { name: "Gold", kind: Return("Gold") },
    FeatureDef { name: "Gold-F", kind: Return("Gold-F") },
    FeatureDef { name: "XAU-USD", kind: Return("XAU-USD") },
    FeatureDef { name: "XAG-USD", kind: Return("XAG-USD") },
    FeatureDef { name: "Gas", kind: Return("Gas") },
    FeatureDef { name: "Silver", kind: Return("Silver") },
    FeatureDef { name: "Copper", kind: Return("Copper") },
    FeatureDef { name: "IXIC", kind: Return("IXIC") },
    FeatureDef { name: "GSPC", kind: Return("GSPC") },
    FeatureDef { name: "DJI", kind: Return("DJI") },
    FeatureDef { name: "NYSE", kind: Return("NYSE") },
    FeatureDef { name: "RUSSELL", kind: Return("RUSSELL") },
    FeatureDef { name: "HSI", kind: Return("HSI") },
    FeatureDef { name: "SSE", kind: Return("SSE") },
    FeatureDef { name: "FCHI", kind: Return("FCHI") },
    FeatureDef { name: "FTSE", kind: Return("FTSE") },
    FeatureDef { name: "GDAXI", kind: Return("GDAXI") },
    FeatureDef { name: "USD-Y", kind: Return("USD-Y") },
    FeatureDef { name: "USD-GBP", kind: Return("USD-GBP") },
    FeatureDef { name: "USD-CAD", kind: Return("USD-CAD") },
    FeatureDef { name: "USD-CNY", kind: Return("USD-CNY") },
    FeatureDef { name: "USD-AUD", kind: Return("USD-AUD") },
    FeatureDef { name: "USD-NZD", kind: Return("USD-NZD") },
    FeatureDef { name: "USD-CHF", kind: Return("USD-CHF") },
    FeatureDef { name: "USD-EUR", kind: Return("USD-EUR") },
    FeatureDef { name: "USDX", kind: Return("USDX") },
    FeatureDef { name: "XOM", kind: Return("XOM") },
    FeatureDef { name: "JPM", kind: Return("JPM") },
    FeatureDef { name: "AAPL", kind: Return("AAPL") },
    FeatureDef { name: "MSFT", kind: Return("MSFT") },
    FeatureDef { name: "GE", kind: Return("GE") },
    FeatureDef { name: "JNJ", kind: Return("JNJ") },
    FeatureDef { name: "WFC", kind: Return("WFC") },
    FeatureDef { name: "AMZN", kind: Return("AMZN") },
    FeatureDef { name: "FCHI-F", kind: Return("FCHI-F") },
    FeatureDef { name: "FTSE-F", kind: Return("FTSE-F") },
    FeatureDef { name: "GDAXI-F", kind: Return("GDAXI-F") },
    FeatureDef { name: "HSI-F", kind: Return("HSI-F") },
    FeatureDef { name: "Nikkei-F", kind: Return("Nikkei-F") },
    FeatureDef { name: "KOSPI-F", kind: Return("KOSPI-F") },
    FeatureDef { name: "IXIC-F", kind: Return("IXIC-F") },
    FeatureDef { name: "DJI-F", kind: Return("DJI-F") },
    FeatureDef { name: "S&P-F", kind: Return("S&P-F") },
    FeatureDef { name: "RUSSELL-F", kind: Return("RUSSELL-F") },
    FeatureDef { name: "USDX-F", kind: Return("USDX-F") },
];

pub const FEATURE_COUNT: usize = FEATURE_DEFS.len();

/// The five target markets in canonical order.
pub const MARKETS: [&str; 5] = ["GSPC", "DJI", "IXIC", "NYSE", "RUSSELL"];

/// Canonical column names.
pub fn feature_names() -> Vec<String> {
    FEATURE_DEFS.iter().map(|d| d.name.to_string()).collect()
}

/// Names of every shared source series the table needs, deduplicated,
/// in first-use order.
pub fn required_shared_sources() -> Vec<&'static str> {
    let mut out: Vec<&'static str> = Vec::new();
    let mut push = |name: &'static str| {
        if !out.contains(&name) {
            out.push(name);
        }
    };
    for def in &FEATURE_DEFS {
        match def.kind {
            Level(s) | Diff(s) | Return(s) => push(s),
            Spread(a, b) => {
                push(a);
                push(b);
            }
            _ => {}
        }
    }
    out
}

/// File stem for a shared source ('&' is dropped: S&P-F → SP-F.csv).
pub fn source_file_stem(source: &str) -> String {
    source.replace('&', "")
}

/// Build the full 82-column table for one market. Shared sources are
/// forward-filled onto the market's calendar; leading rows where any
/// column is still undefined (shared-source head or indicator warm-up,
/// the 200-day EMA dominating) are dropped. A gap after that is a data
/// error naming the column and date.
pub fn build_feature_table(
    bars: &Ohlcv,
    shared: &BTreeMap<String, Series>,
) -> Result<FeatureTable> {
    for name in required_shared_sources() {
        if !shared.contains_key(name) {
            return Err(Error::Data(DataError::MissingSource { name: name.into() }));
        }
    }
    let calendar = &bars.dates;
    let aligned: BTreeMap<&str, Series> = required_shared_sources()
        .into_iter()
        .map(|name| (name, align_to_calendar(calendar, &shared[name])))
        .collect();

    let close = bars.adj_close_series();
    let mut raw_columns: Vec<Series> = Vec::with_capacity(FEATURE_COUNT);
    for def in &FEATURE_DEFS {
        let series = match def.kind {
            DayOfWeek => day_of_week(calendar),
            AdjClose => close.clone(),
            VolumeChange => rel_change(&bars.volume_series()),
            MomLag(j) => mom_lag(&close, j),
            Roc(n) => roc(&close, n),
            Ema(n) => ema(&close, n)?,
            Level(s) => aligned[s].clone(),
            Spread(a, b) => spread(&aligned[a], &aligned[b]),
            Diff(s) => first_diff(&aligned[s]),
            Return(s) => rel_change(&aligned[s]),
        };
        debug_assert_eq!(series.len(), calendar.len(), "column {}", def.name);
        raw_columns.push(series);
    }

    // First row on which every column is defined.
    let warmup = raw_columns
        .iter()
        .map(|s| s.first_defined().unwrap_or(s.len()))
        .max()
        .expect("82 columns");
    if warmup >= calendar.len() {
        return Err(Error::invalid_data(format!(
            "market {}: no rows remain after warm-up ({} days of input)",
            bars.market,
            calendar.len()
        )));
    }

    let rows = calendar.len() - warmup;
    let mut columns = Vec::with_capacity(FEATURE_COUNT);
    for (def, series) in FEATURE_DEFS.iter().zip(&raw_columns) {
        let mut col = Vec::with_capacity(rows);
        for (t, v) in series.values.iter().enumerate().skip(warmup) {
            match v {
                Some(x) => col.push(*x),
                None => {
                    return Err(Error::Data(DataError::InteriorMissing {
                        name: def.name.to_string(),
                        date: calendar[t].to_string(),
                    }))
                }
            }
        }
        columns.push(col);
    }

    let table = FeatureTable {
        market: bars.market.clone(),
        dates: calendar[warmup..].to_vec(),
        names: feature_names(),
        columns,
        label_close: bars.adj_close[warmup..].to_vec(),
        normalized: false,
    };
    table.validate()?;
    Ok(table)
}
