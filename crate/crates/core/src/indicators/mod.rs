//! Date-aligned series and the indicator primitives built on them.
//!
//! Values are `Option<f64>` so that analytically undefined warm-up
//! prefixes (and the rare interior gap, e.g. a flat stochastic window)
//! stay explicitly missing instead of turning into NaN downstream.

pub mod kara;

use chrono::{Datelike, NaiveDate};

use crate::error::{DataError, Error, Result};

/// A named, date-indexed float series. Dates are strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub dates: Vec<NaiveDate>,
    pub values: Vec<Option<f64>>,
}

impl Series {
    pub fn new(
        name: impl Into<String>,
        dates: Vec<NaiveDate>,
        values: Vec<Option<f64>>,
    ) -> Result<Series> {
        let name = name.into();
        if dates.len() != values.len() {
            return Err(Error::invalid_data(format!(
                "series '{name}': {} dates but {} values",
                dates.len(),
                values.len()
            )));
        }
        for w in dates.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Data(DataError::NonMonotoneDates {
                    path: name.clone(),
                    date: w[1].to_string(),
                }));
            }
        }
        if let Some(bad) = values.iter().flatten().find(|v| !v.is_finite()) {
            return Err(Error::invalid_data(format!(
                "series '{name}': non-finite value {bad}"
            )));
        }
        Ok(Series { name, dates, values })
    }

    pub fn from_values(
        name: impl Into<String>,
        dates: Vec<NaiveDate>,
        values: Vec<f64>,
    ) -> Result<Series> {
        let values = values.into_iter().map(Some).collect();
        Series::new(name, dates, values)
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    /// Index of the first defined value, if any.
    pub fn first_defined(&self) -> Option<usize> {
        self.values.iter().position(|v| v.is_some())
    }

    /// Defined values must form one contiguous tail (no interior gaps);
    /// returns the start index of that tail.
    pub fn contiguous_tail_start(&self) -> Result<usize> {
        let start = self.first_defined().ok_or_else(|| {
            Error::invalid_data(format!("series '{}' has no defined values", self.name))
        })?;
        for i in start..self.len() {
            if self.values[i].is_none() {
                return Err(Error::Data(DataError::InteriorMissing {
                    name: self.name.clone(),
                    date: self.dates[i].to_string(),
                }));
            }
        }
        Ok(start)
    }

    fn same_dates(&self, name: &str) -> (String, Vec<NaiveDate>) {
        (name.to_string(), self.dates.clone())
    }
}

/// Daily bars for one market, all arrays aligned to `dates`.
#[derive(Debug, Clone)]
pub struct Ohlcv {
    pub market: String,
    pub dates: Vec<NaiveDate>,
    pub open: Vec<f64>,
    pub high: Vec<f64>,
    pub low: Vec<f64>,
    pub close: Vec<f64>,
    pub adj_close: Vec<f64>,
    pub volume: Vec<f64>,
}

impl Ohlcv {
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn adj_close_series(&self) -> Series {
        Series::from_values("Close", self.dates.clone(), self.adj_close.clone())
            .expect("bars are validated on construction")
    }

    pub fn close_series(&self) -> Series {
        Series::from_values("close", self.dates.clone(), self.close.clone())
            .expect("bars are validated on construction")
    }

    pub fn volume_series(&self) -> Series {
        Series::from_values("volume", self.dates.clone(), self.volume.clone())
            .expect("bars are validated on construction")
    }
}

/// (s_t − s_{t−1}) / s_{t−1}; first element missing, zero denominators
/// flagged missing rather than propagated as NaN.
pub fn rel_change(s: &Series) -> Series {
    let (name, dates) = s.same_dates(&format!("relchange({})", s.name));
    let mut out = vec![None; s.len()];
    for t in 1..s.len() {
        if let (Some(prev), Some(cur)) = (s.values[t - 1], s.values[t]) {
            if prev != 0.0 {
                out[t] = Some((cur - prev) / prev);
            }
        }
    }
    Series { name, dates, values: out }
}

/// TA-Lib-compatible EMA: seeded at index n−1 with the SMA of the first n
/// values, then EMA_t = α·P_t + (1−α)·EMA_{t−1} with α = 2/(n+1).
pub fn ema(s: &Series, n: usize) -> Result<Series> {
    assert!(n >= 1, "ema period must be positive");
    let start = s.contiguous_tail_start()?;
    let (name, dates) = s.same_dates(&format!("ema{}({})", n, s.name));
    let mut out = vec![None; s.len()];
    if s.len() - start >= n {
        let seed_at = start + n - 1;
        let sma: f64 = (start..=seed_at)
            .map(|i| s.values[i].expect("contiguous tail"))
            .sum::<f64>()
            / n as f64;
        let alpha = 2.0 / (n as f64 + 1.0);
        out[seed_at] = Some(sma);
        let mut prev = sma;
        for t in seed_at + 1..s.len() {
            let p = s.values[t].expect("contiguous tail");
            prev = alpha * p + (1.0 - alpha) * prev;
            out[t] = Some(prev);
        }
    }
    Ok(Series { name, dates, values: out })
}

/// (s_t / s_{t−n} − 1) · 100; first n outputs missing.
pub fn roc(s: &Series, n: usize) -> Series {
    assert!(n >= 1, "roc period must be positive");
    let (name, dates) = s.same_dates(&format!("roc{}({})", n, s.name));
    let mut out = vec![None; s.len()];
    for t in n..s.len() {
        if let (Some(base), Some(cur)) = (s.values[t - n], s.values[t]) {
            if base != 0.0 {
                out[t] = Some((cur / base - 1.0) * 100.0);
            }
        }
    }
    Series { name, dates, values: out }
}

/// One-day return lagged by `j` days:
/// out_t = (s_{t−j} − s_{t−j−1}) / s_{t−j−1}.
pub fn mom_lag(s: &Series, j: usize) -> Series {
    let (name, dates) = s.same_dates(&format!("mom{}({})", j, s.name));
    let mut out = vec![None; s.len()];
    for t in j + 1..s.len() {
        if let (Some(prev), Some(cur)) = (s.values[t - j - 1], s.values[t - j]) {
            if prev != 0.0 {
                out[t] = Some((cur - prev) / prev);
            }
        }
    }
    Series { name, dates, values: out }
}

/// a_t − b_t on the date intersection of the two series.
pub fn spread(a: &Series, b: &Series) -> Series {
    let name = format!("{}-{}", a.name, b.name);
    let mut dates = Vec::new();
    let mut values = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a.dates[i].cmp(&b.dates[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                dates.push(a.dates[i]);
                values.push(match (a.values[i], b.values[j]) {
                    (Some(x), Some(y)) => Some(x - y),
                    _ => None,
                });
                i += 1;
                j += 1;
            }
        }
    }
    Series { name, dates, values }
}

/// s_t − s_{t−1}; first element missing.
pub fn first_diff(s: &Series) -> Series {
    let (name, dates) = s.same_dates(&format!("diff({})", s.name));
    let mut out = vec![None; s.len()];
    for t in 1..s.len() {
        if let (Some(prev), Some(cur)) = (s.values[t - 1], s.values[t]) {
            out[t] = Some(cur - prev);
        }
    }
    Series { name, dates, values: out }
}

/// Day of week as a numeric feature: 0 = Monday … 4 = Friday.
pub fn day_of_week(dates: &[NaiveDate]) -> Series {
    Series {
        name: "Day".into(),
        dates: dates.to_vec(),
        values: dates
            .iter()
            .map(|d| Some(d.weekday().num_days_from_monday() as f64))
            .collect(),
    }
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;

    pub fn dates(n: usize) -> Vec<NaiveDate> {
        let start = NaiveDate::from_ymd_opt(2015, 1, 1).unwrap();
        let mut out = Vec::with_capacity(n);
        let mut d = start;
        while out.len() < n {
            if d.weekday().num_days_from_monday() < 5 {
                out.push(d);
            }
            d = d.succ_opt().unwrap();
        }
        out
    }

    pub fn series(vals: &[f64]) -> Series {
        Series::from_values("s", dates(vals.len()), vals.to_vec()).unwrap()
    }
}
