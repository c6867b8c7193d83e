//! Calendar alignment: project shared series onto a target market's
//! trading days by carrying each series' last known value forward.
//!
//! A date before a series' first observation stays missing — forward
//! fill never invents history and never reads a future value.

use chrono::NaiveDate;

use crate::indicators::Series;

/// Forward-fill `series` onto `calendar`. For each calendar date the
/// value is the series' most recent observation at or before that date.
pub fn align_to_calendar(calendar: &[NaiveDate], series: &Series) -> Series {
    let mut values = Vec::with_capacity(calendar.len());
    let mut src = 0usize;
    let mut last: Option<f64> = None;
    for day in calendar {
        while src < series.len() && series.dates[src] <= *day {
            if let Some(v) = series.values[src] {
                last = Some(v);
            }
            src += 1;
        }
        values.push(last);
    }
    Series {
        name: series.name.clone(),
        dates: calendar.to_vec(),
        values,
    }
}

/// Align every series onto the calendar and drop the leading dates on
/// which any series is still undefined. Returns the retained calendar
/// offset along with the aligned series.
pub fn align_all(calendar: &[NaiveDate], series: &[Series]) -> (usize, Vec<Series>) {
    let aligned: Vec<Series> = series.iter().map(|s| align_to_calendar(calendar, s)).collect();
    let offset = aligned
        .iter()
        .map(|s| s.first_defined().unwrap_or(s.len()))
        .max()
        .unwrap_or(0);
    (offset, aligned)
}
