//! CSV readers and writers for bars, single-value series, and tables.
//!
//! Bars: `date,open,high,low,close,adj_close,volume`. Series:
//! `date,value`. ISO-8601 dates, UTF-8, rows sorted by date on load;
//! duplicate or backwards dates are rejected with the offending date.

use std::path::Path;

use chrono::NaiveDate;

use crate::data::FeatureTable;
use crate::error::{DataError, Error, Result};
use crate::indicators::{Ohlcv, Series};

const OHLCV_HEADER: [&str; 7] = ["date", "open", "high", "low", "close", "adj_close", "volume"];
const SERIES_HEADER: [&str; 2] = ["date", "value"];

fn io_err(path: &Path, source: csv::Error) -> Error {
    match source.kind() {
        csv::ErrorKind::Io(_) => {
            if let csv::ErrorKind::Io(io) = source.into_kind() {
                Error::Data(DataError::Io {
                    path: path.display().to_string(),
                    source: io,
                })
            } else {
                unreachable!()
            }
        }
        _ => Error::Data(DataError::Parse {
            path: path.display().to_string(),
            line: source
                .position()
                .map(|p| p.line())
                .unwrap_or_default(),
            reason: source.to_string(),
        }),
    }
}

fn parse_err(path: &Path, line: u64, reason: impl Into<String>) -> Error {
    Error::Data(DataError::Parse {
        path: path.display().to_string(),
        line,
        reason: reason.into(),
    })
}

fn check_header(path: &Path, got: &csv::StringRecord, want: &[&str]) -> Result<()> {
    let fields: Vec<&str> = got.iter().map(str::trim).collect();
    if fields != want {
        return Err(parse_err(
            path,
            1,
            format!("malformed header: expected {:?}, got {:?}", want, fields),
        ));
    }
    Ok(())
}

fn parse_date(path: &Path, line: u64, s: &str) -> Result<NaiveDate> {
    s.trim()
        .parse::<NaiveDate>()
        .map_err(|e| parse_err(path, line, format!("bad date '{s}': {e}")))
}

fn parse_num(path: &Path, line: u64, field: &str, s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|e| parse_err(path, line, format!("bad {field} '{s}': {e}")))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("non-finite {field} '{s}'")));
    }
    Ok(v)
}

fn check_dates_strictly_increasing(path: &Path, dates: &[NaiveDate]) -> Result<()> {
    for w in dates.windows(2) {
        if w[1] == w[0] {
            return Err(Error::Data(DataError::DuplicateDate {
                path: path.display().to_string(),
                date: w[1].to_string(),
            }));
        }
        if w[1] < w[0] {
            return Err(Error::Data(DataError::NonMonotoneDates {
                path: path.display().to_string(),
                date: w[1].to_string(),
            }));
        }
    }
    Ok(())
}

/// Load daily bars. Rows are sorted by date; duplicates rejected.
pub fn load_ohlcv(path: &Path, market: &str) -> Result<Ohlcv> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    check_header(path, reader.headers().map_err(|e| io_err(path, e))?, &OHLCV_HEADER)?;

    let mut rows: Vec<(NaiveDate, [f64; 6], u64)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| io_err(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or_default();
        if record.len() != 7 {
            return Err(parse_err(path, line, format!("expected 7 fields, got {}", record.len())));
        }
        let date = parse_date(path, line, &record[0])?;
        let mut vals = [0.0; 6];
        for (i, field) in OHLCV_HEADER.iter().skip(1).enumerate() {
            vals[i] = parse_num(path, line, field, &record[i + 1])?;
        }
        rows.push((date, vals, line));
    }
    rows.sort_by_key(|r| r.0);
    check_dates_strictly_increasing(path, &rows.iter().map(|r| r.0).collect::<Vec<_>>())?;

    let mut bars = Ohlcv {
        market: market.to_string(),
        dates: Vec::with_capacity(rows.len()),
        open: Vec::with_capacity(rows.len()),
        high: Vec::with_capacity(rows.len()),
        low: Vec::with_capacity(rows.len()),
        close: Vec::with_capacity(rows.len()),
        adj_close: Vec::with_capacity(rows.len()),
        volume: Vec::with_capacity(rows.len()),
    };
    for (date, [open, high, low, close, adj_close, volume], line) in rows {
        let tol = 1e-9 * high.abs().max(1.0);
        if low > open.min(close) + tol || high < open.max(close) - tol {
            return Err(parse_err(
                path,
                line,
                format!("bar violates low ≤ open/close ≤ high: o={open} h={high} l={low} c={close}"),
            ));
        }
        if volume < 0.0 {
            return Err(parse_err(path, line, format!("negative volume {volume}")));
        }
        bars.dates.push(date);
        bars.open.push(open);
        bars.high.push(high);
        bars.low.push(low);
        bars.close.push(close);
        bars.adj_close.push(adj_close);
        bars.volume.push(volume);
    }
    Ok(bars)
}

/// Load a `date,value` series, sorted by date, duplicates rejected.
pub fn load_series(path: &Path, name: &str) -> Result<Series> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    check_header(path, reader.headers().map_err(|e| io_err(path, e))?, &SERIES_HEADER)?;

    let mut rows: Vec<(NaiveDate, f64)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| io_err(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or_default();
        if record.len() != 2 {
            return Err(parse_err(path, line, format!("expected 2 fields, got {}", record.len())));
        }
        let date = parse_date(path, line, &record[0])?;
        let value = parse_num(path, line, "value", &record[1])?;
        rows.push((date, value));
    }
    rows.sort_by_key(|r| r.0);
    check_dates_strictly_increasing(path, &rows.iter().map(|r| r.0).collect::<Vec<_>>())?;
    let (dates, values): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    Series::from_values(name, dates, values)
}

pub fn write_ohlcv(path: &Path, bars: &Ohlcv) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    writer.write_record(OHLCV_HEADER).map_err(|e| io_err(path, e))?;
    for i in 0..bars.len() {
        writer
            .write_record(&[
                bars.dates[i].to_string(),
                format!("{:.6}", bars.open[i]),
                format!("{:.6}", bars.high[i]),
                format!("{:.6}", bars.low[i]),
                format!("{:.6}", bars.close[i]),
                format!("{:.6}", bars.adj_close[i]),
                format!("{:.2}", bars.volume[i]),
            ])
            .map_err(|e| io_err(path, e))?;
    }
    writer.flush().map_err(|e| {
        Error::Data(DataError::Io {
            path: path.display().to_string(),
            source: e,
        })
    })
}

pub fn write_series(path: &Path, series: &Series) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    writer.write_record(SERIES_HEADER).map_err(|e| io_err(path, e))?;
    for (date, value) in series.dates.iter().zip(&series.values) {
        let v = value.ok_or_else(|| {
            Error::invalid_data(format!("series {} has missing values; cannot write", series.name))
        })?;
        writer
            .write_record(&[date.to_string(), format!("{v:.6}")])
            .map_err(|e| io_err(path, e))?;
    }
    writer.flush().map_err(|e| {
        Error::Data(DataError::Io {
            path: path.display().to_string(),
            source: e,
        })
    })
}

/// Feature table as CSV: `date` plus one column per feature.
pub fn write_feature_table(path: &Path, table: &FeatureTable) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    let mut header = vec!["date".to_string()];
    header.extend(table.names.iter().cloned());
    writer.write_record(&header).map_err(|e| io_err(path, e))?;
    for r in 0..table.rows() {
        let mut record = vec![table.dates[r].to_string()];
        record.extend(table.columns.iter().map(|c| format!("{:.10e}", c[r])));
        writer.write_record(&record).map_err(|e| io_err(path, e))?;
    }
    writer.flush().map_err(|e| {
        Error::Data(DataError::Io {
            path: path.display().to_string(),
            source: e,
        })
    })
}

/// Read back a feature-table CSV (for inspection and tests).
pub fn read_feature_table(path: &Path, market: &str) -> Result<FeatureTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    let header = reader.headers().map_err(|e| io_err(path, e))?.clone();
    if header.len() < 2 || &header[0] != "date" {
        return Err(parse_err(path, 1, "expected 'date' plus feature columns"));
    }
    let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut dates = Vec::new();
    let mut columns = vec![Vec::new(); names.len()];
    for record in reader.records() {
        let record = record.map_err(|e| io_err(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or_default();
        dates.push(parse_date(path, line, &record[0])?);
        for (i, field) in record.iter().skip(1).enumerate() {
            columns[i].push(parse_num(path, line, &names[i], field)?);
        }
    }
    check_dates_strictly_increasing(path, &dates)?;
    let label_close = match names.iter().position(|n| n == "Close") {
        Some(i) => columns[i].clone(),
        None => vec![f64::NAN; dates.len()],
    };
    let table = FeatureTable {
        market: market.to_string(),
        dates,
        names,
        columns,
        label_close,
        normalized: false,
    };
    table.validate()?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn two_row_file_loads() {
        let f = write_tmp(
            "date,open,high,low,close,adj_close,volume\n\
             2020-01-02,10,11,9,10.5,10.5,1000\n\
             2020-01-03,10.5,12,10,11.5,11.5,1200\n",
        );
        let bars = load_ohlcv(f.path(), "X").unwrap();
        assert_eq!(bars.len(), 2);
        assert_eq!(bars.close[1], 11.5);
    }

    #[test]
    fn duplicate_date_rejected_with_date() {
        let f = write_tmp(
            "date,open,high,low,close,adj_close,volume\n\
             2020-01-02,10,11,9,10.5,10.5,1000\n\
             2020-01-02,10,11,9,10.5,10.5,1000\n",
        );
        let err = load_ohlcv(f.path(), "X").unwrap_err().to_string();
        assert!(err.contains("duplicate date 2020-01-02"), "{err}");
    }

    #[test]
    fn unparsable_row_names_the_line() {
        let f = write_tmp(
            "date,open,high,low,close,adj_close,volume\n\
             2020-01-02,10,11,9,10.5,10.5,1000\n\
             2020-01-03,oops,11,9,10.5,10.5,1000\n",
        );
        let err = load_ohlcv(f.path(), "X").unwrap_err().to_string();
        assert!(err.contains(":3:"), "{err}");
        assert!(err.contains("open"), "{err}");
    }

    #[test]
    fn malformed_header_rejected() {
        let f = write_tmp("date,close\n2020-01-02,5\n");
        let err = load_ohlcv(f.path(), "X").unwrap_err().to_string();
        assert!(err.contains("malformed header"), "{err}");
    }

    #[test]
    fn bar_sanity_enforced() {
        let f = write_tmp(
            "date,open,high,low,close,adj_close,volume\n\
             2020-01-02,10,9,9,10.5,10.5,1000\n",
        );
        assert!(load_ohlcv(f.path(), "X").is_err());
        let f = write_tmp(
            "date,open,high,low,close,adj_close,volume\n\
             2020-01-02,10,11,9,10.5,10.5,-5\n",
        );
        assert!(load_ohlcv(f.path(), "X").is_err());
    }

    #[test]
    fn series_roundtrip_and_sorting() {
        let f = write_tmp("date,value\n2020-01-03,2.5\n2020-01-02,1.5\n");
        let s = load_series(f.path(), "v").unwrap();
        assert_eq!(s.values, vec![Some(1.5), Some(2.5)]);

        let out = tempfile::NamedTempFile::new().unwrap();
        write_series(out.path(), &s).unwrap();
        let back = load_series(out.path(), "v").unwrap();
        assert_eq!(back.dates, s.dates);
        assert_eq!(back.values, s.values);
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_series(Path::new("/nonexistent/x.csv"), "v")
            .unwrap_err()
            .to_string();
        assert!(err.contains("/nonexistent/x.csv"), "{err}");
    }

    #[test]
    fn large_file_loads_quickly() {
        let mut content = String::from("date,open,high,low,close,adj_close,volume\n");
        let mut date = chrono::NaiveDate::from_ymd_opt(2014, 1, 1).unwrap();
        for _ in 0..2000 {
            content.push_str(&format!("{date},10,11,9,10.5,10.5,1000\n"));
            date = date.succ_opt().unwrap();
        }
        let f = write_tmp(&content);
        let start = std::time::Instant::now();
        let bars = load_ohlcv(f.path(), "X").unwrap();
        assert_eq!(bars.len(), 2000);
        assert!(start.elapsed().as_secs_f64() < 1.0);
    }
}
