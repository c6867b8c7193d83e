//! The ten-indicator set used by the shallow-ANN baseline: SMA, EMA,
//! momentum, stochastic %K/%D, RSI, MACD, Williams %R, A/D oscillator,
//! and CCI. Periods default to 10 days where the source material names
//! the indicator without one; MACD always uses the 12/26 EMA pair.

use crate::error::Result;
use crate::indicators::{ema, Ohlcv, Series};

pub const DEFAULT_PERIOD: usize = 10;

/// Names in canonical column order.
pub const KARA_NAMES: [&str; 10] = [
    "SMA", "EMA", "MOM", "K", "D", "RSI", "MACD", "R", "AD", "CCI",
];

/// Simple moving average over the trailing `n` bars.
pub fn sma(s: &Series, n: usize) -> Series {
    assert!(n >= 1);
    let mut out = vec![None; s.len()];
    for t in 0..s.len() {
        if t + 1 >= n {
            let window = &s.values[t + 1 - n..=t];
            if window.iter().all(|v| v.is_some()) {
                out[t] = Some(window.iter().flatten().sum::<f64>() / n as f64);
            }
        }
    }
    Series {
        name: format!("sma{}({})", n, s.name),
        dates: s.dates.clone(),
        values: out,
    }
}

/// close_t − close_{t−n}.
pub fn momentum(close: &Series, n: usize) -> Series {
    let mut out = vec![None; close.len()];
    for t in n..close.len() {
        if let (Some(past), Some(cur)) = (close.values[t - n], close.values[t]) {
            out[t] = Some(cur - past);
        }
    }
    Series {
        name: format!("mom{}({})", n, close.name),
        dates: close.dates.clone(),
        values: out,
    }
}

fn window_extrema(high: &[f64], low: &[f64], t: usize, n: usize) -> Option<(f64, f64)> {
    if t + 1 < n {
        return None;
    }
    let hh = high[t + 1 - n..=t].iter().cloned().fold(f64::MIN, f64::max);
    let ll = low[t + 1 - n..=t].iter().cloned().fold(f64::MAX, f64::min);
    Some((hh, ll))
}

/// Stochastic %K = 100·(close − LL_n)/(HH_n − LL_n). A flat window
/// (HH == LL) yields a missing value.
pub fn stochastic_k(bars: &Ohlcv, n: usize) -> Series {
    let mut out = vec![None; bars.len()];
    for t in 0..bars.len() {
        if let Some((hh, ll)) = window_extrema(&bars.high, &bars.low, t, n) {
            if hh != ll {
                out[t] = Some(100.0 * (bars.close[t] - ll) / (hh - ll));
            }
        }
    }
    Series {
        name: "K".into(),
        dates: bars.dates.clone(),
        values: out,
    }
}

/// Williams %R = −100·(HH_n − close)/(HH_n − LL_n).
pub fn williams_r(bars: &Ohlcv, n: usize) -> Series {
    let mut out = vec![None; bars.len()];
    for t in 0..bars.len() {
        if let Some((hh, ll)) = window_extrema(&bars.high, &bars.low, t, n) {
            if hh != ll {
                out[t] = Some(-100.0 * (hh - bars.close[t]) / (hh - ll));
            }
        }
    }
    Series {
        name: "R".into(),
        dates: bars.dates.clone(),
        values: out,
    }
}

/// RSI with Wilder smoothing: the first average gain/loss is the simple
/// mean of the first `n` one-day changes; afterwards
/// avg = (prev·(n−1) + current)/n. Flat history maps to 50, all-gain
/// to 100.
pub fn rsi(close: &Series, n: usize) -> Result<Series> {
    assert!(n >= 1);
    let start = close.contiguous_tail_start()?;
    let mut out = vec![None; close.len()];
    if close.len() - start > n {
        let v = |i: usize| close.values[i].expect("contiguous tail");
        let mut avg_gain = 0.0;
        let mut avg_loss = 0.0;
        for t in start + 1..=start + n {
            let change = v(t) - v(t - 1);
            if change > 0.0 {
                avg_gain += change;
            } else {
                avg_loss -= change;
            }
        }
        avg_gain /= n as f64;
        avg_loss /= n as f64;
        let rsi_value = |gain: f64, loss: f64| {
            if gain + loss == 0.0 {
                50.0
            } else {
                100.0 * gain / (gain + loss)
            }
        };
        out[start + n] = Some(rsi_value(avg_gain, avg_loss));
        for t in start + n + 1..close.len() {
            let change = v(t) - v(t - 1);
            let (gain, loss) = if change > 0.0 {
                (change, 0.0)
            } else {
                (0.0, -change)
            };
            avg_gain = (avg_gain * (n - 1) as f64 + gain) / n as f64;
            avg_loss = (avg_loss * (n - 1) as f64 + loss) / n as f64;
            out[t] = Some(rsi_value(avg_gain, avg_loss));
        }
    }
    Ok(Series {
        name: "RSI".into(),
        dates: close.dates.clone(),
        values: out,
    })
}

/// MACD line: EMA12 − EMA26 of the close.
pub fn macd(close: &Series) -> Result<Series> {
    let fast = ema(close, 12)?;
    let slow = ema(close, 26)?;
    let values = fast
        .values
        .iter()
        .zip(&slow.values)
        .map(|(f, s)| match (f, s) {
            (Some(f), Some(s)) => Some(f - s),
            _ => None,
        })
        .collect();
    Ok(Series {
        name: "MACD".into(),
        dates: close.dates.clone(),
        values,
    })
}

/// A/D oscillator = (high_t − close_{t−1}) / (high_t − low_t).
pub fn ad_oscillator(bars: &Ohlcv) -> Series {
    let mut out = vec![None; bars.len()];
    for t in 1..bars.len() {
        let range = bars.high[t] - bars.low[t];
        if range != 0.0 {
            out[t] = Some((bars.high[t] - bars.close[t - 1]) / range);
        }
    }
    Series {
        name: "AD".into(),
        dates: bars.dates.clone(),
        values: out,
    }
}

/// CCI = (TP − SMA_n(TP)) / (0.015 · mean|TP − SMA_n(TP)|) with
/// TP = (high + low + close)/3.
pub fn cci(bars: &Ohlcv, n: usize) -> Series {
    let tp: Vec<f64> = (0..bars.len())
        .map(|t| (bars.high[t] + bars.low[t] + bars.close[t]) / 3.0)
        .collect();
    let mut out = vec![None; bars.len()];
    for t in 0..bars.len() {
        if t + 1 >= n {
            let window = &tp[t + 1 - n..=t];
            let mean = window.iter().sum::<f64>() / n as f64;
            let mean_dev = window.iter().map(|x| (x - mean).abs()).sum::<f64>() / n as f64;
            if mean_dev != 0.0 {
                out[t] = Some((tp[t] - mean) / (0.015 * mean_dev));
            }
        }
    }
    Series {
        name: "CCI".into(),
        dates: bars.dates.clone(),
        values: out,
    }
}

/// All ten baseline indicators, in [`KARA_NAMES`] order.
pub fn indicators(bars: &Ohlcv, n: usize) -> Result<Vec<Series>> {
    let close = bars.close_series();
    let k = stochastic_k(bars, n);
    let d = sma(&k, 3);
    Ok(vec![
        Series { name: "SMA".into(), ..sma(&close, n) },
        Series { name: "EMA".into(), ..ema(&close, n)? },
        Series { name: "MOM".into(), ..momentum(&close, n) },
        k,
        Series { name: "D".into(), ..d },
        rsi(&close, n)?,
        macd(&close)?,
        williams_r(bars, n),
        ad_oscillator(bars),
        cci(bars, n),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicators::test_util::dates;

    fn bars_from_closes(closes: &[f64]) -> Ohlcv {
        let n = closes.len();
        Ohlcv {
            market: "TEST".into(),
            dates: dates(n),
            open: closes.to_vec(),
            high: closes.iter().map(|c| c * 1.01).collect(),
            low: closes.iter().map(|c| c * 0.99).collect(),
            close: closes.to_vec(),
            adj_close: closes.to_vec(),
            volume: vec![1e6; n],
        }
    }

    #[test]
    fn rising_market_drives_rsi_to_100() {
        let closes: Vec<f64> = (1..=60).map(|i| 100.0 + i as f64).collect();
        let close = Series::from_values("c", dates(60), closes).unwrap();
        let out = rsi(&close, 10).unwrap();
        let last = out.values.last().unwrap().unwrap();
        assert!((last - 100.0).abs() < 1e-9, "rsi = {last}");
    }

    #[test]
    fn constant_market_neutral_indicators() {
        let bars = bars_from_closes(&[50.0; 60]);
        let close = bars.close_series();
        let mom = momentum(&close, 10);
        assert!(mom.values[10..].iter().all(|v| *v == Some(0.0)));
        let line = macd(&close).unwrap();
        assert!(line
            .values
            .iter()
            .flatten()
            .all(|v| v.abs() < 1e-12));
        let out = rsi(&close, 10).unwrap();
        assert!(out.values[10..].iter().all(|v| *v == Some(50.0)));
    }

    #[test]
    fn flat_window_flags_stochastics_missing() {
        let mut bars = bars_from_closes(&[10.0; 20]);
        bars.high = vec![10.0; 20];
        bars.low = vec![10.0; 20];
        let k = stochastic_k(&bars, 10);
        assert!(k.values.iter().all(|v| v.is_none()));
        let r = williams_r(&bars, 10);
        assert!(r.values.iter().all(|v| v.is_none()));
    }

    #[test]
    fn stochastic_bounds() {
        let closes: Vec<f64> = (0..80)
            .map(|i| 100.0 + 10.0 * ((i as f64) * 0.37).sin())
            .collect();
        let bars = bars_from_closes(&closes);
        for v in stochastic_k(&bars, 10).values.iter().flatten() {
            assert!((0.0..=100.0).contains(v));
        }
        for v in williams_r(&bars, 10).values.iter().flatten() {
            assert!((-100.0..=0.0).contains(v));
        }
    }

    #[test]
    fn full_set_has_ten_columns_in_order() {
        let closes: Vec<f64> = (0..120)
            .map(|i| 100.0 + (i as f64 * 0.83).sin() * 5.0 + i as f64 * 0.1)
            .collect();
        let bars = bars_from_closes(&closes);
        let set = indicators(&bars, DEFAULT_PERIOD).unwrap();
        assert_eq!(set.len(), 10);
        for (s, expect) in set.iter().zip(KARA_NAMES) {
            assert_eq!(s.name, expect);
        }
        // Everything defined by bar 40 at default periods.
        for s in &set {
            assert!(
                s.values[40..].iter().all(|v| v.is_some()),
                "column {} has gaps after warm-up",
                s.name
            );
        }
    }
}
