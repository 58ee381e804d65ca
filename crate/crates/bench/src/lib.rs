//! Synthetic panels for benchmarks.

use tempora_core::{build, Cell, Frame, Granularity, TemporalTable, TimePoint};

/// Daily panel with `keys` series of `len` rows; every `hole`-th day is dropped when `hole > 0`.
pub fn daily_panel(keys: usize, len: i64, hole: i64) -> TemporalTable {
    let rows = raw_rows(keys, len, hole);
    build(
        Frame::from_rows(&["id", "day", "x"], rows).unwrap(),
        "day",
        &["id"],
        true,
    )
    .unwrap()
}

/// Rows of [`daily_panel`] before construction, in reverse order.
pub fn raw_rows(keys: usize, len: i64, hole: i64) -> Vec<Vec<Cell>> {
    let mut rows = Vec::with_capacity(keys * len as usize);
    for k in (0..keys).rev() {
        for t in (0..len).rev() {
            if hole > 0 && t % hole == hole - 1 && t != len - 1 {
                continue;
            }
            let x = ((k as i64 * 7919 + t * 104_729) % 1000) as f64 / 10.0;
            rows.push(vec![
                Cell::text(format!("s{k:04}")),
                Cell::Time(TimePoint::new(t, Granularity::Day)),
                Cell::Real(x),
            ]);
        }
    }
    rows
}
