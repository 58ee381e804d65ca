#![allow(dead_code)]

use std::path::PathBuf;

use tempora_core::{build, ingest, Cell, Frame, IngestConfig, TemporalTable, TimePoint};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

/// The twelve tuberculosis rows, keyed by country and gender.
pub fn tb() -> TemporalTable {
    ingest(&IngestConfig::new(fixture("tb.csv"), "year").key(&["country", "gender"])).unwrap()
}

pub fn tb_raw() -> Frame {
    tempora_core::read_csv(
        std::fs::File::open(fixture("tb.csv")).unwrap(),
        &IngestConfig::new("", "year"),
    )
    .unwrap()
}

/// Ordinal series: one `(key, ticks)` list per key, value = tick.
pub fn ordinal_panel(keys: &[(&str, &[i64])]) -> TemporalTable {
    let rows = keys
        .iter()
        .flat_map(|(k, ticks)| {
            ticks
                .iter()
                .map(move |&t| vec![Cell::text(k), Cell::Time(TimePoint::ordinal(t)), Cell::Int(t)])
        })
        .collect();
    let raw = Frame::from_rows(&["id", "t", "v"], rows).unwrap();
    build(raw, "t", &["id"], true).unwrap()
}

pub fn ints(t: &TemporalTable, column: &str) -> Vec<i64> {
    t.frame()
        .require(column)
        .unwrap()
        .values()
        .iter()
        .map(|c| c.as_i64().unwrap())
        .collect()
}
