mod common;

use std::collections::BTreeSet;

use common::{ints, ordinal_panel};
use tempora_core::{
    build, count_gaps, fill_gaps, has_gaps, scan_gaps, AggFn, Cell, ErrorClass, FillPolicy, Frame, TimePoint,
};

fn yearly(years: &[i64]) -> tempora_core::TemporalTable {
    let rows = years
        .iter()
        .map(|&y| vec![Cell::text("A"), Cell::Time(TimePoint::year(y)), Cell::Int(y)])
        .collect();
    build(
        Frame::from_rows(&["id", "year", "count"], rows).unwrap(),
        "year",
        &["id"],
        true,
    )
    .unwrap()
}

/// Missing ticks per key by brute-force enumeration of each span.
fn missing_oracle(keys: &[(&str, &[i64])], full: bool) -> Vec<(String, i64)> {
    let all: Vec<i64> = keys.iter().flat_map(|(_, t)| t.iter().copied()).collect();
    let (gmin, gmax) = (*all.iter().min().unwrap(), *all.iter().max().unwrap());
    let mut out = Vec::new();
    for (k, ticks) in keys {
        let have: BTreeSet<i64> = ticks.iter().copied().collect();
        let (lo, hi) = if full {
            (gmin, gmax)
        } else {
            (*have.first().unwrap(), *have.last().unwrap())
        };
        out.extend((lo..=hi).filter(|t| !have.contains(t)).map(|t| (k.to_string(), t)));
    }
    out
}

#[test]
fn has_gaps_examples() {
    assert!(has_gaps(&yearly(&[2010, 2011, 2013]), false).unwrap()[0].has_gaps);
    assert!(!has_gaps(&yearly(&[2010, 2011, 2012]), false).unwrap()[0].has_gaps);

    let keys: [(&str, &[i64]); 2] = [("A", &[2010, 2011, 2012]), ("B", &[2011, 2012])];
    let t = ordinal_panel(&keys);
    let flags: Vec<bool> = has_gaps(&t, true).unwrap().iter().map(|f| f.has_gaps).collect();
    let oracle: Vec<bool> = ["A", "B"]
        .iter()
        .map(|k| missing_oracle(&keys, true).iter().any(|(m, _)| m == k))
        .collect();
    assert_eq!(flags, oracle);
    assert_eq!(flags, [false, true]);
}

#[test]
fn scan_and_count_on_ordinal_series() {
    let keys: [(&str, &[i64]); 1] = [("A", &[1, 2, 5, 6, 9])];
    let t = ordinal_panel(&keys);
    let scanned: Vec<(String, i64)> = scan_gaps(&t, false)
        .unwrap()
        .rows()
        .map(|r| (r[0].to_string(), r[1].as_time().unwrap().ticks()))
        .collect();
    assert_eq!(scanned, missing_oracle(&keys, false));

    let report = count_gaps(&t, false).unwrap();
    let ranges: Vec<(i64, i64, u64)> = report.entries[0]
        .ranges
        .iter()
        .map(|r| (r.from.ticks(), r.to.ticks(), r.n))
        .collect();
    assert_eq!(ranges, [(3, 4, 2), (7, 8, 2)]);
    let frame = report.to_frame().unwrap();
    assert_eq!(frame.names(), ["id", "from", "to", "n"]);
}

#[test]
fn no_gaps_and_single_gap() {
    let t = yearly(&[2010, 2011, 2012]);
    assert_eq!(scan_gaps(&t, false).unwrap().nrows(), 0);
    assert!(count_gaps(&t, false).unwrap().is_empty());

    let t = yearly(&[2010, 2012, 2013]);
    let report = count_gaps(&t, false).unwrap();
    let r = &report.entries[0].ranges[0];
    assert_eq!((r.from, r.to, r.n), (TimePoint::year(2011), TimePoint::year(2011), 1));
}

#[test]
fn fill_examples() {
    let t = yearly(&[2010, 2011, 2013]);
    let filled = fill_gaps(&t, &[], false).unwrap();
    assert_eq!(filled.nrows(), 4);
    let row = filled.frame().row(2);
    assert_eq!(row[1], Cell::Time(TimePoint::year(2012)));
    assert_eq!(row[2], Cell::Missing);

    let zero = fill_gaps(&t, &[("count".into(), FillPolicy::Constant(Cell::Int(0)))], false).unwrap();
    assert_eq!(zero.frame().row(2)[2], Cell::Int(0));

    let err = fill_gaps(&t, &[("count".into(), FillPolicy::Constant(Cell::text("zero")))], false).unwrap_err();
    assert_eq!(err.class(), ErrorClass::Schema);

    let max = fill_gaps(&t, &[("count".into(), FillPolicy::Aggregate(AggFn::Max))], false).unwrap();
    assert_eq!(max.frame().row(2)[2], Cell::Int(2013));
}

#[test]
fn full_span_balances_the_panel() {
    let keys: [(&str, &[i64]); 2] = [("A", &[1, 2, 3]), ("B", &[2, 3])];
    let t = ordinal_panel(&keys);
    let filled = fill_gaps(&t, &[], true).unwrap();
    assert_eq!(filled.nrows(), 6);
    let per_key: Vec<usize> = filled.key_groups().iter().map(|g| g.rows.len()).collect();
    assert_eq!(per_key, [3, 3]);
    assert_eq!(filled.frame().row(3)[1], Cell::Time(TimePoint::ordinal(1)));
    assert_eq!(ints(&t, "v").len() + missing_oracle(&keys, true).len(), 6);
}

#[test]
fn irregular_tables_are_refused() {
    let rows = vec![
        vec![Cell::Time(TimePoint::year(2000))],
        vec![Cell::Time(TimePoint::year(2003))],
    ];
    let t = build(
        Frame::from_rows(&["year"], rows).unwrap(),
        "year",
        &[] as &[&str],
        false,
    )
    .unwrap();
    assert_eq!(has_gaps(&t, false).unwrap_err().class(), ErrorClass::Unsupported);
    assert_eq!(fill_gaps(&t, &[], false).unwrap_err().class(), ErrorClass::Unsupported);
}
