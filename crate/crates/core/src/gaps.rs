//! Implicit missing observations in regular temporal tables.
//!
//! A gap is an index value that the table's interval says should exist for
//! a key but has no row. Spans are per key by default; with `full` every key
//! is checked against the global first-to-last span of the table.

use rayon::prelude::*;

use crate::agg::AggFn;
use crate::cell::{Cell, CellKind};
use crate::construct::{build, KeyGroup, TemporalTable};
use crate::error::{Error, Result};
use crate::frame::{Column, Frame};
use crate::interval::Interval;
use crate::time::{Granularity, TimePoint, Zone};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyGapFlag {
    pub key: Vec<Cell>,
    pub has_gaps: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRange {
    pub from: TimePoint,
    pub to: TimePoint,
    /// Number of missing index values in `[from, to]`.
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyGaps {
    pub key: Vec<Cell>,
    pub ranges: Vec<GapRange>,
}

/// Maximal missing ranges per key. Keys without gaps are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub key_names: Vec<String>,
    pub entries: Vec<KeyGaps>,
}

impl GapReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of missing index values.
    pub fn total_missing(&self) -> u64 {
        self.entries.iter().flat_map(|e| &e.ranges).map(|r| r.n).sum()
    }

    /// Columns `key..., from, to, n`.
    pub fn to_frame(&self) -> Result<Frame> {
        let mut names: Vec<String> = self.key_names.clone();
        names.extend(["from".into(), "to".into(), "n".into()]);
        let rows = self
            .entries
            .iter()
            .flat_map(|e| {
                e.ranges.iter().map(move |r| {
                    let mut row = e.key.clone();
                    row.extend([Cell::Time(r.from), Cell::Time(r.to), Cell::Int(r.n as i64)]);
                    row
                })
            })
            .collect();
        frame_from_rows(&names, rows, &[CellKind::Time, CellKind::Time, CellKind::Int])
    }
}

/// Like `Frame::from_rows`, but keeps declared kinds for the trailing
/// columns even when there are no rows.
fn frame_from_rows(names: &[String], rows: Vec<Vec<Cell>>, tail: &[CellKind]) -> Result<Frame> {
    if !rows.is_empty() {
        return Frame::from_rows(names, rows);
    }
    let lead = names.len() - tail.len();
    let columns = names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let kind = if i < lead { CellKind::Text } else { tail[i - lead] };
            Column::new(n.clone(), kind, Vec::new())
        })
        .collect::<Result<Vec<_>>>()?;
    Frame::new(columns)
}

struct KeyMissing {
    group: KeyGroup,
    missing: Vec<i64>,
}

struct GapContext {
    granularity: Granularity,
    zone: Option<Zone>,
    step: i64,
    keys: Vec<KeyMissing>,
}

fn regular_step(t: &TemporalTable) -> Result<i64> {
    match t.interval() {
        Interval::Regular { multiple, .. } => Ok(multiple as i64),
        other => Err(Error::unsupported(format!(
            "gap verbs need a regular interval, found {other}; regularize the index first"
        ))),
    }
}

fn missing_by_key(t: &TemporalTable, full: bool) -> Result<GapContext> {
    let step = regular_step(t)?;
    let ticks: Vec<i64> = t.index_values().iter().map(TimePoint::ticks).collect();
    let granularity = t.index_granularity().expect("regular tables have index values");
    let zone = t.index_zone();
    let groups = t.key_groups();

    let global = (
        ticks.iter().copied().min().unwrap_or(0),
        ticks.iter().copied().max().unwrap_or(0),
    );
    if full {
        if let Some(off) = ticks.iter().find(|&&x| (x - global.0) % step != 0) {
            return Err(Error::unsupported(format!(
                "index value {} is not on the table-wide grid of step {step} starting at {}; \
                 keys are observed at different phases",
                TimePoint::new(*off, granularity),
                TimePoint::new(global.0, granularity)
            )));
        }
    }

    let keys = groups
        .into_par_iter()
        .map(|group| {
            let observed = &ticks[group.rows.clone()];
            let (lo, hi) = if full {
                global
            } else {
                (observed[0], *observed.last().expect("groups are non-empty"))
            };
            let mut missing = Vec::new();
            let mut seen = observed.iter().peekable();
            let mut x = lo;
            while x <= hi {
                if seen.peek() == Some(&&x) {
                    seen.next();
                } else {
                    missing.push(x);
                }
                x += step;
            }
            KeyMissing { group, missing }
        })
        .collect();
    Ok(GapContext {
        granularity,
        zone,
        step,
        keys,
    })
}

/// Whether each key has implicit missing observations.
pub fn has_gaps(t: &TemporalTable, full: bool) -> Result<Vec<KeyGapFlag>> {
    let t = t.canonical();
    let ctx = missing_by_key(&t, full)?;
    Ok(ctx
        .keys
        .into_iter()
        .map(|k| KeyGapFlag {
            key: k.group.key,
            has_gaps: !k.missing.is_empty(),
        })
        .collect())
}

/// One row `(key..., index)` per implicit missing observation.
pub fn scan_gaps(t: &TemporalTable, full: bool) -> Result<Frame> {
    let t = t.canonical();
    let ctx = missing_by_key(&t, full)?;
    let mut names: Vec<String> = t.key().to_vec();
    names.push(t.index().to_owned());
    let rows = ctx
        .keys
        .iter()
        .flat_map(|k| {
            let ctx = &ctx;
            k.missing.iter().map(move |&tick| {
                let mut row = k.group.key.clone();
                row.push(Cell::Time(TimePoint::new(tick, ctx.granularity).with_zone(ctx.zone)));
                row
            })
        })
        .collect();
    let mut frame = frame_from_rows(&names, rows, &[CellKind::Time])?;
    if frame.nrows() == 0 {
        // Keep the key columns' kinds from the source table.
        let cols = t
            .key()
            .iter()
            .map(|k| Ok(t.frame().require(k)?.take(&[])))
            .collect::<Result<Vec<_>>>()?;
        for c in cols {
            frame.set_column(c)?;
        }
    }
    Ok(frame)
}

/// Missing index values merged into maximal consecutive ranges.
pub fn count_gaps(t: &TemporalTable, full: bool) -> Result<GapReport> {
    let t = t.canonical();
    let ctx = missing_by_key(&t, full)?;
    let make = |tick| TimePoint::new(tick, ctx.granularity).with_zone(ctx.zone);
    let entries = ctx
        .keys
        .iter()
        .filter(|k| !k.missing.is_empty())
        .map(|k| {
            let mut ranges: Vec<GapRange> = Vec::new();
            for &tick in &k.missing {
                match ranges.last_mut() {
                    Some(r) if tick - r.to.ticks() == ctx.step => {
                        r.to = make(tick);
                        r.n += 1;
                    }
                    _ => ranges.push(GapRange {
                        from: make(tick),
                        to: make(tick),
                        n: 1,
                    }),
                }
            }
            KeyGaps {
                key: k.group.key.clone(),
                ranges,
            }
        })
        .collect();
    Ok(GapReport {
        key_names: t.key().to_vec(),
        entries,
    })
}

/// How a measured column is populated in rows created by [`fill_gaps`].
#[derive(Debug, Clone, PartialEq)]
pub enum FillPolicy {
    Missing,
    Constant(Cell),
    /// Aggregate of the key's observed values in that column.
    Aggregate(AggFn),
}

/// Turn implicit missing observations into explicit rows.
///
/// Columns without a policy receive missing markers. Existing rows are
/// never modified.
pub fn fill_gaps(t: &TemporalTable, fills: &[(String, FillPolicy)], full: bool) -> Result<TemporalTable> {
    let t = t.canonical();
    for (name, policy) in fills {
        let col = t.frame().require(name)?;
        if name == t.index() || t.key().contains(name) {
            return Err(Error::schema(format!(
                "cannot fill index or key column `{name}`; they come from the gap itself"
            )));
        }
        match policy {
            FillPolicy::Constant(c) => {
                if let Some(k) = c.kind() {
                    if k != col.kind() {
                        return Err(Error::schema(format!(
                            "fill value for `{name}` is {k}, but the column holds {}",
                            col.kind()
                        )));
                    }
                }
            }
            FillPolicy::Aggregate(f) => {
                let out = f.output_kind(col.kind())?;
                if out != col.kind() {
                    return Err(Error::schema(format!(
                        "{f} of {} column `{name}` yields {out} values",
                        col.kind()
                    )));
                }
            }
            FillPolicy::Missing => {}
        }
    }

    let ctx = missing_by_key(&t, full)?;
    let frame = t.frame();
    let mut new_cols: Vec<Vec<Cell>> = vec![Vec::new(); frame.ncols()];
    for k in ctx.keys.iter().filter(|k| !k.missing.is_empty()) {
        let mut per_col: Vec<Cell> = Vec::with_capacity(frame.ncols());
        for col in frame.columns() {
            let name = col.name();
            let cell = if let Some(pos) = t.key().iter().position(|n| n == name) {
                k.group.key[pos].clone()
            } else {
                match fills.iter().find(|(n, _)| n == name).map(|(_, p)| p) {
                    None | Some(FillPolicy::Missing) => Cell::Missing,
                    Some(FillPolicy::Constant(c)) => c.clone(),
                    Some(FillPolicy::Aggregate(f)) => f.apply(col.kind(), &col.values()[k.group.rows.clone()])?,
                }
            };
            per_col.push(cell);
        }
        for &tick in &k.missing {
            for (i, col) in frame.columns().iter().enumerate() {
                let cell = if col.name() == t.index() {
                    Cell::Time(TimePoint::new(tick, ctx.granularity).with_zone(ctx.zone))
                } else {
                    per_col[i].clone()
                };
                new_cols[i].push(cell);
            }
        }
    }

    let added = Frame::new(
        frame
            .columns()
            .iter()
            .zip(new_cols)
            .map(|(c, v)| Column::new(c.name(), c.kind(), v))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let combined = frame.concat(&added)?;
    let mut out = build(combined, t.index(), t.key(), t.is_declared_regular())?;
    out.grouping = t.grouping.clone();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ordinal_table(series: &[(&str, &[i64])]) -> TemporalTable {
        let rows = series
            .iter()
            .flat_map(|(k, xs)| {
                xs.iter()
                    .map(move |&x| vec![Cell::text(k), Cell::Time(TimePoint::ordinal(x)), Cell::Int(x * 10)])
            })
            .collect();
        let raw = Frame::from_rows(&["id", "t", "v"], rows).unwrap();
        build(raw, "t", &["id"], true).unwrap()
    }

    fn year_table(series: &[(&str, &[i64])]) -> TemporalTable {
        let rows = series
            .iter()
            .flat_map(|(k, xs)| {
                xs.iter()
                    .map(move |&x| vec![Cell::text(k), Cell::Time(TimePoint::year(x)), Cell::Int(x)])
            })
            .collect();
        let raw = Frame::from_rows(&["id", "year", "count"], rows).unwrap();
        build(raw, "year", &["id"], true).unwrap()
    }

    #[test]
    fn has_gaps_examples() {
        let t = year_table(&[("A", &[2010, 2011, 2013])]);
        assert!(has_gaps(&t, false).unwrap()[0].has_gaps);
        let t = year_table(&[("A", &[2010, 2011, 2012])]);
        assert!(!has_gaps(&t, false).unwrap()[0].has_gaps);
        let t = year_table(&[("A", &[2010, 2011, 2012]), ("B", &[2011, 2012])]);
        let flags = has_gaps(&t, true).unwrap();
        assert!(!flags[0].has_gaps);
        assert!(flags[1].has_gaps);
    }

    #[test]
    fn scan_and_count_ordinal() {
        let t = ordinal_table(&[("A", &[1, 2, 5, 6, 9])]);
        let scan = scan_gaps(&t, false).unwrap();
        let got: Vec<i64> = scan
            .require("t")
            .unwrap()
            .values()
            .iter()
            .map(|c| c.as_time().unwrap().ticks())
            .collect();
        assert_eq!(got, vec![3, 4, 7, 8]);
        let report = count_gaps(&t, false).unwrap();
        let ranges: Vec<(i64, i64, u64)> = report.entries[0]
            .ranges
            .iter()
            .map(|r| (r.from.ticks(), r.to.ticks(), r.n))
            .collect();
        assert_eq!(ranges, vec![(3, 4, 2), (7, 8, 2)]);
    }

    #[test]
    fn no_gaps_means_empty_outputs() {
        let t = ordinal_table(&[("A", &[1, 2, 3])]);
        assert_eq!(scan_gaps(&t, false).unwrap().nrows(), 0);
        assert!(count_gaps(&t, false).unwrap().is_empty());
    }

    #[test]
    fn single_missing_value_range() {
        let t = ordinal_table(&[("A", &[1, 3])]);
        // gcd(2) = 2, so 1 and 3 are adjacent; add a unit step elsewhere.
        assert!(count_gaps(&t, false).unwrap().is_empty());
        let t = ordinal_table(&[("A", &[1, 3]), ("B", &[1, 2])]);
        let r = count_gaps(&t, false).unwrap();
        assert_eq!(r.entries.len(), 1);
        let g = &r.entries[0].ranges[0];
        assert_eq!((g.from.ticks(), g.to.ticks(), g.n), (2, 2, 1));
    }

    #[test]
    fn fill_policies() {
        let t = year_table(&[("A", &[2010, 2011, 2013])]);
        let filled = fill_gaps(&t, &[], false).unwrap();
        assert_eq!(filled.nrows(), 4);
        assert_eq!(filled.frame().require("count").unwrap().get(2), &Cell::Missing);
        assert_eq!(filled.frame().require("id").unwrap().get(2), &Cell::text("A"));

        let zero = vec![("count".to_owned(), FillPolicy::Constant(Cell::Int(0)))];
        let filled = fill_gaps(&t, &zero, false).unwrap();
        assert_eq!(filled.frame().require("count").unwrap().get(2), &Cell::Int(0));

        let wrong = vec![("count".to_owned(), FillPolicy::Constant(Cell::text("zero")))];
        assert!(matches!(fill_gaps(&t, &wrong, false), Err(Error::Schema(_))));
    }

    #[test]
    fn aggregate_fill_uses_the_key_only() {
        let rows = vec![
            vec![Cell::text("A"), Cell::Time(TimePoint::ordinal(1)), Cell::Real(1.0)],
            vec![Cell::text("A"), Cell::Time(TimePoint::ordinal(3)), Cell::Real(3.0)],
            vec![Cell::text("A"), Cell::Time(TimePoint::ordinal(4)), Cell::Real(5.0)],
            vec![Cell::text("B"), Cell::Time(TimePoint::ordinal(1)), Cell::Real(100.0)],
        ];
        let raw = Frame::from_rows(&["id", "t", "v"], rows).unwrap();
        let t = build(raw, "t", &["id"], true).unwrap();
        let mean = vec![("v".to_owned(), FillPolicy::Aggregate(AggFn::Mean))];
        let filled = fill_gaps(&t, &mean, false).unwrap();
        assert_eq!(filled.frame().require("v").unwrap().get(1), &Cell::Real(3.0));
    }

    #[test]
    fn balanced_panel() {
        let t = ordinal_table(&[("A", &[1, 2, 3]), ("B", &[2, 3])]);
        let filled = fill_gaps(&t, &[], true).unwrap();
        assert_eq!(filled.nrows(), 6);
        let sizes: Vec<usize> = filled.key_groups().iter().map(|g| g.rows.len()).collect();
        assert_eq!(sizes, vec![3, 3]);
    }

    #[test]
    fn irregular_tables_are_refused() {
        let rows = vec![vec![Cell::text("A"), Cell::Time(TimePoint::ordinal(1))]];
        let raw = Frame::from_rows(&["id", "t"], rows).unwrap();
        let t = build(raw.clone(), "t", &["id"], false).unwrap();
        assert!(matches!(has_gaps(&t, false), Err(Error::Unsupported(_))));
        let t = build(raw, "t", &["id"], true).unwrap();
        assert_eq!(t.interval(), Interval::Unknown);
        assert!(matches!(scan_gaps(&t, false), Err(Error::Unsupported(_))));
    }

    #[test]
    fn misaligned_phases_refused_under_full() {
        let t = ordinal_table(&[("A", &[0, 2, 4]), ("B", &[1, 3])]);
        assert!(scan_gaps(&t, false).unwrap().nrows() == 0);
        assert!(matches!(scan_gaps(&t, true), Err(Error::Unsupported(_))));
    }
}
