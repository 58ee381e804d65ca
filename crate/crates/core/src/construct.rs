//! Building validated temporal tables from plain frames.

use std::borrow::Cow;
use std::collections::HashMap;
use std::ops::Range;

use crate::cell::{Cell, CellKind};
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::interval::{infer_interval, Interval};
use crate::time::{Granularity, TimePoint};
use crate::verbs::Grouping;

/// A frame with a declared time index, an identifying key and an inferred
/// interval.
///
/// Invariants, established by [`build`] and preserved by every verb:
/// * `(key tuple, index)` pairs are unique;
/// * rows are sorted by key tuple (declared column order, missing last),
///   then by index ascending, unless the table is marked order-dirty by
///   [`crate::verbs::arrange`];
/// * the index column holds time points of a single granularity and is not
///   part of the key.
#[derive(Debug, Clone)]
pub struct TemporalTable {
    pub(crate) frame: Frame,
    pub(crate) index: String,
    pub(crate) key: Vec<String>,
    pub(crate) interval: Interval,
    pub(crate) regular: bool,
    pub(crate) grouping: Option<Grouping>,
    pub(crate) order_dirty: bool,
}

/// One distinct key tuple and the rows it spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyGroup {
    pub key: Vec<Cell>,
    pub rows: Range<usize>,
}

/// Rows sharing a `(key, index)` pair with at least one other row.
#[derive(Debug, Clone, PartialEq)]
pub struct DuplicateReport {
    /// Zero-based positions in the source frame, ascending.
    pub positions: Vec<usize>,
    /// The offending rows, in source order.
    pub rows: Frame,
    pub(crate) index: String,
    pub(crate) key: Vec<String>,
}

impl DuplicateReport {
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// The first duplicated pair as `(label, first position, second position)`.
    pub fn first_pair(&self) -> Option<(String, usize, usize)> {
        let ids = pair_ids(&self.rows, &self.key, &self.index).ok()?;
        let mut first_seen: HashMap<&[Cell], usize> = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if let Some(&j) = first_seen.get(id.as_slice()) {
                let label = id.iter().map(Cell::to_string).collect::<Vec<_>>().join(", ");
                return Some((format!("({label})"), self.positions[j], self.positions[i]));
            }
            first_seen.insert(id, i);
        }
        None
    }
}

fn pair_ids(frame: &Frame, key: &[String], index: &str) -> Result<Vec<Vec<Cell>>> {
    let cols = key
        .iter()
        .map(String::as_str)
        .chain(std::iter::once(index))
        .map(|n| frame.require(n))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..frame.nrows())
        .map(|r| cols.iter().map(|c| c.get(r).clone()).collect())
        .collect())
}

fn check_columns(raw: &Frame, index: &str, key: &[String]) -> Result<()> {
    raw.require(index)?;
    for (i, k) in key.iter().enumerate() {
        raw.require(k)?;
        if k == index {
            return Err(Error::schema(format!(
                "index column `{index}` cannot be part of the key"
            )));
        }
        if key[..i].contains(k) {
            return Err(Error::schema(format!("key column `{k}` listed twice")));
        }
    }
    Ok(())
}

/// All rows participating in a duplicated `(key, index)` pair, in source
/// order. Empty exactly when [`build`] would pass its uniqueness check.
pub fn duplicates<S: AsRef<str>>(raw: &Frame, index: &str, key: &[S]) -> Result<DuplicateReport> {
    let key: Vec<String> = key.iter().map(|k| k.as_ref().to_owned()).collect();
    check_columns(raw, index, &key)?;
    let ids = pair_ids(raw, &key, index)?;
    let mut counts: HashMap<&[Cell], usize> = HashMap::with_capacity(ids.len());
    for id in &ids {
        *counts.entry(id.as_slice()).or_default() += 1;
    }
    let positions: Vec<usize> = ids
        .iter()
        .enumerate()
        .filter(|(_, id)| counts[id.as_slice()] > 1)
        .map(|(i, _)| i)
        .collect();
    Ok(DuplicateReport {
        rows: raw.take(&positions),
        positions,
        index: index.to_owned(),
        key,
    })
}

/// Stable permutation sorting rows by key tuple, then index.
pub(crate) fn canonical_order(frame: &Frame, key: &[String], index: &str) -> Result<Vec<usize>> {
    let key_cols = key.iter().map(|k| frame.require(k)).collect::<Result<Vec<_>>>()?;
    let idx = frame.require(index)?;
    let mut order: Vec<usize> = (0..frame.nrows()).collect();
    order.sort_by(|&a, &b| {
        key_cols
            .iter()
            .map(|c| c.get(a).cmp(c.get(b)))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| idx.get(a).cmp(idx.get(b)))
    });
    Ok(order)
}

/// Validate `raw` and turn it into a [`TemporalTable`].
///
/// Rows are sorted by key then index; no cell is altered or dropped. With
/// `regular` the interval is inferred from index differences, otherwise it
/// is [`Interval::Irregular`].
pub fn build<S: AsRef<str>>(raw: Frame, index: &str, key: &[S], regular: bool) -> Result<TemporalTable> {
    let key: Vec<String> = key.iter().map(|k| k.as_ref().to_owned()).collect();
    check_columns(&raw, index, &key)?;

    let idx = raw.require(index)?;
    if idx.kind() != CellKind::Time {
        return Err(Error::schema(format!(
            "index column `{index}` holds {} values, not time points",
            idx.kind()
        )));
    }
    let mut granularity: Option<Granularity> = None;
    for (row, cell) in idx.values().iter().enumerate() {
        let t = cell
            .as_time()
            .ok_or_else(|| Error::Validity(format!("index column `{index}` is missing a value in row {}", row + 1)))?;
        match granularity {
            None => granularity = Some(t.granularity()),
            Some(g) if g != t.granularity() => {
                return Err(Error::schema(format!(
                    "index column `{index}` mixes {g} and {} time points",
                    t.granularity()
                )))
            }
            Some(_) => {}
        }
    }

    let order = canonical_order(&raw, &key, index)?;
    let frame = raw.take(&order);
    let has_dup = {
        let ids = pair_ids(&frame, &key, index)?;
        ids.windows(2).any(|w| w[0] == w[1])
    };
    if has_dup {
        return Err(Error::Duplicated(Box::new(duplicates(&raw, index, &key)?)));
    }

    let mut table = TemporalTable {
        frame,
        index: index.to_owned(),
        key,
        interval: Interval::Unknown,
        regular,
        grouping: None,
        order_dirty: false,
    };
    table.interval = table.infer_interval()?;
    Ok(table)
}

impl TemporalTable {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn into_frame(self) -> Frame {
        self.frame
    }

    pub fn index(&self) -> &str {
        &self.index
    }

    pub fn key(&self) -> &[String] {
        &self.key
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Whether the table was declared regular at construction.
    pub fn is_declared_regular(&self) -> bool {
        self.regular
    }

    pub fn grouping(&self) -> Option<&Grouping> {
        self.grouping.as_ref()
    }

    pub fn is_order_dirty(&self) -> bool {
        self.order_dirty
    }

    pub fn nrows(&self) -> usize {
        self.frame.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.frame.ncols()
    }

    pub fn index_values(&self) -> Vec<TimePoint> {
        self.frame
            .require(&self.index)
            .expect("index column present")
            .values()
            .iter()
            .filter_map(|c| c.as_time().copied())
            .collect()
    }

    pub fn index_granularity(&self) -> Option<Granularity> {
        self.frame
            .require(&self.index)
            .ok()?
            .values()
            .iter()
            .find_map(|c| c.as_time().map(TimePoint::granularity))
    }

    /// Zone label of a date-time index, if any.
    pub fn index_zone(&self) -> Option<crate::time::Zone> {
        self.frame
            .require(&self.index)
            .ok()?
            .values()
            .iter()
            .find_map(|c| c.as_time().and_then(TimePoint::zone))
    }

    pub fn key_tuple(&self, row: usize) -> Vec<Cell> {
        self.key
            .iter()
            .map(|k| self.frame.require(k).expect("key column present").get(row).clone())
            .collect()
    }

    /// One entry per distinct key tuple, in row order.
    pub fn key_groups(&self) -> Vec<KeyGroup> {
        let table = self.canonical();
        let mut groups: Vec<KeyGroup> = Vec::new();
        for row in 0..table.nrows() {
            let key = table.key_tuple(row);
            match groups.last_mut() {
                Some(g) if g.key == key => g.rows.end = row + 1,
                _ => groups.push(KeyGroup {
                    key,
                    rows: row..row + 1,
                }),
            }
        }
        groups
    }

    pub fn n_keys(&self) -> usize {
        self.key_groups().len()
    }

    /// This table in canonical order, re-sorting only if an earlier
    /// `arrange` left it order-dirty.
    pub fn canonical(&self) -> Cow<'_, TemporalTable> {
        if !self.order_dirty {
            return Cow::Borrowed(self);
        }
        let order = canonical_order(&self.frame, &self.key, &self.index).expect("valid table");
        Cow::Owned(TemporalTable {
            frame: self.frame.take(&order),
            order_dirty: false,
            ..self.clone()
        })
    }

    pub(crate) fn infer_interval(&self) -> Result<Interval> {
        let table = self.canonical();
        let idx = table.frame.require(&table.index)?;
        let per_key: Vec<Vec<TimePoint>> = table
            .key_groups()
            .into_iter()
            .map(|g| {
                idx.values()[g.rows]
                    .iter()
                    .filter_map(|c| c.as_time().copied())
                    .collect()
            })
            .collect();
        infer_interval(&per_key, self.regular)
    }

    /// Re-run every construction check against this table.
    pub fn validate(&self) -> Result<()> {
        let rebuilt = build(self.frame.clone(), &self.index, &self.key, self.regular)?;
        if !self.order_dirty && rebuilt.frame != self.frame {
            return Err(Error::Validity("rows are not in (key, index) order".into()));
        }
        if rebuilt.interval != self.interval {
            return Err(Error::Validity(format!(
                "stored interval {} disagrees with inferred {}",
                self.interval, rebuilt.interval
            )));
        }
        if let Interval::Regular { multiple, .. } = self.interval {
            let values = rebuilt.index_values();
            for g in rebuilt.key_groups() {
                for w in values[g.rows].windows(2) {
                    if (w[1].ticks() - w[0].ticks()) % multiple as i64 != 0 {
                        return Err(Error::Validity("index step is not a multiple of the interval".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Human-readable notes about unusual but valid structure.
    pub fn notes(&self) -> Vec<String> {
        let mut notes = Vec::new();
        for k in &self.key {
            let col = self.frame.require(k).expect("key column present");
            if !col.is_empty() && col.values().iter().all(Cell::is_missing) {
                notes.push(format!(
                    "key column `{k}` is entirely missing and forms a single key level"
                ));
            }
        }
        notes
    }

    /// Drop any active grouping.
    pub fn ungroup(mut self) -> Self {
        self.grouping = None;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Column;

    fn series(key: &[&str], years: &[i64]) -> Frame {
        let rows = key
            .iter()
            .zip(years)
            .map(|(k, y)| vec![Cell::text(k), Cell::Time(TimePoint::year(*y)), Cell::Int(*y)])
            .collect();
        Frame::from_rows(&["id", "year", "v"], rows).unwrap()
    }

    #[test]
    fn sorts_by_key_then_index() {
        let raw = series(&["b", "a", "b", "a"], &[2012, 2012, 2011, 2011]);
        let t = build(raw, "year", &["id"], true).unwrap();
        let ids: Vec<String> = (0..4).map(|r| t.key_tuple(r)[0].to_string()).collect();
        assert_eq!(ids, ["a", "a", "b", "b"]);
        assert_eq!(t.index_values()[0], TimePoint::year(2011));
        assert_eq!(t.interval().to_string(), "[1Y]");
    }

    #[test]
    fn index_must_be_time_and_present() {
        let raw = series(&["a"], &[2011]);
        assert!(matches!(build(raw.clone(), "v", &["id"], true), Err(Error::Schema(_))));
        assert!(matches!(
            build(raw.clone(), "nope", &["id"], true),
            Err(Error::Schema(_))
        ));
        assert!(matches!(build(raw, "year", &["year"], true), Err(Error::Schema(_))));

        let rows = vec![
            vec![Cell::text("a"), Cell::Time(TimePoint::year(2011))],
            vec![Cell::text("a"), Cell::Missing],
        ];
        let raw = Frame::from_rows(&["id", "year"], rows).unwrap();
        assert!(matches!(build(raw, "year", &["id"], true), Err(Error::Validity(_))));
    }

    #[test]
    fn missing_key_values_sort_last() {
        let rows = vec![
            vec![Cell::Missing, Cell::Time(TimePoint::year(2011))],
            vec![Cell::text("a"), Cell::Time(TimePoint::year(2011))],
        ];
        let raw = Frame::from_rows(&["id", "year"], rows).unwrap();
        let t = build(raw, "year", &["id"], true).unwrap();
        assert_eq!(t.key_tuple(1), vec![Cell::Missing]);
        assert_eq!(t.n_keys(), 2);
    }

    #[test]
    fn all_missing_key_column_is_one_level() {
        let rows = vec![
            vec![Cell::Missing, Cell::Time(TimePoint::year(2011))],
            vec![Cell::Missing, Cell::Time(TimePoint::year(2012))],
        ];
        let raw = Frame::from_rows(&["id", "year"], rows).unwrap();
        let t = build(raw, "year", &["id"], true).unwrap();
        assert_eq!(t.n_keys(), 1);
        assert_eq!(t.notes().len(), 1);
    }

    #[test]
    fn empty_key_needs_unique_index() {
        let raw = series(&["a", "b"], &[2011, 2011]);
        let err = build(raw, "year", &[] as &[&str], true).unwrap_err();
        assert_eq!(err.duplicates().unwrap().positions, vec![0, 1]);
        let raw = series(&["a", "b"], &[2011, 2012]);
        let t = build(raw, "year", &[] as &[&str], true).unwrap();
        let groups = t.key_groups();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].rows, 0..2);
    }

    #[test]
    fn empty_table_has_no_groups() {
        let raw = Frame::new(vec![
            Column::new("id", CellKind::Text, vec![]).unwrap(),
            Column::new("year", CellKind::Time, vec![]).unwrap(),
        ])
        .unwrap();
        let t = build(raw, "year", &["id"], true).unwrap();
        assert!(t.key_groups().is_empty());
        assert_eq!(t.interval(), Interval::Unknown);
    }

    #[test]
    fn duplicate_error_names_first_pair() {
        let raw = series(&["a", "a"], &[2011, 2011]);
        let err = build(raw, "year", &["id"], true).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("(a, 2011)"), "{msg}");
        assert!(msg.contains("rows 1 and 2"), "{msg}");
    }
}
