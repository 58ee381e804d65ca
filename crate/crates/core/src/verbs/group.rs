use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::agg::AggFn;
use crate::cell::{Cell, CellKind};
use crate::construct::{build, TemporalTable};
use crate::error::{Error, Result};
use crate::frame::{Column, Frame};
use crate::time::{Granularity, TimePoint};

pub type IndexFn = Arc<dyn Fn(&TimePoint) -> Result<TimePoint> + Send + Sync>;

/// Maps index values to a derived, coarser index.
#[derive(Clone)]
pub enum IndexMap {
    Floor(Granularity),
    /// Must be non-decreasing over the index.
    Custom(IndexFn),
}

impl fmt::Debug for IndexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexMap::Floor(g) => write!(f, "Floor({g})"),
            IndexMap::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl IndexMap {
    fn apply(&self, t: &TimePoint) -> Result<TimePoint> {
        match self {
            IndexMap::Floor(g) => t.floor_to(*g),
            IndexMap::Custom(f) => f(t),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IndexBy {
    /// Name of the derived index column.
    pub name: String,
    pub map: IndexMap,
}

/// Active grouping attached by [`group_by`], [`group_by_key`] and
/// [`index_by`]; consumed by [`summarize`].
#[derive(Debug, Clone, Default)]
pub struct Grouping {
    pub columns: Vec<String>,
    pub index_by: Option<IndexBy>,
}

impl Grouping {
    /// Drop grouping columns that no longer exist in `t`.
    pub(crate) fn restricted_to(mut self, t: &TemporalTable) -> Option<Grouping> {
        self.columns.retain(|c| t.frame().column(c).is_some());
        if self.index_by.is_none() && self.columns.is_empty() {
            None
        } else {
            Some(self)
        }
    }

    /// Per-row group identity: grouping column values, then the (derived)
    /// index value when index grouping is active.
    fn row_ids(&self, t: &TemporalTable) -> Result<Vec<Vec<Cell>>> {
        let cols = self
            .columns
            .iter()
            .map(|c| t.frame().require(c))
            .collect::<Result<Vec<_>>>()?;
        let derived = match &self.index_by {
            Some(ib) => Some(
                t.index_values()
                    .iter()
                    .map(|p| ib.map.apply(p).map(Cell::Time))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        Ok((0..t.nrows())
            .map(|r| {
                let mut id: Vec<Cell> = cols.iter().map(|c| c.get(r).clone()).collect();
                if let Some(d) = &derived {
                    id.push(d[r].clone());
                }
                id
            })
            .collect())
    }
}

impl TemporalTable {
    /// Distinct group identities under the active grouping, sorted.
    pub fn groups(&self) -> Result<Vec<Vec<Cell>>> {
        let Some(g) = &self.grouping else {
            return Ok(Vec::new());
        };
        let mut ids = g.row_ids(self)?;
        ids.sort();
        ids.dedup();
        Ok(ids)
    }
}

/// Group by the named columns. The index is always part of a summary, so
/// naming it here is a no-op.
pub fn group_by<S: AsRef<str>>(t: &TemporalTable, columns: &[S]) -> Result<TemporalTable> {
    let mut cols: Vec<String> = Vec::new();
    for c in columns {
        let c = c.as_ref();
        t.frame().require(c)?;
        if c != t.index && !cols.iter().any(|x| x == c) {
            cols.push(c.to_owned());
        }
    }
    let mut out = t.clone();
    let index_by = out.grouping.take().and_then(|g| g.index_by);
    out.grouping = Some(Grouping {
        columns: cols,
        index_by,
    });
    Ok(out)
}

pub fn group_by_key(t: &TemporalTable) -> Result<TemporalTable> {
    group_by(t, &t.key.clone())
}

/// Group by a derived index, e.g. the month containing each day. The
/// mapping must preserve past-to-future order.
pub fn index_by(t: &TemporalTable, name: &str, map: IndexMap) -> Result<TemporalTable> {
    if name != t.index && t.frame().column(name).is_some() {
        return Err(Error::schema(format!(
            "derived index `{name}` would shadow an existing column"
        )));
    }
    let mut values = t.index_values();
    values.sort_by_key(TimePoint::ticks);
    values.dedup();
    let mut prev: Option<TimePoint> = None;
    for v in &values {
        let m = map.apply(v)?;
        if let Some(p) = prev {
            match p.partial_cmp(&m) {
                Some(std::cmp::Ordering::Greater) => {
                    return Err(Error::Validity(format!(
                        "index mapping is not monotone: {v} maps before the image of an earlier value"
                    )))
                }
                None => return Err(Error::schema("index mapping yields mixed granularities")),
                _ => {}
            }
        }
        prev = Some(m);
    }
    let mut out = t.clone();
    let columns = out.grouping.take().map(|g| g.columns).unwrap_or_default();
    out.grouping = Some(Grouping {
        columns,
        index_by: Some(IndexBy {
            name: name.to_owned(),
            map,
        }),
    });
    Ok(out)
}

/// One output column `name = func(column)`.
#[derive(Debug, Clone)]
pub struct Aggregation {
    pub name: String,
    pub func: AggFn,
    pub column: String,
}

impl Aggregation {
    pub fn new(name: impl Into<String>, func: AggFn, column: impl Into<String>) -> Self {
        Aggregation {
            name: name.into(),
            func,
            column: column.into(),
        }
    }
}

/// Reduce each (group, index) combination to one row.
///
/// The result is keyed by the grouping columns and indexed by the derived
/// index (or the original one). Ungrouped tables collapse to one row per
/// index value with an empty key.
pub fn summarize(t: &TemporalTable, aggs: &[Aggregation]) -> Result<TemporalTable> {
    let t = t.canonical();
    let grouping = t.grouping.clone().unwrap_or_default();
    let index_name = grouping.index_by.as_ref().map_or(t.index.clone(), |ib| ib.name.clone());
    let group_cols: Vec<String> = grouping.columns.iter().filter(|c| **c != index_name).cloned().collect();

    let mut out_names: Vec<&str> = group_cols.iter().map(String::as_str).collect();
    out_names.push(&index_name);
    for a in aggs {
        t.frame().require(&a.column)?;
        if out_names.contains(&a.name.as_str()) {
            return Err(Error::schema(format!("duplicate output column `{}`", a.name)));
        }
        out_names.push(&a.name);
    }

    let with_index = Grouping {
        columns: group_cols.clone(),
        index_by: Some(grouping.index_by.clone().unwrap_or(IndexBy {
            name: t.index.clone(),
            map: IndexMap::Floor(t.index_granularity().unwrap_or(Granularity::Ordinal)),
        })),
    };
    let ids = if t.nrows() == 0 {
        Vec::new()
    } else {
        with_index.row_ids(&t)?
    };
    let mut groups: BTreeMap<Vec<Cell>, Vec<usize>> = BTreeMap::new();
    for (row, id) in ids.into_iter().enumerate() {
        groups.entry(id).or_default().push(row);
    }

    let mut columns: Vec<Column> = Vec::new();
    for (i, c) in group_cols.iter().enumerate() {
        let kind = t.frame().require(c)?.kind();
        let values = groups.keys().map(|id| id[i].clone()).collect();
        columns.push(Column::new(c, kind, values)?);
    }
    let index_values = groups.keys().map(|id| id[group_cols.len()].clone()).collect();
    columns.push(Column::new(&index_name, CellKind::Time, index_values)?);
    for a in aggs {
        let src = t.frame().require(&a.column)?;
        let kind = a.func.output_kind(src.kind())?;
        let values = groups
            .values()
            .map(|rows| {
                let cells: Vec<Cell> = rows.iter().map(|&r| src.get(r).clone()).collect();
                a.func.apply(src.kind(), &cells)
            })
            .collect::<Result<Vec<_>>>()?;
        columns.push(Column::new(&a.name, kind, values)?);
    }
    build(Frame::new(columns)?, &index_name, &group_cols, t.regular)
}
