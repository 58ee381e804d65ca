use crate::cell::Cell;
use crate::construct::{canonical_order, TemporalTable};
use crate::error::{Error, Result};
use crate::time::{Granularity, TimePoint, Zone};

use super::expr::Expr;
use super::VerbOutcome;

/// Replace the rows of `t`, keeping metadata, and re-infer the interval.
pub(crate) fn with_rows(t: &TemporalTable, rows: &[usize]) -> Result<TemporalTable> {
    let mut out = TemporalTable {
        frame: t.frame.take(rows),
        ..t.clone()
    };
    out.interval = out.infer_interval()?;
    Ok(out)
}

/// Rows for which `predicate` is true, in their current order. Missing
/// predicate results drop the row.
pub fn filter(t: &TemporalTable, predicate: &Expr) -> Result<VerbOutcome> {
    predicate.check(t.frame())?;
    let mut keep = Vec::new();
    for row in 0..t.nrows() {
        match predicate.eval(t.frame(), row)? {
            Cell::Bool(true) => keep.push(row),
            Cell::Bool(false) | Cell::Missing => {}
            other => {
                return Err(Error::schema(format!(
                    "filter predicate produced a {} value",
                    other.kind_name()
                )))
            }
        }
    }
    Ok(VerbOutcome::clean(with_rows(t, &keep)?))
}

/// A time window such as `2011`, `2013-01 ~ 2013-03`, `~ 2012` or `2012 ~`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexFilterExpr {
    pub from: Option<TimePoint>,
    pub to: Option<TimePoint>,
}

impl IndexFilterExpr {
    /// Parse against an index of granularity `index`. Bare integers are
    /// read as ordinals for ordinal indexes and as years otherwise.
    pub fn parse(text: &str, index: Granularity) -> Result<Self> {
        let endpoint = |s: &str| -> Result<Option<TimePoint>> {
            let s = s.trim();
            if s.is_empty() {
                return Ok(None);
            }
            let point = match index {
                Granularity::Custom(_) => TimePoint::parse_as(s, index, None),
                Granularity::Ordinal => TimePoint::parse_as(s, Granularity::Ordinal, None),
                _ => TimePoint::detect(s, Some(Granularity::Year), None),
            };
            point
                .map(Some)
                .ok_or_else(|| Error::schema(format!("cannot read `{s}` as a time for a {index} index")))
        };
        let parsed = match text.split_once('~') {
            Some((a, b)) => IndexFilterExpr {
                from: endpoint(a)?,
                to: endpoint(b)?,
            },
            None => {
                let p = endpoint(text)?;
                IndexFilterExpr { from: p, to: p }
            }
        };
        if parsed.from.is_none() && parsed.to.is_none() {
            return Err(Error::schema(format!("empty time window `{text}`")));
        }
        Ok(parsed)
    }

    /// Inclusive tick range at granularity `g`; open ends are unbounded.
    pub fn tick_range(&self, g: Granularity, zone: Option<Zone>) -> Result<(i64, i64)> {
        let lo = match &self.from {
            Some(p) => p.tick_bounds(g, zone)?.0,
            None => i64::MIN,
        };
        let hi = match &self.to {
            Some(p) => p.tick_bounds(g, zone)?.1,
            None => i64::MAX,
        };
        Ok((lo, hi))
    }
}

/// Rows whose index falls inside the time window `expr`.
pub fn filter_index(t: &TemporalTable, expr: &str) -> Result<VerbOutcome> {
    let Some(g) = t.index_granularity() else {
        // No index values, nothing to keep; still validate the text.
        IndexFilterExpr::parse(expr, Granularity::Year)?;
        return Ok(VerbOutcome::clean(t.clone()));
    };
    let window = IndexFilterExpr::parse(expr, g)?;
    let (lo, hi) = window.tick_range(g, t.index_zone())?;
    let keep: Vec<usize> = t
        .index_values()
        .iter()
        .enumerate()
        .filter(|(_, p)| (lo..=hi).contains(&p.ticks()))
        .map(|(i, _)| i)
        .collect();
    Ok(VerbOutcome::clean(with_rows(t, &keep)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortKey {
    pub column: String,
    pub descending: bool,
}

impl SortKey {
    pub fn asc(column: impl Into<String>) -> Self {
        SortKey {
            column: column.into(),
            descending: false,
        }
    }

    pub fn desc(column: impl Into<String>) -> Self {
        SortKey {
            column: column.into(),
            descending: true,
        }
    }
}

/// Reorder rows (stable). If the result departs from `(key, index)` order
/// the table is marked order-dirty and a warning is attached; order-aware
/// operations re-sort such tables before use.
pub fn arrange(t: &TemporalTable, by: &[SortKey]) -> Result<VerbOutcome> {
    let cols = by
        .iter()
        .map(|k| t.frame().require(&k.column))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..t.nrows()).collect();
    order.sort_by(|&a, &b| {
        cols.iter()
            .zip(by)
            .map(|(c, k)| {
                let o = c.get(a).cmp(c.get(b));
                if k.descending {
                    o.reverse()
                } else {
                    o
                }
            })
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut out = TemporalTable {
        frame: t.frame.take(&order),
        ..t.clone()
    };
    let canonical = canonical_order(&out.frame, &out.key, &out.index)?;
    let in_order = canonical.iter().enumerate().all(|(i, &r)| i == r);
    out.order_dirty = !in_order;
    let warnings = if in_order {
        Vec::new()
    } else {
        vec![format!(
            "rows are no longer arranged past to future within each key ({}); \
             order-sensitive operations will re-sort by key and `{}`",
            if t.key.is_empty() {
                "no key".to_owned()
            } else {
                t.key.join(", ")
            },
            t.index
        )]
    };
    Ok(VerbOutcome { table: out, warnings })
}
