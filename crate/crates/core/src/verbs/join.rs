use std::collections::{HashMap, HashSet};
use std::str::FromStr;

use crate::cell::Cell;
use crate::construct::TemporalTable;
use crate::error::{Error, Result};
use crate::frame::{Column, Frame};

use super::columns::rebuild;
use super::rows::with_rows;
use super::VerbOutcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinKind {
    Left,
    Right,
    Inner,
    Full,
    Semi,
    Anti,
}

impl FromStr for JoinKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "left" => JoinKind::Left,
            "right" => JoinKind::Right,
            "inner" => JoinKind::Inner,
            "full" | "outer" => JoinKind::Full,
            "semi" => JoinKind::Semi,
            "anti" => JoinKind::Anti,
            other => return Err(Error::schema(format!("unknown join kind `{other}`"))),
        })
    }
}

/// Join a plain table onto `t`, matching `by` pairs of (left, right)
/// columns; missing values match each other.
///
/// The result keeps `t`'s index and key and is re-validated, so joins that
/// fan out `(key, index)` pairs or leave the index missing fail. Right
/// columns whose names clash with left ones get a `.y` suffix.
pub fn join(t: &TemporalTable, other: &Frame, kind: JoinKind, by: &[(String, String)]) -> Result<VerbOutcome> {
    if by.is_empty() {
        return Err(Error::schema("join needs at least one pair of columns to match on"));
    }
    let t = t.canonical();
    let left = t.frame();
    let mut left_by = Vec::new();
    let mut right_by = Vec::new();
    for (l, r) in by {
        let lc = left.require(l)?;
        let rc = other.require(r)?;
        if lc.kind() != rc.kind() && !lc.values().is_empty() && !rc.values().is_empty() {
            return Err(Error::schema(format!(
                "cannot match {} column `{l}` with {} column `{r}`",
                lc.kind(),
                rc.kind()
            )));
        }
        left_by.push(lc);
        right_by.push(rc);
    }
    let left_ids: Vec<Vec<Cell>> = (0..left.nrows())
        .map(|r| left_by.iter().map(|c| c.get(r).clone()).collect())
        .collect();
    let right_ids: Vec<Vec<Cell>> = (0..other.nrows())
        .map(|r| right_by.iter().map(|c| c.get(r).clone()).collect())
        .collect();

    if matches!(kind, JoinKind::Semi | JoinKind::Anti) {
        let present: HashSet<&[Cell]> = right_ids.iter().map(Vec::as_slice).collect();
        let want = kind == JoinKind::Semi;
        let keep: Vec<usize> = (0..left.nrows())
            .filter(|&r| present.contains(left_ids[r].as_slice()) == want)
            .collect();
        return Ok(VerbOutcome::clean(with_rows(&t, &keep)?));
    }

    let mut index: HashMap<&[Cell], Vec<usize>> = HashMap::new();
    for (r, id) in right_ids.iter().enumerate() {
        index.entry(id.as_slice()).or_default().push(r);
    }
    // (left row, right row) pairs; None marks the unmatched side.
    let mut pairs: Vec<(Option<usize>, Option<usize>)> = Vec::new();
    let mut right_used = vec![false; other.nrows()];
    for (l, id) in left_ids.iter().enumerate() {
        match index.get(id.as_slice()) {
            Some(rs) => {
                for &r in rs {
                    right_used[r] = true;
                    pairs.push((Some(l), Some(r)));
                }
            }
            None if matches!(kind, JoinKind::Left | JoinKind::Full) => pairs.push((Some(l), None)),
            None => {}
        }
    }
    if matches!(kind, JoinKind::Right | JoinKind::Full) {
        for (r, used) in right_used.iter().enumerate() {
            if !used {
                pairs.push((None, Some(r)));
            }
        }
    }

    let mut cols: Vec<Column> = Vec::new();
    for lc in left.columns() {
        let coalesce = by.iter().position(|(l, _)| l == lc.name()).map(|i| right_by[i]);
        let values = pairs
            .iter()
            .map(|&(l, r)| match (l, r, coalesce) {
                (Some(l), _, _) => lc.get(l).clone(),
                (None, Some(r), Some(rc)) => rc.get(r).clone(),
                _ => Cell::Missing,
            })
            .collect();
        cols.push(Column::new(lc.name(), lc.kind(), values)?);
    }
    for rc in other.columns() {
        if by.iter().any(|(_, r)| r == rc.name()) {
            continue;
        }
        let name = if left.column(rc.name()).is_some() {
            format!("{}.y", rc.name())
        } else {
            rc.name().to_owned()
        };
        let values = pairs
            .iter()
            .map(|&(_, r)| r.map_or(Cell::Missing, |r| rc.get(r).clone()))
            .collect();
        cols.push(Column::new(name, rc.kind(), values)?);
    }
    let frame = Frame::new(cols)?;
    Ok(VerbOutcome::clean(rebuild(&t, frame, t.key.clone())?))
}
