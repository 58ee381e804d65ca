use std::collections::{BTreeSet, HashMap};

use crate::cell::{Cell, CellKind};
use crate::construct::{duplicates, TemporalTable};
use crate::error::{Error, Result};
use crate::frame::{Column, Frame};

use super::columns::rebuild;
use super::VerbOutcome;

/// Melt `columns` into a `names_to` column (added to the key) and a
/// `values_to` column.
pub fn gather<S: AsRef<str>>(t: &TemporalTable, columns: &[S], names_to: &str, values_to: &str) -> Result<VerbOutcome> {
    if columns.is_empty() {
        return Err(Error::schema("gather needs at least one column"));
    }
    let t = t.canonical();
    let mut gathered: Vec<&Column> = Vec::new();
    for c in columns {
        let c = c.as_ref();
        let col = t.frame().require(c)?;
        if c == t.index || t.key.iter().any(|k| k == c) {
            return Err(Error::schema(format!("cannot gather index or key column `{c}`")));
        }
        if gathered.iter().any(|g| g.name() == c) {
            return Err(Error::schema(format!("column `{c}` listed twice")));
        }
        gathered.push(col);
    }
    let kept: Vec<&Column> = t
        .frame()
        .columns()
        .iter()
        .filter(|c| !gathered.iter().any(|g| g.name() == c.name()))
        .collect();
    for new in [names_to, values_to] {
        if kept.iter().any(|c| c.name() == new) {
            return Err(Error::schema(format!("output column `{new}` already exists")));
        }
    }
    if names_to == values_to {
        return Err(Error::schema("names and values columns need distinct names"));
    }

    let n = t.nrows() * gathered.len();
    let mut kept_values: Vec<Vec<Cell>> = vec![Vec::with_capacity(n); kept.len()];
    let mut names = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for row in 0..t.nrows() {
        for g in &gathered {
            for (out, c) in kept_values.iter_mut().zip(&kept) {
                out.push(c.get(row).clone());
            }
            names.push(Cell::text(g.name()));
            values.push(g.get(row).clone());
        }
    }

    let value_kind = unify_kinds(gathered.iter().map(|c| c.kind()))?;
    let mut cols: Vec<Column> = kept
        .iter()
        .zip(kept_values)
        .map(|(c, v)| Column::new(c.name(), c.kind(), v))
        .collect::<Result<_>>()?;
    cols.push(Column::new(names_to, CellKind::Text, names)?);
    let values = if value_kind == CellKind::Real {
        values
            .into_iter()
            .map(|c| match c {
                Cell::Int(v) => Cell::Real(v as f64),
                other => other,
            })
            .collect()
    } else {
        values
    };
    cols.push(Column::new(values_to, value_kind, values)?);

    let mut key = t.key.clone();
    key.push(names_to.to_owned());
    Ok(VerbOutcome::clean(rebuild(&t, Frame::new(cols)?, key)?))
}

fn unify_kinds(kinds: impl Iterator<Item = CellKind>) -> Result<CellKind> {
    let mut acc: Option<CellKind> = None;
    for k in kinds {
        acc = Some(match acc {
            None => k,
            Some(a) if a == k => a,
            Some(CellKind::Int | CellKind::Real) if k.is_numeric() => CellKind::Real,
            Some(a) => {
                return Err(Error::schema(format!(
                    "cannot gather {a} and {k} columns into one value column"
                )))
            }
        });
    }
    Ok(acc.unwrap_or(CellKind::Text))
}

/// Inverse of [`gather`]: one new column per distinct value of `names_from`,
/// filled from `values_from`. Rows are identified by all remaining columns;
/// `names_from` leaves the key.
pub fn spread(t: &TemporalTable, names_from: &str, values_from: &str) -> Result<VerbOutcome> {
    let t = t.canonical();
    let names_col = t.frame().require(names_from)?;
    let values_col = t.frame().require(values_from)?;
    if names_from == values_from {
        return Err(Error::schema("spread needs distinct names and values columns"));
    }
    for c in [names_from, values_from] {
        if c == t.index {
            return Err(Error::schema(format!("cannot spread the index column `{c}`")));
        }
    }
    if t.key.iter().any(|k| k == values_from) {
        return Err(Error::schema(format!(
            "cannot spread key column `{values_from}` as values"
        )));
    }

    let remaining_key: Vec<String> = t.key.iter().filter(|k| *k != names_from).cloned().collect();
    let mut check_key = remaining_key.clone();
    check_key.push(names_from.to_owned());
    let dup = duplicates(t.frame(), &t.index, &check_key)?;
    if !dup.is_empty() {
        return Err(Error::Duplicated(Box::new(dup)));
    }

    let id_cols: Vec<&Column> = t
        .frame()
        .columns()
        .iter()
        .filter(|c| c.name() != names_from && c.name() != values_from)
        .collect();
    let new_names: BTreeSet<Cell> = names_col.values().iter().cloned().collect();
    let new_names: Vec<Cell> = new_names.into_iter().collect();
    for n in &new_names {
        let label = n.to_string();
        if id_cols.iter().any(|c| c.name() == label) {
            return Err(Error::schema(format!("spread column `{label}` already exists")));
        }
    }

    let mut row_of: HashMap<Vec<Cell>, usize> = HashMap::new();
    let mut firsts: Vec<usize> = Vec::new();
    let mut cells: Vec<Vec<Cell>> = Vec::new();
    for row in 0..t.nrows() {
        let id: Vec<Cell> = id_cols.iter().map(|c| c.get(row).clone()).collect();
        let slot = *row_of.entry(id).or_insert_with(|| {
            firsts.push(row);
            cells.push(vec![Cell::Missing; new_names.len()]);
            firsts.len() - 1
        });
        let which = new_names
            .binary_search(names_col.get(row))
            .expect("name collected above");
        cells[slot][which] = values_col.get(row).clone();
    }

    let mut cols: Vec<Column> = id_cols.iter().map(|c| c.take(&firsts)).collect();
    for (j, n) in new_names.iter().enumerate() {
        let values = cells.iter().map(|r| r[j].clone()).collect();
        cols.push(Column::new(n.to_string(), values_col.kind(), values)?);
    }
    Ok(VerbOutcome::clean(rebuild(&t, Frame::new(cols)?, remaining_key)?))
}
