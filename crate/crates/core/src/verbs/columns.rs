use crate::cell::Cell;
use crate::construct::{build, TemporalTable};
use crate::error::{Error, Result};
use crate::frame::{Column, Frame};

use super::expr::Expr;
use super::VerbOutcome;

/// Rebuild `frame` under `t`'s index/key declaration, carrying grouping and
/// regularity over.
pub(crate) fn rebuild(t: &TemporalTable, frame: Frame, key: Vec<String>) -> Result<TemporalTable> {
    let mut out = build(frame, &t.index, &key, t.regular)?;
    out.grouping = t.grouping.clone().and_then(|g| g.restricted_to(&out));
    Ok(out)
}

/// Keep the named columns.
///
/// Key columns left out of the selection leave the key; the remaining key
/// must still identify rows uniquely. The index is kept implicitly, with a
/// note, when the whole key is selected; otherwise dropping it is an error.
pub fn select<S: AsRef<str>>(t: &TemporalTable, columns: &[S]) -> Result<VerbOutcome> {
    let mut names: Vec<String> = Vec::with_capacity(columns.len() + 1);
    for c in columns {
        let c = c.as_ref();
        t.frame().require(c)?;
        if !names.iter().any(|n| n == c) {
            names.push(c.to_owned());
        }
    }
    let mut warnings = Vec::new();
    if !names.contains(&t.index) {
        let whole_key = t.key.iter().all(|k| names.contains(k));
        if !whole_key {
            return Err(Error::Validity(format!(
                "selection drops the index column `{}`; keep `{}` in the selection \
                 (or convert the result to a plain table with into_frame())",
                t.index, t.index
            )));
        }
        warnings.push(format!("index column `{}` is kept implicitly", t.index));
        names.push(t.index.clone());
    }
    let key: Vec<String> = t.key.iter().filter(|k| names.contains(k)).cloned().collect();
    let frame = t.canonical().frame.select(&names)?;
    let table = rebuild(t, frame, key)?;
    Ok(VerbOutcome { table, warnings })
}

fn evaluate(t: &TemporalTable, name: &str, expr: &Expr) -> Result<Column> {
    expr.check(t.frame())?;
    let values = (0..t.nrows())
        .map(|r| expr.eval(t.frame(), r))
        .collect::<Result<Vec<Cell>>>()?;
    match t.frame().column(name) {
        Some(existing) if values.iter().all(Cell::is_missing) => Column::new(name, existing.kind(), values),
        _ => Column::infer(name, values),
    }
}

/// Append or overwrite the column `name`. Overwriting the index or a key
/// column re-validates the table.
pub fn mutate(t: &TemporalTable, name: &str, expr: &Expr) -> Result<VerbOutcome> {
    let t = t.canonical();
    let column = evaluate(&t, name, expr)?;
    let mut frame = t.frame.clone();
    frame.set_column(column)?;
    let table = if name == t.index || t.key.iter().any(|k| k == name) {
        rebuild(&t, frame, t.key.clone())?
    } else {
        TemporalTable {
            frame,
            ..t.into_owned()
        }
    };
    Ok(VerbOutcome::clean(table))
}

/// Like [`mutate`] for several columns, keeping only the index, the key and
/// the computed columns.
pub fn transmute(t: &TemporalTable, exprs: &[(String, Expr)]) -> Result<VerbOutcome> {
    let t = t.canonical();
    let computed = exprs
        .iter()
        .map(|(n, e)| evaluate(&t, n, e))
        .collect::<Result<Vec<_>>>()?;
    let mut keep: Vec<String> = t
        .frame
        .names()
        .into_iter()
        .filter(|n| *n == t.index || t.key.iter().any(|k| k == n))
        .map(str::to_owned)
        .collect();
    for (n, _) in exprs {
        if !keep.contains(n) {
            keep.push(n.clone());
        }
    }
    let mut frame = Frame::new(keep.iter().filter_map(|n| t.frame.column(n).cloned()).collect())?;
    for c in computed {
        frame.set_column(c)?;
    }
    let frame = frame.select(&keep)?;
    Ok(VerbOutcome::clean(rebuild(&t, frame, t.key.clone())?))
}
