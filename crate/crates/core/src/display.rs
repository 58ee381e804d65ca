//! Contextual text summary of a temporal table: dimensions, interval, zone,
//! key and a short preview.

use std::fmt::Write;

use crate::cell::{Cell, CellKind};
use crate::construct::TemporalTable;
use crate::frame::Column;
use crate::time::Granularity;

const PREVIEW_ROWS: usize = 5;

/// Format an integer with comma thousands separators.
pub fn thousands(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// The first header line, e.g. `# A tsibble: 12 x 5 [1Y]`.
pub fn header_line(t: &TemporalTable) -> String {
    let mut line = format!(
        "# A tsibble: {} x {} {}",
        thousands(t.nrows()),
        thousands(t.ncols()),
        t.interval()
    );
    if t.index_granularity().is_some_and(Granularity::is_subdaily) {
        let zone = t.index_zone().map_or_else(|| "UTC".to_owned(), |z| z.to_string());
        let _ = write!(line, " <{zone}>");
    }
    line
}

/// The key line, e.g. `# Key:       country, gender [6]`; `None` for an
/// empty key.
pub fn key_line(t: &TemporalTable) -> Option<String> {
    if t.key().is_empty() {
        return None;
    }
    Some(format!(
        "# Key:       {} [{}]",
        t.key().join(", "),
        thousands(t.n_keys())
    ))
}

fn type_tag(col: &Column) -> String {
    let tag = match col.kind() {
        CellKind::Int => "int".to_owned(),
        CellKind::Real => "dbl".to_owned(),
        CellKind::Bool => "lgl".to_owned(),
        CellKind::Text => "chr".to_owned(),
        CellKind::Time => match col.values().iter().find_map(Cell::as_time).map(|t| t.granularity()) {
            Some(Granularity::Year) => "year".to_owned(),
            Some(Granularity::Quarter) => "qtr".to_owned(),
            Some(Granularity::Month) => "mth".to_owned(),
            Some(Granularity::Week) => "week".to_owned(),
            Some(Granularity::Day) => "date".to_owned(),
            Some(Granularity::Ordinal) => "int".to_owned(),
            Some(g) if g.is_subdaily() => "dttm".to_owned(),
            Some(g) => g.name(),
            None => "time".to_owned(),
        },
    };
    format!("<{tag}>")
}

/// Full summary: header, key line, grouping line, a preview of the first
/// rows and a trailer counting the rows not shown.
pub fn render_summary(t: &TemporalTable) -> String {
    let mut out = header_line(t);
    out.push('\n');
    if let Some(k) = key_line(t) {
        out.push_str(&k);
        out.push('\n');
    }
    if let Some(g) = t.grouping() {
        let mut names: Vec<String> = g.columns.clone();
        if let Some(ib) = &g.index_by {
            names.push(format!("@ {}", ib.name));
        }
        let n = t.groups().map_or(0, |g| g.len());
        let _ = writeln!(out, "# Groups:    {} [{}]", names.join(", "), thousands(n));
    }

    let shown = t.nrows().min(PREVIEW_ROWS);
    let row_width = shown.to_string().len();
    let mut cols: Vec<Vec<String>> = Vec::new();
    let mut right: Vec<bool> = Vec::new();
    for c in t.frame().columns() {
        let mut cells = vec![c.name().to_owned(), type_tag(c)];
        cells.extend((0..shown).map(|r| c.get(r).to_string()));
        cols.push(cells);
        right.push(c.kind().is_numeric() || c.kind() == CellKind::Time);
    }
    let widths: Vec<usize> = cols
        .iter()
        .map(|c| c.iter().map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    for line in 0..shown + 2 {
        let label = if line < 2 {
            String::new()
        } else {
            (line - 1).to_string()
        };
        let mut text = format!("{label:>row_width$}");
        for ((c, w), r) in cols.iter().zip(&widths).zip(&right) {
            text.push(' ');
            if *r {
                let _ = write!(text, "{:>w$}", c[line], w = *w);
            } else {
                let _ = write!(text, "{:<w$}", c[line], w = *w);
            }
        }
        out.push_str(text.trim_end());
        out.push('\n');
    }
    let rest = t.nrows() - shown;
    if rest > 0 {
        let _ = writeln!(out, "# ... with {} more rows", thousands(rest));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separators() {
        assert_eq!(thousands(0), "0");
        assert_eq!(thousands(999), "999");
        assert_eq!(thousands(1000), "1,000");
        assert_eq!(thousands(5_548_444), "5,548,444");
    }
}
