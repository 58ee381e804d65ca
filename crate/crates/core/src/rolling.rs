//! Rolling windows over ordered sequences: `slide` (overlapping), `tile`
//! (non-overlapping) and `stretch` (expanding from a fixed prefix).
//!
//! The base functions return whatever `f` returns. The `*_int`, `*_real`,
//! `*_bool` and `*_text` variants take functions producing [`Cell`]s and
//! check that every result has the requested kind.

use std::ops::Range;

use rayon::prelude::*;

use crate::cell::{Cell, CellKind};
use crate::construct::{build, TemporalTable};
use crate::error::{Error, Result};
use crate::frame::{Column, Frame};
use crate::gaps::has_gaps;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Partial {
    /// Only full-size windows.
    #[default]
    CompleteOnly,
    /// Prefix windows of sizes `1..size` come before the full-size ones.
    EmitPartial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    size: usize,
    step: usize,
    partial: Partial,
}

impl Window {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::precondition("window size must be at least 1"));
        }
        Ok(Window {
            size,
            step: 1,
            partial: Partial::CompleteOnly,
        })
    }

    pub fn with_step(mut self, step: usize) -> Result<Self> {
        if step == 0 {
            return Err(Error::precondition("window step must be at least 1"));
        }
        self.step = step;
        Ok(self)
    }

    pub fn with_partial(mut self, partial: Partial) -> Self {
        self.partial = partial;
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn partial(&self) -> Partial {
        self.partial
    }
}

/// Index ranges visited by [`slide`] over `n` elements.
pub fn slide_ranges(n: usize, w: &Window) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    if w.partial == Partial::EmitPartial {
        out.extend((1..w.size.min(n + 1)).map(|len| 0..len));
    }
    let mut start = 0;
    while start + w.size <= n {
        out.push(start..start + w.size);
        start += w.step;
    }
    out
}

/// Index ranges visited by [`tile`]; the last block may be short.
pub fn tile_ranges(n: usize, size: usize) -> Result<Vec<Range<usize>>> {
    if size == 0 {
        return Err(Error::precondition("tile size must be at least 1"));
    }
    Ok((0..n).step_by(size).map(|s| s..(s + size).min(n)).collect())
}

/// Prefix ranges `0..init`, `0..init+step`, ... up to `n`.
pub fn stretch_ranges(n: usize, init: usize, step: usize) -> Result<Vec<Range<usize>>> {
    if init == 0 || step == 0 {
        return Err(Error::precondition("stretch needs init and step of at least 1"));
    }
    Ok((init..=n).step_by(step).map(|end| 0..end).collect())
}

pub fn slide<T, R>(xs: &[T], f: impl Fn(&[T]) -> R, w: &Window) -> Vec<R> {
    slide_ranges(xs.len(), w).into_iter().map(|r| f(&xs[r])).collect()
}

pub fn tile<T, R>(xs: &[T], f: impl Fn(&[T]) -> R, size: usize) -> Result<Vec<R>> {
    Ok(tile_ranges(xs.len(), size)?.into_iter().map(|r| f(&xs[r])).collect())
}

pub fn stretch<T, R>(xs: &[T], f: impl Fn(&[T]) -> R, init: usize, step: usize) -> Result<Vec<R>> {
    Ok(stretch_ranges(xs.len(), init, step)?
        .into_iter()
        .map(|r| f(&xs[r]))
        .collect())
}

/// Slide over two equally long inputs at once.
pub fn slide2<X, Y, R>(xs: &[X], ys: &[Y], f: impl Fn(&[X], &[Y]) -> R, w: &Window) -> Result<Vec<R>> {
    if xs.len() != ys.len() {
        return Err(Error::precondition(format!(
            "slide2 inputs differ in length ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    Ok(slide_ranges(xs.len(), w)
        .into_iter()
        .map(|r| f(&xs[r.clone()], &ys[r]))
        .collect())
}

/// Slide over any number of equally long inputs.
pub fn pslide<T, R>(lists: &[&[T]], f: impl Fn(&[&[T]]) -> R, w: &Window) -> Result<Vec<R>> {
    let n = lists.first().map_or(0, |l| l.len());
    if let Some(bad) = lists.iter().find(|l| l.len() != n) {
        return Err(Error::precondition(format!(
            "pslide inputs differ in length ({n} vs {})",
            bad.len()
        )));
    }
    Ok(slide_ranges(n, w)
        .into_iter()
        .map(|r| {
            let windows: Vec<&[T]> = lists.iter().map(|l| &l[r.clone()]).collect();
            f(&windows)
        })
        .collect())
}

/// Native value of a cell kind, for the typed variants.
pub trait CellValue: Sized {
    const KIND: CellKind;
    fn from_cell(cell: &Cell) -> Option<Self>;
}

impl CellValue for i64 {
    const KIND: CellKind = CellKind::Int;
    fn from_cell(cell: &Cell) -> Option<Self> {
        cell.as_i64()
    }
}

impl CellValue for f64 {
    const KIND: CellKind = CellKind::Real;
    fn from_cell(cell: &Cell) -> Option<Self> {
        match cell {
            Cell::Real(v) => Some(*v),
            _ => None,
        }
    }
}

impl CellValue for bool {
    const KIND: CellKind = CellKind::Bool;
    fn from_cell(cell: &Cell) -> Option<Self> {
        cell.as_bool()
    }
}

impl CellValue for String {
    const KIND: CellKind = CellKind::Text;
    fn from_cell(cell: &Cell) -> Option<Self> {
        cell.as_str().map(str::to_owned)
    }
}

/// Check every cell has kind `T::KIND` and unwrap them.
pub fn typed<T: CellValue>(cells: Vec<Cell>) -> Result<Vec<T>> {
    cells
        .iter()
        .enumerate()
        .map(|(position, c)| {
            T::from_cell(c).ok_or(Error::TypedResult {
                position,
                expected: T::KIND.name(),
                found: c.kind_name(),
            })
        })
        .collect()
}

macro_rules! typed_variants {
    ($($slide:ident, $tile:ident, $stretch:ident => $ty:ty;)*) => {
        $(
            pub fn $slide<T>(xs: &[T], f: impl Fn(&[T]) -> Cell, w: &Window) -> Result<Vec<$ty>> {
                typed(slide(xs, f, w))
            }

            pub fn $tile<T>(xs: &[T], f: impl Fn(&[T]) -> Cell, size: usize) -> Result<Vec<$ty>> {
                typed(tile(xs, f, size)?)
            }

            pub fn $stretch<T>(
                xs: &[T],
                f: impl Fn(&[T]) -> Cell,
                init: usize,
                step: usize,
            ) -> Result<Vec<$ty>> {
                typed(stretch(xs, f, init, step)?)
            }
        )*
    };
}

typed_variants! {
    slide_int, tile_int, stretch_int => i64;
    slide_real, tile_real, stretch_real => f64;
    slide_bool, tile_bool, stretch_bool => bool;
    slide_text, tile_text, stretch_text => String;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RollOp {
    Slide(Window),
    Tile(usize),
    Stretch { init: usize, step: usize },
}

impl RollOp {
    fn ranges(&self, n: usize) -> Result<Vec<Range<usize>>> {
        match *self {
            RollOp::Slide(w) => Ok(slide_ranges(n, &w)),
            RollOp::Tile(size) => tile_ranges(n, size),
            RollOp::Stretch { init, step } => stretch_ranges(n, init, step),
        }
    }

    fn every_index(&self) -> bool {
        matches!(self, RollOp::Slide(w) if w.partial == Partial::EmitPartial)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Serial,
    Parallel,
}

/// Apply a rolling operation to `column` independently within each key.
///
/// Each result is aligned to the last index of its window. The output table
/// holds the key, the index and `output`; it has one row per window end,
/// or one row per input row when sliding with partial windows (rows with no
/// window ending there get a missing value). Tables with implicit gaps are
/// refused, since windows would silently bridge them.
pub fn roll_by_key<F>(
    t: &TemporalTable,
    column: &str,
    op: RollOp,
    f: F,
    output: &str,
    exec: Execution,
) -> Result<TemporalTable>
where
    F: Fn(&[Cell]) -> Cell + Sync,
{
    let t = t.canonical();
    let src = t.frame().require(column)?;
    if !src.kind().is_numeric() {
        return Err(Error::schema(format!(
            "rolling column `{column}` holds {} values, expected numbers",
            src.kind()
        )));
    }
    if output == t.index() || t.key().iter().any(|k| k == output) {
        return Err(Error::schema(format!(
            "output column `{output}` would replace the index or key"
        )));
    }
    if t.interval().is_regular() {
        if let Some(flag) = has_gaps(&t, false)?.into_iter().find(|f| f.has_gaps) {
            let key = flag.key.iter().map(Cell::to_string).collect::<Vec<_>>().join(", ");
            return Err(Error::Gaps(format!("key ({key}) has implicit gaps in time")));
        }
    }
    // Validate the operation once, even for empty tables.
    op.ranges(0)?;

    let groups = t.key_groups();
    let values = src.values();
    let per_group = |g: &crate::construct::KeyGroup| -> Vec<(usize, Cell)> {
        let xs = &values[g.rows.clone()];
        let ranges = op.ranges(xs.len()).expect("validated above");
        let mut out: Vec<(usize, Cell)> = ranges
            .into_iter()
            .map(|r| (g.rows.start + r.end - 1, f(&xs[r])))
            .collect();
        if op.every_index() {
            let mut full: Vec<(usize, Cell)> = g.rows.clone().map(|row| (row, Cell::Missing)).collect();
            for (row, cell) in out {
                full[row - g.rows.start].1 = cell;
            }
            out = full;
        }
        out
    };
    let results: Vec<Vec<(usize, Cell)>> = match exec {
        Execution::Serial => groups.iter().map(per_group).collect(),
        Execution::Parallel => groups.par_iter().map(per_group).collect(),
    };

    let (rows, cells): (Vec<usize>, Vec<Cell>) = results.into_iter().flatten().unzip();
    let mut names: Vec<&str> = t.key().iter().map(String::as_str).collect();
    names.push(t.index());
    let mut frame = t.frame().select(&names)?.take(&rows);
    let out = if cells.iter().all(Cell::is_missing) {
        Column::new(output, CellKind::Real, cells)?
    } else {
        Column::infer(output, cells)?
    };
    frame.set_column(out)?;
    build(
        Frame::new(frame.into_columns())?,
        t.index(),
        t.key(),
        t.is_declared_regular(),
    )
}
