//! Plain columnar tables.

use std::collections::HashSet;

use crate::cell::{Cell, CellKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    pub name: String,
    pub kind: CellKind,
}

/// Ordered column names with their cell kinds.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schema {
    fields: Vec<Field>,
}

impl Schema {
    pub fn new(fields: Vec<Field>) -> Result<Self> {
        let mut seen = HashSet::new();
        for f in &fields {
            if !seen.insert(f.name.as_str()) {
                return Err(Error::schema(format!("duplicate column name `{}`", f.name)));
            }
        }
        Ok(Schema { fields })
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().map(|f| f.name.as_str())
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }
}

/// A named column whose cells all share `kind` or are missing.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    name: String,
    kind: CellKind,
    values: Vec<Cell>,
}

impl Column {
    pub fn new(name: impl Into<String>, kind: CellKind, values: Vec<Cell>) -> Result<Self> {
        let name = name.into();
        if let Some((i, bad)) = values
            .iter()
            .enumerate()
            .find(|(_, c)| c.kind().is_some_and(|k| k != kind))
        {
            return Err(Error::schema(format!(
                "column `{name}` holds {kind} values but row {} is {}",
                i + 1,
                bad.kind_name()
            )));
        }
        Ok(Column { name, kind, values })
    }

    /// Build a column whose kind is taken from its values. Integer and real
    /// values may mix (integers are widened); all-missing columns are text.
    pub fn infer(name: impl Into<String>, mut values: Vec<Cell>) -> Result<Self> {
        let name = name.into();
        let mut kind = None;
        for c in &values {
            kind = match (kind, c.kind()) {
                (k, None) => k,
                (None, k) => k,
                (Some(a), Some(b)) if a == b => Some(a),
                (Some(CellKind::Int), Some(CellKind::Real)) | (Some(CellKind::Real), Some(CellKind::Int)) => {
                    Some(CellKind::Real)
                }
                (Some(a), Some(b)) => return Err(Error::schema(format!("column `{name}` mixes {a} and {b} values"))),
            };
        }
        let kind = kind.unwrap_or(CellKind::Text);
        if kind == CellKind::Real {
            for c in values.iter_mut() {
                if let Cell::Int(v) = *c {
                    *c = Cell::Real(v as f64);
                }
            }
        }
        Ok(Column { name, kind, values })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn values(&self) -> &[Cell] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, row: usize) -> &Cell {
        &self.values[row]
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn take(&self, rows: &[usize]) -> Column {
        Column {
            name: self.name.clone(),
            kind: self.kind,
            values: rows.iter().map(|&r| self.values[r].clone()).collect(),
        }
    }
}

/// A plain table: equally long, uniquely named columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Frame {
    columns: Vec<Column>,
    nrows: usize,
}

impl Frame {
    pub fn new(columns: Vec<Column>) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &columns {
            if !seen.insert(c.name.as_str()) {
                return Err(Error::schema(format!("duplicate column name `{}`", c.name)));
            }
        }
        let nrows = columns.first().map_or(0, Column::len);
        if let Some(c) = columns.iter().find(|c| c.len() != nrows) {
            return Err(Error::schema(format!(
                "column `{}` has {} rows, expected {nrows}",
                c.name,
                c.len()
            )));
        }
        Ok(Frame { columns, nrows })
    }

    /// Build from rows, inferring each column's kind.
    pub fn from_rows<S: AsRef<str>>(names: &[S], rows: Vec<Vec<Cell>>) -> Result<Self> {
        let mut cols: Vec<Vec<Cell>> = vec![Vec::with_capacity(rows.len()); names.len()];
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != names.len() {
                return Err(Error::schema(format!(
                    "row {} has {} cells, expected {}",
                    i + 1,
                    row.len(),
                    names.len()
                )));
            }
            for (col, cell) in cols.iter_mut().zip(row) {
                col.push(cell);
            }
        }
        let columns = names
            .iter()
            .zip(cols)
            .map(|(n, v)| Column::infer(n.as_ref(), v))
            .collect::<Result<Vec<_>>>()?;
        Frame::new(columns)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn schema(&self) -> Schema {
        Schema {
            fields: self
                .columns
                .iter()
                .map(|c| Field {
                    name: c.name.clone(),
                    kind: c.kind,
                })
                .collect(),
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&Column> {
        self.column(name)
            .ok_or_else(|| Error::schema(format!("unknown column `{name}`")))
    }

    pub fn row(&self, i: usize) -> Vec<Cell> {
        self.columns.iter().map(|c| c.values[i].clone()).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = Vec<Cell>> + '_ {
        (0..self.nrows).map(|i| self.row(i))
    }

    /// Rows at the given positions, in that order.
    pub fn take(&self, rows: &[usize]) -> Frame {
        Frame {
            columns: self.columns.iter().map(|c| c.take(rows)).collect(),
            nrows: rows.len(),
        }
    }

    /// Keep the named columns, in the given order.
    pub fn select<S: AsRef<str>>(&self, names: &[S]) -> Result<Frame> {
        let columns = names
            .iter()
            .map(|n| self.require(n.as_ref()).cloned())
            .collect::<Result<Vec<_>>>()?;
        Frame::new(columns).map(|mut f| {
            f.nrows = self.nrows;
            f
        })
    }

    /// Append a column, or replace the column with the same name in place.
    pub fn set_column(&mut self, column: Column) -> Result<()> {
        if !self.columns.is_empty() && column.len() != self.nrows {
            return Err(Error::schema(format!(
                "column `{}` has {} rows, expected {}",
                column.name,
                column.len(),
                self.nrows
            )));
        }
        if self.columns.is_empty() {
            self.nrows = column.len();
        }
        match self.position(&column.name) {
            Some(p) => self.columns[p] = column,
            None => self.columns.push(column),
        }
        Ok(())
    }

    pub fn drop_column(&mut self, name: &str) -> Option<Column> {
        let p = self.position(name)?;
        Some(self.columns.remove(p))
    }

    pub(crate) fn into_columns(self) -> Vec<Column> {
        self.columns
    }

    /// An empty frame with the same schema.
    pub fn empty_like(&self) -> Frame {
        self.take(&[])
    }

    /// Rows of `self` followed by rows of `other`; schemas must match.
    pub fn concat(&self, other: &Frame) -> Result<Frame> {
        if self.schema() != other.schema() {
            return Err(Error::schema("cannot concatenate frames with different schemas"));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut values = a.values.clone();
                values.extend(b.values.iter().cloned());
                Column {
                    name: a.name.clone(),
                    kind: a.kind,
                    values,
                }
            })
            .collect();
        Ok(Frame {
            columns,
            nrows: self.nrows + other.nrows,
        })
    }
}
