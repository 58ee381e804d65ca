use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::time::TimePoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    Int,
    Real,
    Bool,
    Text,
    Time,
}

impl CellKind {
    pub fn name(self) -> &'static str {
        match self {
            CellKind::Int => "integer",
            CellKind::Real => "real",
            CellKind::Bool => "boolean",
            CellKind::Text => "text",
            CellKind::Time => "time",
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, CellKind::Int | CellKind::Real)
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One value of a heterogeneous table.
///
/// `Eq`, `Hash` and `Ord` are structural and total (reals compare by
/// `total_cmp`, missing sorts last), so cells can key hash maps and sorts.
#[derive(Debug, Clone)]
pub enum Cell {
    Missing,
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(Arc<str>),
    Time(TimePoint),
}

impl Cell {
    pub fn text(s: impl AsRef<str>) -> Cell {
        Cell::Text(Arc::from(s.as_ref()))
    }

    pub fn kind(&self) -> Option<CellKind> {
        Some(match self {
            Cell::Missing => return None,
            Cell::Int(_) => CellKind::Int,
            Cell::Real(_) => CellKind::Real,
            Cell::Bool(_) => CellKind::Bool,
            Cell::Text(_) => CellKind::Text,
            Cell::Time(_) => CellKind::Time,
        })
    }

    pub fn kind_name(&self) -> &'static str {
        self.kind().map_or("missing", CellKind::name)
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Real(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match *self {
            Cell::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match *self {
            Cell::Bool(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_time(&self) -> Option<&TimePoint> {
        match self {
            Cell::Time(t) => Some(t),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Cell::Int(_) => 0,
            Cell::Real(_) => 1,
            Cell::Bool(_) => 2,
            Cell::Text(_) => 3,
            Cell::Time(_) => 4,
            Cell::Missing => 5,
        }
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cell::Int(a), Cell::Int(b)) => a.cmp(b),
            (Cell::Real(a), Cell::Real(b)) => a.total_cmp(b),
            (Cell::Bool(a), Cell::Bool(b)) => a.cmp(b),
            (Cell::Text(a), Cell::Text(b)) => a.cmp(b),
            (Cell::Time(a), Cell::Time(b)) => a.granularity().cmp(&b.granularity()).then(a.ticks().cmp(&b.ticks())),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl Hash for Cell {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            Cell::Missing => {}
            Cell::Int(v) => v.hash(state),
            Cell::Real(v) => v.to_bits().hash(state),
            Cell::Bool(v) => v.hash(state),
            Cell::Text(v) => v.hash(state),
            Cell::Time(v) => v.hash(state),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Missing => f.write_str("NA"),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Real(v) => write!(f, "{v}"),
            Cell::Bool(v) => write!(f, "{v}"),
            Cell::Text(v) => f.write_str(v),
            Cell::Time(v) => write!(f, "{v}"),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::text(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(Arc::from(v))
    }
}

impl From<TimePoint> for Cell {
    fn from(v: TimePoint) -> Self {
        Cell::Time(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_sorts_last() {
        let mut v = vec![Cell::Missing, Cell::text("b"), Cell::text("a")];
        v.sort();
        assert_eq!(v, vec![Cell::text("a"), Cell::text("b"), Cell::Missing]);
    }

    #[test]
    fn display() {
        assert_eq!(Cell::Real(122.5).to_string(), "122.5");
        assert_eq!(Cell::Real(296.0).to_string(), "296");
        assert_eq!(Cell::Missing.to_string(), "NA");
        assert_eq!(Cell::Time(TimePoint::year(2011)).to_string(), "2011");
    }
}
