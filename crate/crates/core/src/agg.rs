//! Fixed aggregation vocabulary shared by summarize, gap filling and the
//! rolling verbs. Missing cells are skipped.

use std::fmt;
use std::str::FromStr;

use crate::cell::{Cell, CellKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AggFn {
    Sum,
    Mean,
    Min,
    Max,
    /// Number of non-missing values.
    Count,
    /// Linearly interpolated quantile, `p` in `[0, 1]`.
    Quantile(f64),
}

impl AggFn {
    /// Kind of the result when aggregating a column of `input` kind.
    pub fn output_kind(&self, input: CellKind) -> Result<CellKind> {
        match self {
            AggFn::Count => Ok(CellKind::Int),
            AggFn::Sum if input.is_numeric() => Ok(input),
            AggFn::Mean | AggFn::Quantile(_) if input.is_numeric() => Ok(CellKind::Real),
            AggFn::Min | AggFn::Max => Ok(input),
            _ => Err(Error::schema(format!("cannot compute {self} over {input} values"))),
        }
    }

    pub fn apply(&self, kind: CellKind, values: &[Cell]) -> Result<Cell> {
        self.output_kind(kind)?;
        let present = values.iter().filter(|c| !c.is_missing());
        Ok(match *self {
            AggFn::Count => Cell::Int(present.count() as i64),
            AggFn::Sum => match kind {
                CellKind::Int => {
                    let mut acc: i64 = 0;
                    for c in present {
                        acc = acc
                            .checked_add(c.as_i64().expect("integer column"))
                            .ok_or_else(|| Error::Validity("integer overflow in sum".into()))?;
                    }
                    Cell::Int(acc)
                }
                _ => Cell::Real(present.filter_map(Cell::as_f64).sum()),
            },
            AggFn::Mean => {
                let xs: Vec<f64> = present.filter_map(Cell::as_f64).collect();
                if xs.is_empty() {
                    Cell::Missing
                } else {
                    Cell::Real(xs.iter().sum::<f64>() / xs.len() as f64)
                }
            }
            AggFn::Min => present.min().cloned().unwrap_or(Cell::Missing),
            AggFn::Max => present.max().cloned().unwrap_or(Cell::Missing),
            AggFn::Quantile(p) => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::precondition(format!("quantile probability {p} outside [0, 1]")));
                }
                let mut xs: Vec<f64> = present.filter_map(Cell::as_f64).collect();
                if xs.is_empty() {
                    return Ok(Cell::Missing);
                }
                xs.sort_by(f64::total_cmp);
                let h = (xs.len() - 1) as f64 * p;
                let lo = h.floor() as usize;
                let hi = h.ceil() as usize;
                Cell::Real(xs[lo] + (h - lo as f64) * (xs[hi] - xs[lo]))
            }
        })
    }

    /// Short name used in derived column names.
    pub fn label(&self) -> String {
        match self {
            AggFn::Quantile(p) => format!("q{}", (p * 100.0).round()),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for AggFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AggFn::Sum => f.write_str("sum"),
            AggFn::Mean => f.write_str("mean"),
            AggFn::Min => f.write_str("min"),
            AggFn::Max => f.write_str("max"),
            AggFn::Count => f.write_str("count"),
            AggFn::Quantile(p) => write!(f, "quantile:{p}"),
        }
    }
}

impl FromStr for AggFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s.to_ascii_lowercase().as_str() {
            "sum" => AggFn::Sum,
            "mean" | "avg" => AggFn::Mean,
            "min" => AggFn::Min,
            "max" => AggFn::Max,
            "count" | "n" => AggFn::Count,
            "median" => AggFn::Quantile(0.5),
            other => {
                let p = other
                    .strip_prefix("quantile:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| Error::schema(format!("unknown aggregation `{s}`")))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::schema(format!("quantile probability {p} outside [0, 1]")));
                }
                AggFn::Quantile(p)
            }
        })
    }
}
