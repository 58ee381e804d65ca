//! Row-wise expressions over named columns.

use std::cmp::Ordering;
use std::fmt;
use std::ops;

use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::frame::Frame;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Expression evaluated once per row.
///
/// Comparisons and arithmetic involving a missing cell yield missing;
/// `and`/`or` use three-valued logic.
#[derive(Debug, Clone)]
pub enum Expr {
    Col(String),
    Lit(Cell),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    IsMissing(Box<Expr>),
}

pub fn col(name: impl Into<String>) -> Expr {
    Expr::Col(name.into())
}

pub fn lit(value: impl Into<Cell>) -> Expr {
    Expr::Lit(value.into())
}

macro_rules! cmp_builder {
    ($($name:ident => $op:ident),* $(,)?) => {
        $(
            pub fn $name(self, rhs: impl Into<Expr>) -> Expr {
                Expr::Cmp(CmpOp::$op, Box::new(self), Box::new(rhs.into()))
            }
        )*
    };
}

impl Expr {
    cmp_builder! {
        equals => Eq,
        not_equals => Ne,
        lt => Lt,
        le => Le,
        gt => Gt,
        ge => Ge,
    }

    pub fn and(self, rhs: impl Into<Expr>) -> Expr {
        Expr::And(Box::new(self), Box::new(rhs.into()))
    }

    pub fn or(self, rhs: impl Into<Expr>) -> Expr {
        Expr::Or(Box::new(self), Box::new(rhs.into()))
    }

    pub fn is_missing(self) -> Expr {
        Expr::IsMissing(Box::new(self))
    }

    /// Column names referenced by the expression.
    pub fn columns(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_columns(&mut out);
        out
    }

    fn collect_columns<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Col(c) => out.push(c),
            Expr::Lit(_) => {}
            Expr::Cmp(_, a, b) | Expr::Arith(_, a, b) | Expr::And(a, b) | Expr::Or(a, b) => {
                a.collect_columns(out);
                b.collect_columns(out);
            }
            Expr::Not(a) | Expr::IsMissing(a) => a.collect_columns(out),
        }
    }

    pub(crate) fn check(&self, frame: &Frame) -> Result<()> {
        for c in self.columns() {
            frame.require(c)?;
        }
        Ok(())
    }

    pub(crate) fn eval(&self, frame: &Frame, row: usize) -> Result<Cell> {
        Ok(match self {
            Expr::Col(c) => frame.require(c)?.get(row).clone(),
            Expr::Lit(v) => v.clone(),
            Expr::Cmp(op, a, b) => compare(*op, &a.eval(frame, row)?, &b.eval(frame, row)?)?,
            Expr::Arith(op, a, b) => arith(*op, &a.eval(frame, row)?, &b.eval(frame, row)?)?,
            Expr::And(a, b) => {
                let (x, y) = (truth(&a.eval(frame, row)?)?, truth(&b.eval(frame, row)?)?);
                match (x, y) {
                    (Some(false), _) | (_, Some(false)) => Cell::Bool(false),
                    (Some(true), Some(true)) => Cell::Bool(true),
                    _ => Cell::Missing,
                }
            }
            Expr::Or(a, b) => {
                let (x, y) = (truth(&a.eval(frame, row)?)?, truth(&b.eval(frame, row)?)?);
                match (x, y) {
                    (Some(true), _) | (_, Some(true)) => Cell::Bool(true),
                    (Some(false), Some(false)) => Cell::Bool(false),
                    _ => Cell::Missing,
                }
            }
            Expr::Not(a) => match truth(&a.eval(frame, row)?)? {
                Some(v) => Cell::Bool(!v),
                None => Cell::Missing,
            },
            Expr::IsMissing(a) => Cell::Bool(a.eval(frame, row)?.is_missing()),
        })
    }
}

fn truth(c: &Cell) -> Result<Option<bool>> {
    match c {
        Cell::Bool(b) => Ok(Some(*b)),
        Cell::Missing => Ok(None),
        other => Err(Error::schema(format!(
            "expected a boolean condition, found a {} value",
            other.kind_name()
        ))),
    }
}

fn compare(op: CmpOp, a: &Cell, b: &Cell) -> Result<Cell> {
    let ord = match (a, b) {
        (Cell::Missing, _) | (_, Cell::Missing) => return Ok(Cell::Missing),
        (Cell::Int(x), Cell::Int(y)) => x.cmp(y),
        (Cell::Int(_) | Cell::Real(_), Cell::Int(_) | Cell::Real(_)) => {
            let (x, y) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            match x.partial_cmp(&y) {
                Some(o) => o,
                None => return Ok(Cell::Missing),
            }
        }
        (Cell::Time(x), Cell::Time(y)) => x.partial_cmp(y).ok_or_else(|| {
            Error::schema(format!(
                "cannot compare {} and {} time points",
                x.granularity(),
                y.granularity()
            ))
        })?,
        (Cell::Text(_), Cell::Text(_)) | (Cell::Bool(_), Cell::Bool(_)) => a.cmp(b),
        _ => {
            return Err(Error::schema(format!(
                "cannot compare {} with {}",
                a.kind_name(),
                b.kind_name()
            )))
        }
    };
    Ok(Cell::Bool(match op {
        CmpOp::Eq => ord == Ordering::Equal,
        CmpOp::Ne => ord != Ordering::Equal,
        CmpOp::Lt => ord == Ordering::Less,
        CmpOp::Le => ord != Ordering::Greater,
        CmpOp::Gt => ord == Ordering::Greater,
        CmpOp::Ge => ord != Ordering::Less,
    }))
}

fn arith(op: ArithOp, a: &Cell, b: &Cell) -> Result<Cell> {
    let overflow = || Error::Validity(format!("integer overflow evaluating {a} {op} {b}"));
    Ok(match (a, b) {
        (Cell::Missing, _) | (_, Cell::Missing) => Cell::Missing,
        (Cell::Int(x), Cell::Int(y)) => match op {
            ArithOp::Add => Cell::Int(x.checked_add(*y).ok_or_else(overflow)?),
            ArithOp::Sub => Cell::Int(x.checked_sub(*y).ok_or_else(overflow)?),
            ArithOp::Mul => Cell::Int(x.checked_mul(*y).ok_or_else(overflow)?),
            ArithOp::Div => Cell::Real(*x as f64 / *y as f64),
        },
        (Cell::Int(_) | Cell::Real(_), Cell::Int(_) | Cell::Real(_)) => {
            let (x, y) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            Cell::Real(match op {
                ArithOp::Add => x + y,
                ArithOp::Sub => x - y,
                ArithOp::Mul => x * y,
                ArithOp::Div => x / y,
            })
        }
        (Cell::Time(t), Cell::Int(n)) if matches!(op, ArithOp::Add | ArithOp::Sub) => {
            let n = if op == ArithOp::Sub { -n } else { *n };
            Cell::Time(t.shift(n))
        }
        _ => {
            return Err(Error::schema(format!(
                "cannot apply {op} to {} and {}",
                a.kind_name(),
                b.kind_name()
            )))
        }
    })
}

impl fmt::Display for ArithOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        })
    }
}

impl From<Cell> for Expr {
    fn from(c: Cell) -> Self {
        Expr::Lit(c)
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::Lit(Cell::Int(v))
    }
}

impl From<f64> for Expr {
    fn from(v: f64) -> Self {
        Expr::Lit(Cell::Real(v))
    }
}

impl From<bool> for Expr {
    fn from(v: bool) -> Self {
        Expr::Lit(Cell::Bool(v))
    }
}

impl From<&str> for Expr {
    fn from(v: &str) -> Self {
        Expr::Lit(Cell::text(v))
    }
}

impl From<crate::time::TimePoint> for Expr {
    fn from(v: crate::time::TimePoint) -> Self {
        Expr::Lit(Cell::Time(v))
    }
}

macro_rules! arith_impl {
    ($($trait:ident, $method:ident => $op:ident);* $(;)?) => {
        $(
            impl<R: Into<Expr>> ops::$trait<R> for Expr {
                type Output = Expr;
                fn $method(self, rhs: R) -> Expr {
                    Expr::Arith(ArithOp::$op, Box::new(self), Box::new(rhs.into()))
                }
            }
        )*
    };
}

arith_impl! {
    Add, add => Add;
    Sub, sub => Sub;
    Mul, mul => Mul;
    Div, div => Div;
}

impl ops::Not for Expr {
    type Output = Expr;
    fn not(self) -> Expr {
        Expr::Not(Box::new(self))
    }
}
