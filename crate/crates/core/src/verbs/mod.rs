//! Table verbs that take a temporal table and return one.
//!
//! Every verb re-establishes the table invariants: uniqueness of
//! `(key, index)`, past-to-future ordering and a freshly inferred interval.
//! Verbs that would break validity return an error instead of a degraded
//! table.

mod columns;
mod expr;
mod group;
mod join;
mod reshape;
mod rows;

pub use columns::{mutate, select, transmute};
pub use expr::{col, lit, ArithOp, CmpOp, Expr};
pub use group::{group_by, group_by_key, index_by, summarize, Aggregation, Grouping, IndexBy, IndexMap};
pub use join::{join, JoinKind};
pub use reshape::{gather, spread};
pub use rows::{arrange, filter, filter_index, IndexFilterExpr, SortKey};

use crate::construct::TemporalTable;

/// Result of a verb: the table plus any non-fatal diagnostics.
#[derive(Debug, Clone)]
pub struct VerbOutcome {
    pub table: TemporalTable,
    pub warnings: Vec<String>,
}

impl VerbOutcome {
    pub(crate) fn clean(table: TemporalTable) -> Self {
        VerbOutcome {
            table,
            warnings: Vec::new(),
        }
    }

    pub fn into_table(self) -> TemporalTable {
        self.table
    }
}
