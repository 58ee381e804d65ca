//! Temporal tables: frames with a declared time index, an identifying key
//! and an inferred interval, plus gap handling, table verbs and rolling
//! windows that keep those guarantees.

pub mod adapter;
pub mod agg;
pub mod cell;
pub mod construct;
pub mod display;
pub mod error;
pub mod frame;
pub mod gaps;
pub mod interval;
pub mod io;
pub mod rolling;
pub mod time;
pub mod verbs;

pub use adapter::{register_index_adapter, AdapterId, IndexAdapter};
pub use agg::AggFn;
pub use cell::{Cell, CellKind};
pub use construct::{build, duplicates, DuplicateReport, KeyGroup, TemporalTable};
pub use display::render_summary;
pub use error::{Error, ErrorClass, Result};
pub use frame::{Column, Field, Frame, Schema};
pub use gaps::{count_gaps, fill_gaps, has_gaps, scan_gaps, FillPolicy, GapRange, GapReport, KeyGapFlag, KeyGaps};
pub use interval::{gcd_of_diffs, infer_interval, Interval};
pub use io::{ingest, ingest_reader, read_csv, write_csv, IngestConfig};
pub use rolling::{roll_by_key, Execution, Partial, RollOp, Window};
pub use time::{Granularity, TimePoint, Zone};
pub use verbs::VerbOutcome;
