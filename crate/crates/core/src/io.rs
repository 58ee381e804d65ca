//! CSV ingestion with column-wise type inference, and CSV output.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::PathBuf;

use crate::cell::{Cell, CellKind};
use crate::construct::{build, TemporalTable};
use crate::error::{Error, Result};
use crate::frame::{Column, Frame};
use crate::time::{Granularity, TimePoint, Zone};

/// How to read a CSV file into a [`TemporalTable`].
#[derive(Debug, Clone)]
pub struct IngestConfig {
    pub path: PathBuf,
    pub index: String,
    pub key: Vec<String>,
    /// Infer a regular interval (the default) or declare the data irregular.
    pub regular: bool,
    /// Per column: a granularity name (`"month"`, `"ordinal"`, an adapter
    /// kind) or a strftime-style pattern such as `"%d/%m/%Y"`.
    pub time_formats: BTreeMap<String, String>,
    /// Zone label for date-times; sub-daily values default to UTC.
    pub zone: Option<Zone>,
    pub delimiter: u8,
}

impl IngestConfig {
    pub fn new(path: impl Into<PathBuf>, index: impl Into<String>) -> Self {
        IngestConfig {
            path: path.into(),
            index: index.into(),
            key: Vec::new(),
            regular: true,
            time_formats: BTreeMap::new(),
            zone: None,
            delimiter: b',',
        }
    }

    pub fn key<S: AsRef<str>>(mut self, key: &[S]) -> Self {
        self.key = key.iter().map(|k| k.as_ref().to_owned()).collect();
        self
    }

    pub fn regular(mut self, regular: bool) -> Self {
        self.regular = regular;
        self
    }

    pub fn time_format(mut self, column: impl Into<String>, format: impl Into<String>) -> Self {
        self.time_formats.insert(column.into(), format.into());
        self
    }

    pub fn zone(mut self, zone: Option<Zone>) -> Self {
        self.zone = zone;
        self
    }

    pub fn delimiter(mut self, delimiter: u8) -> Self {
        self.delimiter = delimiter;
        self
    }
}

/// Read `cfg.path` and build a temporal table from it.
pub fn ingest(cfg: &IngestConfig) -> Result<TemporalTable> {
    let file =
        File::open(&cfg.path).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", cfg.path.display())))?;
    ingest_reader(file, cfg)
}

/// Like [`ingest`], reading from any source; `cfg.path` is ignored.
pub fn ingest_reader<R: Read>(reader: R, cfg: &IngestConfig) -> Result<TemporalTable> {
    if cfg.key.contains(&cfg.index) {
        return Err(Error::schema(format!(
            "index column `{}` cannot be part of the key",
            cfg.index
        )));
    }
    let frame = read_csv(reader, cfg)?;
    build(frame, &cfg.index, &cfg.key, cfg.regular)
}

/// Parse CSV into a typed frame. The index column always becomes time;
/// other columns are inferred as integer, real, boolean, time (when a
/// format is given or every value has a canonical non-integer time shape),
/// then text. Empty fields and `NA` are missing.
pub fn read_csv<R: Read>(reader: R, cfg: &IngestConfig) -> Result<Frame> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(cfg.delimiter)
        .has_headers(true)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_owned()).collect();
    for name in cfg.time_formats.keys() {
        if !headers.contains(name) {
            return Err(Error::schema(format!("time format given for unknown column `{name}`")));
        }
    }
    let mut raw: Vec<Vec<Option<String>>> = vec![Vec::new(); headers.len()];
    for record in rdr.records() {
        let record = record?;
        if record.len() != headers.len() {
            return Err(Error::Parse {
                row: raw.first().map_or(0, Vec::len) + 1,
                column: String::new(),
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        for (col, field) in raw.iter_mut().zip(record.iter()) {
            let f = field.trim();
            col.push((!f.is_empty() && f != "NA").then(|| f.to_owned()));
        }
    }
    let columns = headers
        .iter()
        .zip(raw)
        .map(|(name, values)| {
            let format = cfg.time_formats.get(name).map(String::as_str);
            if let Some(fmt) = format {
                time_column(name, &values, Some(fmt), cfg.zone)
            } else if *name == cfg.index {
                time_column(name, &values, None, cfg.zone)
            } else {
                Ok(infer_column(name, &values, cfg.zone))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Frame::new(columns)
}

fn parse_time(text: &str, format: Option<&str>, zone: Option<Zone>) -> Option<TimePoint> {
    match format {
        None => TimePoint::detect(text, Some(Granularity::Year), zone),
        Some(fmt) if fmt.contains('%') => TimePoint::parse_with_pattern(text, fmt, zone),
        Some(fmt) => {
            let g: Granularity = fmt.parse().ok()?;
            TimePoint::parse_as(text, g, zone)
        }
    }
}

fn time_column(name: &str, values: &[Option<String>], format: Option<&str>, zone: Option<Zone>) -> Result<Column> {
    if let Some(fmt) = format {
        if !fmt.contains('%') {
            fmt.parse::<Granularity>()?;
        }
    }
    let mut first: Option<Granularity> = None;
    let mut cells = Vec::with_capacity(values.len());
    for (row, v) in values.iter().enumerate() {
        let Some(text) = v else {
            cells.push(Cell::Missing);
            continue;
        };
        let bad = |message: String| Error::Parse {
            row: row + 1,
            column: name.to_owned(),
            message,
        };
        let t = parse_time(text, format, zone).ok_or_else(|| match format {
            Some(fmt) => bad(format!("`{text}` does not match time format `{fmt}`")),
            None => bad(format!("`{text}` is not a recognised time value")),
        })?;
        match first {
            None => first = Some(t.granularity()),
            Some(g) if g != t.granularity() => {
                return Err(bad(format!(
                    "`{text}` is a {} value but earlier rows are {g}",
                    t.granularity()
                )))
            }
            Some(_) => {}
        }
        cells.push(Cell::Time(t));
    }
    Column::new(name, CellKind::Time, cells)
}

fn infer_column(name: &str, values: &[Option<String>], zone: Option<Zone>) -> Column {
    let present: Vec<&str> = values.iter().flatten().map(String::as_str).collect();
    let convert = |f: &dyn Fn(&str) -> Option<Cell>| -> Option<Vec<Cell>> {
        values
            .iter()
            .map(|v| match v {
                None => Some(Cell::Missing),
                Some(s) => f(s),
            })
            .collect()
    };
    let kind_and_cells = if present.is_empty() {
        None
    } else {
        convert(&|s| s.parse::<i64>().ok().map(Cell::Int))
            .map(|c| (CellKind::Int, c))
            .or_else(|| convert(&parse_real).map(|c| (CellKind::Real, c)))
            .or_else(|| convert(&parse_bool).map(|c| (CellKind::Bool, c)))
            .or_else(|| {
                let cells = convert(&|s| TimePoint::detect(s, None, zone).map(Cell::Time))?;
                let mut grans = cells.iter().filter_map(|c| c.as_time().map(TimePoint::granularity));
                let g = grans.next()?;
                grans.all(|h| h == g).then_some((CellKind::Time, cells))
            })
    };
    let (kind, cells) = kind_and_cells.unwrap_or_else(|| {
        (
            CellKind::Text,
            values
                .iter()
                .map(|v| v.as_ref().map_or(Cell::Missing, Cell::text))
                .collect(),
        )
    });
    Column::new(name, kind, cells).expect("cells converted to one kind")
}

fn parse_real(s: &str) -> Option<Cell> {
    if !s.bytes().any(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse::<f64>().ok().map(Cell::Real)
}

fn parse_bool(s: &str) -> Option<Cell> {
    match s {
        "true" | "TRUE" | "True" => Some(Cell::Bool(true)),
        "false" | "FALSE" | "False" => Some(Cell::Bool(false)),
        _ => None,
    }
}

/// Write `frame` as CSV with a header row; missing cells are written as `NA`.
pub fn write_csv<W: Write>(frame: &Frame, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(frame.names())?;
    for row in frame.rows() {
        w.write_record(row.iter().map(Cell::to_string))?;
    }
    w.flush()?;
    Ok(())
}
