//! `tempora`: ingest, validate, gap-check, aggregate and roll temporal tables
//! stored as CSV.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::OnceLock;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tempora_core::verbs::{group_by, index_by, summarize, Aggregation, IndexMap};
use tempora_core::{
    count_gaps, fill_gaps, has_gaps, ingest, render_summary, roll_by_key, scan_gaps, write_csv, AggFn, Cell, CellKind,
    Column, Error, ErrorClass, Execution, FillPolicy, Frame, Granularity, IngestConfig, Partial, RollOp, TemporalTable,
    TimePoint, Window, Zone,
};

#[derive(Parser)]
#[command(name = "tempora", version, about = "Temporal tables from CSV files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that key and index identify rows uniquely; print a summary or
    /// the duplicated rows.
    Validate(Input),
    /// Print the contextual summary.
    Print(Input),
    /// Detect, list, summarise or fill implicit gaps.
    Gaps(GapsArgs),
    /// Aggregate over a coarser index.
    Agg(AggArgs),
    /// Rolling-window aggregation within each key.
    Roll(RollArgs),
}

#[derive(Args)]
struct Input {
    /// CSV file with a header row.
    csv: PathBuf,
    /// Index (time) column.
    #[arg(long)]
    index: String,
    /// Key columns, comma separated.
    #[arg(long, value_delimiter = ',')]
    key: Vec<String>,
    /// Declare the data irregularly spaced.
    #[arg(long)]
    irregular: bool,
    /// Time format for the index (`FMT`) or another column (`COL=FMT`):
    /// a granularity name such as `month` or `ordinal`, or a strftime pattern.
    #[arg(long = "time-format")]
    time_format: Vec<String>,
    /// Zone label for date-times (`UTC`, `+10:00`).
    #[arg(long)]
    zone: Option<String>,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
}

impl Input {
    fn config(&self) -> Result<IngestConfig, Failure> {
        if !self.delimiter.is_ascii() {
            return Err(Failure::usage("delimiter must be a single ASCII character"));
        }
        let mut cfg = IngestConfig::new(&self.csv, &self.index)
            .key(&self.key)
            .regular(!self.irregular)
            .delimiter(self.delimiter as u8);
        for item in &self.time_format {
            cfg = match item.split_once('=') {
                Some((col, fmt)) => cfg.time_format(col.trim(), fmt),
                None => cfg.time_format(&self.index, item),
            };
        }
        if let Some(z) = &self.zone {
            cfg = cfg.zone(Some(z.parse::<Zone>()?));
        }
        Ok(cfg)
    }

    fn load(&self) -> Result<TemporalTable, Failure> {
        let t = ingest(&self.config()?)?;
        for note in t.notes() {
            eprintln!("note: {note}");
        }
        Ok(t)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GapAction {
    Has,
    Scan,
    Count,
    Fill,
}

#[derive(Args)]
struct GapsArgs {
    action: GapAction,
    #[command(flatten)]
    input: Input,
    /// Use the span over all keys instead of each key's own span.
    #[arg(long)]
    full: bool,
    /// Fill policy for `fill`: `COL=VALUE`, `COL=NA` or `COL=<aggregate>`
    /// such as `COL=mean`.
    #[arg(long = "fill-with")]
    fill_with: Vec<String>,
}

#[derive(Args)]
struct AggArgs {
    #[command(flatten)]
    input: Input,
    /// Target granularity of the index (year, quarter, month, ...).
    #[arg(long)]
    by: String,
    /// `COL=FUNC` with FUNC one of sum, mean, min, max, count, median,
    /// quantile:P. Repeatable.
    #[arg(long = "fn", required = true)]
    funcs: Vec<String>,
    /// Grouping columns kept as the key of the result, comma separated.
    #[arg(long, value_delimiter = ',')]
    group: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RollKind {
    Slide,
    Tile,
    Stretch,
}

#[derive(Args)]
struct RollArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    op: RollKind,
    /// Numeric column to roll over.
    #[arg(long)]
    col: String,
    /// Aggregate applied to each window.
    #[arg(long = "fn")]
    func: String,
    /// Window size (slide, tile).
    #[arg(long)]
    size: Option<usize>,
    /// Window step (slide, stretch).
    #[arg(long)]
    step: Option<usize>,
    /// Initial prefix length (stretch).
    #[arg(long)]
    init: Option<usize>,
    /// Also emit the shorter windows at the start (slide).
    #[arg(long)]
    partial: bool,
    /// Name of the result column; defaults to `<col>_<fn>`.
    #[arg(long)]
    output: Option<String>,
    /// Process keys in parallel.
    #[arg(long)]
    parallel: bool,
}

/// A failed command: what to tell the user and which exit code to use.
struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.class() {
            ErrorClass::Schema => 2,
            ErrorClass::Io => 3,
            _ => 1,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::from(e).into()
    }
}

fn emit(frame: &Frame) -> Result<(), Failure> {
    let stdout = io::stdout();
    write_csv(frame, stdout.lock())?;
    Ok(())
}

/// On a uniqueness failure, print the offending rows as CSV (with their
/// one-based data row numbers) before failing.
fn report_duplicates(input: &Input) -> Result<(), Failure> {
    let cfg = input.config()?;
    let file = std::fs::File::open(&cfg.path)?;
    let raw = tempora_core::read_csv(file, &cfg)?;
    let report = tempora_core::duplicates(&raw, &cfg.index, &cfg.key)?;
    if report.is_empty() {
        return Ok(());
    }
    let rows: Vec<Cell> = report.positions.iter().map(|&p| Cell::Int(p as i64 + 1)).collect();
    let mut columns = vec![Column::new(".row", CellKind::Int, rows)?];
    columns.extend(report.rows.columns().iter().cloned());
    emit(&Frame::new(columns)?)
}

fn gaps(args: &GapsArgs) -> Result<(), Failure> {
    let t = args.input.load()?;
    if !matches!(args.action, GapAction::Fill) && !args.fill_with.is_empty() {
        return Err(Failure::usage("--fill-with only applies to `gaps fill`"));
    }
    match args.action {
        GapAction::Has => {
            let flags = has_gaps(&t, args.full)?;
            let mut columns = Vec::new();
            for (i, name) in t.key().iter().enumerate() {
                let kind = t.frame().require(name)?.kind();
                let values = flags.iter().map(|f| f.key[i].clone()).collect();
                columns.push(Column::new(name, kind, values)?);
            }
            let values = flags.iter().map(|f| Cell::Bool(f.has_gaps)).collect();
            columns.push(Column::new(".gaps", CellKind::Bool, values)?);
            emit(&Frame::new(columns)?)
        }
        GapAction::Scan => emit(&scan_gaps(&t, args.full)?),
        GapAction::Count => emit(&count_gaps(&t, args.full)?.to_frame()?),
        GapAction::Fill => {
            let fills = args
                .fill_with
                .iter()
                .map(|item| fill_policy(&t, item))
                .collect::<Result<Vec<_>, _>>()?;
            emit(fill_gaps(&t, &fills, args.full)?.frame())
        }
    }
}

fn fill_policy(t: &TemporalTable, item: &str) -> Result<(String, FillPolicy), Failure> {
    let (col, value) = item
        .split_once('=')
        .ok_or_else(|| Failure::usage(format!("--fill-with expects COL=VALUE, got `{item}`")))?;
    let (col, value) = (col.trim(), value.trim());
    let column = t.frame().require(col)?;
    if value.is_empty() || value == "NA" {
        return Ok((col.to_owned(), FillPolicy::Missing));
    }
    if let Ok(f) = value.parse::<AggFn>() {
        return Ok((col.to_owned(), FillPolicy::Aggregate(f)));
    }
    let bad = || {
        Failure::usage(format!(
            "`{value}` is not a valid {} value for column `{col}`",
            column.kind()
        ))
    };
    let cell = match column.kind() {
        CellKind::Int => Cell::Int(value.parse().map_err(|_| bad())?),
        CellKind::Real => Cell::Real(value.parse().map_err(|_| bad())?),
        CellKind::Bool => Cell::Bool(value.parse().map_err(|_| bad())?),
        CellKind::Text => Cell::text(value),
        CellKind::Time => {
            let like = column.values().iter().find_map(Cell::as_time).ok_or_else(bad)?;
            Cell::Time(TimePoint::parse_as(value, like.granularity(), like.zone()).ok_or_else(bad)?)
        }
    };
    Ok((col.to_owned(), FillPolicy::Constant(cell)))
}

fn agg(args: &AggArgs) -> Result<(), Failure> {
    let t = args.input.load()?;
    let g: Granularity = args.by.parse()?;
    let index_name = if t.index_granularity() == Some(g) || t.frame().column(&g.name()).is_some() {
        t.index().to_owned()
    } else {
        g.name()
    };
    let mut parsed = Vec::new();
    for item in &args.funcs {
        let (col, func) = item
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("--fn expects COL=FUNC, got `{item}`")))?;
        parsed.push((col.trim().to_owned(), func.trim().parse::<AggFn>()?));
    }
    let aggs: Vec<Aggregation> = parsed
        .iter()
        .map(|(col, func)| {
            let repeated = parsed.iter().filter(|(c, _)| c == col).count() > 1;
            let name = if repeated {
                format!("{col}_{}", func.label())
            } else {
                col.clone()
            };
            Aggregation::new(name, *func, col)
        })
        .collect();
    let grouped = group_by(&t, &args.group)?;
    let grouped = index_by(&grouped, &index_name, IndexMap::Floor(g))?;
    emit(summarize(&grouped, &aggs)?.frame())
}

fn roll(args: &RollArgs) -> Result<(), Failure> {
    let t = args.input.load()?;
    let func: AggFn = args.func.parse()?;
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure::usage(format!("--op needs --{flag}")));
    let op = match args.op {
        RollKind::Slide => {
            let mut w = Window::new(need(args.size, "size")?)?;
            if let Some(s) = args.step {
                w = w.with_step(s)?;
            }
            if args.partial {
                w = w.with_partial(Partial::EmitPartial);
            }
            RollOp::Slide(w)
        }
        RollKind::Tile => RollOp::Tile(need(args.size, "size")?),
        RollKind::Stretch => RollOp::Stretch {
            init: need(args.init, "init")?,
            step: args.step.unwrap_or(1),
        },
    };
    let kind = t.frame().require(&args.col)?.kind();
    func.output_kind(kind)?;
    let output = args
        .output
        .clone()
        .unwrap_or_else(|| format!("{}_{}", args.col, func.label()));
    let failed: OnceLock<Error> = OnceLock::new();
    let f = |window: &[Cell]| match func.apply(kind, window) {
        Ok(c) => c,
        Err(e) => {
            let _ = failed.set(e);
            Cell::Missing
        }
    };
    let exec = if args.parallel {
        Execution::Parallel
    } else {
        Execution::Serial
    };
    let out = roll_by_key(&t, &args.col, op, f, &output, exec)?;
    if let Some(e) = failed.into_inner() {
        return Err(e.into());
    }
    emit(out.frame())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Validate(input) | Command::Print(input) => {
            let t = input.load().map_err(|f| {
                if f.code != 1 || !matches!(cli.command, Command::Validate(_)) {
                    return f;
                }
                report_duplicates(input).err().unwrap_or(f)
            })?;
            print!("{}", render_summary(&t));
            Ok(())
        }
        Command::Gaps(args) => gaps(args),
        Command::Agg(args) => agg(args),
        Command::Roll(args) => roll(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    let _ = io::stdout().flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
