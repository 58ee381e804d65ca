//! Time values: granularities, zones, and integer-tick time points.
//!
//! Calendar ticks count whole granularity units since 1970-01-01 00:00:00.
//! Sub-daily ticks are UTC; day-and-coarser ticks count local calendar
//! periods. Weeks are ISO weeks starting on Monday, so week tick 0 is the
//! week of 1969-12-29.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use crate::adapter::{self, AdapterId};
use crate::error::{Error, Result};

pub(crate) const MS_PER_SECOND: i64 = 1_000;
pub(crate) const MS_PER_MINUTE: i64 = 60 * MS_PER_SECOND;
pub(crate) const MS_PER_HOUR: i64 = 60 * MS_PER_MINUTE;
pub(crate) const MS_PER_DAY: i64 = 24 * MS_PER_HOUR;

const MONTH_ABBREV: [&str; 12] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];

/// Unit in which time ticks are counted.
///
/// The derived `Ord` is an arbitrary total order for sorting; use
/// [`Granularity::coarseness_cmp`] for the coarser/finer relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Granularity {
    Year,
    Quarter,
    Month,
    Week,
    Day,
    Hour,
    Minute,
    Second,
    Millisecond,
    /// Plain integers (simulation steps, sequence numbers).
    Ordinal,
    /// A kind supplied by a registered index adapter.
    Custom(AdapterId),
}

impl Granularity {
    pub const CALENDAR: [Granularity; 9] = [
        Granularity::Year,
        Granularity::Quarter,
        Granularity::Month,
        Granularity::Week,
        Granularity::Day,
        Granularity::Hour,
        Granularity::Minute,
        Granularity::Second,
        Granularity::Millisecond,
    ];

    fn rank(self) -> Option<u8> {
        Some(match self {
            Granularity::Millisecond => 0,
            Granularity::Second => 1,
            Granularity::Minute => 2,
            Granularity::Hour => 3,
            Granularity::Day => 4,
            Granularity::Week => 5,
            Granularity::Month => 6,
            Granularity::Quarter => 7,
            Granularity::Year => 8,
            Granularity::Ordinal | Granularity::Custom(_) => return None,
        })
    }

    pub fn is_calendar(self) -> bool {
        self.rank().is_some()
    }

    pub fn is_subdaily(self) -> bool {
        matches!(self.rank(), Some(r) if r < 4)
    }

    /// `Greater` when `self` is coarser than `other`. Ordinal and custom
    /// kinds only compare equal to themselves.
    pub fn coarseness_cmp(self, other: Granularity) -> Option<Ordering> {
        match (self.rank(), other.rank()) {
            (Some(a), Some(b)) => Some(a.cmp(&b)),
            _ if self == other => Some(Ordering::Equal),
            _ => None,
        }
    }

    pub fn is_coarser_or_equal(self, other: Granularity) -> bool {
        matches!(self.coarseness_cmp(other), Some(Ordering::Greater | Ordering::Equal))
    }

    /// Letter used by the interval shorthand, e.g. `Y` in `[1Y]`.
    pub fn unit_symbol(self) -> String {
        match self {
            Granularity::Year => "Y".into(),
            Granularity::Quarter => "Q".into(),
            Granularity::Month => "M".into(),
            Granularity::Week => "W".into(),
            Granularity::Day => "D".into(),
            Granularity::Hour => "h".into(),
            Granularity::Minute => "m".into(),
            Granularity::Second => "s".into(),
            Granularity::Millisecond => "ms".into(),
            Granularity::Ordinal => String::new(),
            Granularity::Custom(id) => adapter::unit_symbol(id),
        }
    }

    pub fn name(self) -> String {
        match self {
            Granularity::Year => "year".into(),
            Granularity::Quarter => "quarter".into(),
            Granularity::Month => "month".into(),
            Granularity::Week => "week".into(),
            Granularity::Day => "day".into(),
            Granularity::Hour => "hour".into(),
            Granularity::Minute => "minute".into(),
            Granularity::Second => "second".into(),
            Granularity::Millisecond => "millisecond".into(),
            Granularity::Ordinal => "ordinal".into(),
            Granularity::Custom(id) => adapter::kind_name(id),
        }
    }

    fn unit_ms(self) -> Option<i64> {
        match self {
            Granularity::Hour => Some(MS_PER_HOUR),
            Granularity::Minute => Some(MS_PER_MINUTE),
            Granularity::Second => Some(MS_PER_SECOND),
            Granularity::Millisecond => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "year" | "yearly" | "y" => Granularity::Year,
            "quarter" | "quarterly" | "q" => Granularity::Quarter,
            "month" | "monthly" => Granularity::Month,
            "week" | "weekly" | "w" => Granularity::Week,
            "day" | "daily" | "date" | "d" => Granularity::Day,
            "hour" | "hourly" | "h" => Granularity::Hour,
            "minute" | "min" => Granularity::Minute,
            "second" | "sec" | "s" => Granularity::Second,
            "millisecond" | "ms" => Granularity::Millisecond,
            "ordinal" | "integer" => Granularity::Ordinal,
            other => match adapter::lookup_kind(other) {
                Some(id) => Granularity::Custom(id),
                None => return Err(Error::schema(format!("unknown granularity `{s}`"))),
            },
        })
    }
}

/// Zone label of a date-time. Only UTC and fixed offsets are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Zone {
    Utc,
    /// Seconds east of UTC.
    Fixed(i32),
}

impl Zone {
    pub fn offset_ms(self) -> i64 {
        match self {
            Zone::Utc => 0,
            Zone::Fixed(secs) => i64::from(secs) * MS_PER_SECOND,
        }
    }
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Zone::Utc | Zone::Fixed(0) => f.write_str("UTC"),
            Zone::Fixed(secs) => {
                let sign = if secs < 0 { '-' } else { '+' };
                let abs = secs.unsigned_abs();
                write!(f, "{sign}{:02}:{:02}", abs / 3600, (abs / 60) % 60)
            }
        }
    }
}

impl FromStr for Zone {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("utc") || t.eq_ignore_ascii_case("gmt") || t == "Z" {
            return Ok(Zone::Utc);
        }
        let body = t.strip_prefix("UTC").or_else(|| t.strip_prefix("GMT")).unwrap_or(t);
        let bad = || Error::schema(format!("unsupported zone `{s}` (use UTC or +HH:MM)"));
        let (sign, rest) = match body.as_bytes().first() {
            Some(b'+') => (1, &body[1..]),
            Some(b'-') => (-1, &body[1..]),
            _ => return Err(bad()),
        };
        let (h, m) = match rest.split_once(':') {
            Some((h, m)) => (h, m),
            None if rest.len() == 4 => rest.split_at(2),
            None => (rest, "0"),
        };
        let h: i32 = h.parse().map_err(|_| bad())?;
        let m: i32 = m.parse().map_err(|_| bad())?;
        if !(0..=18).contains(&h) || !(0..60).contains(&m) {
            return Err(bad());
        }
        Ok(Zone::Fixed(sign * (h * 3600 + m * 60)))
    }
}

/// An instant counted in whole units of a granularity.
///
/// Equality, hashing and ordering ignore the zone label. Points of different
/// granularities are unordered.
#[derive(Debug, Clone, Copy)]
pub struct TimePoint {
    ticks: i64,
    granularity: Granularity,
    zone: Option<Zone>,
}

impl PartialEq for TimePoint {
    fn eq(&self, other: &Self) -> bool {
        self.ticks == other.ticks && self.granularity == other.granularity
    }
}

impl Eq for TimePoint {}

impl Hash for TimePoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ticks.hash(state);
        self.granularity.hash(state);
    }
}

impl PartialOrd for TimePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.granularity == other.granularity).then(|| self.ticks.cmp(&other.ticks))
    }
}

impl TimePoint {
    pub fn new(ticks: i64, granularity: Granularity) -> Self {
        TimePoint {
            ticks,
            granularity,
            zone: None,
        }
    }

    /// Attach a zone label. Ignored for day-and-coarser granularities.
    pub fn with_zone(mut self, zone: Option<Zone>) -> Self {
        self.zone = if self.granularity.is_subdaily() { zone } else { None };
        self
    }

    pub fn ticks(&self) -> i64 {
        self.ticks
    }

    pub fn granularity(&self) -> Granularity {
        self.granularity
    }

    pub fn zone(&self) -> Option<Zone> {
        self.zone
    }

    /// The point `steps` units later (earlier when negative).
    pub fn shift(&self, steps: i64) -> TimePoint {
        TimePoint {
            ticks: self.ticks + steps,
            ..*self
        }
    }

    pub fn ordinal(n: i64) -> Self {
        TimePoint::new(n, Granularity::Ordinal)
    }

    pub fn year(year: i64) -> Self {
        TimePoint::new(year - 1970, Granularity::Year)
    }

    pub fn quarter(year: i64, quarter: u32) -> Option<Self> {
        (1..=4)
            .contains(&quarter)
            .then(|| TimePoint::new((year - 1970) * 4 + i64::from(quarter) - 1, Granularity::Quarter))
    }

    pub fn month(year: i64, month: u32) -> Option<Self> {
        (1..=12)
            .contains(&month)
            .then(|| TimePoint::new((year - 1970) * 12 + i64::from(month) - 1, Granularity::Month))
    }

    /// ISO week `week` of ISO year `year`.
    pub fn iso_week(year: i64, week: u32) -> Option<Self> {
        if week == 0 || week > iso_weeks_in_year(year) {
            return None;
        }
        let monday = iso_week1_monday(year) + 7 * (i64::from(week) - 1);
        Some(TimePoint::new(week_of_days(monday), Granularity::Week))
    }

    pub fn date(year: i64, month: u32, day: u32) -> Option<Self> {
        valid_date(year, month, day).then(|| TimePoint::new(days_from_civil(year, month, day), Granularity::Day))
    }

    /// A second-granularity date-time in UTC.
    pub fn datetime(year: i64, month: u32, day: u32, h: u32, m: u32, s: u32) -> Option<Self> {
        if !valid_date(year, month, day) || h > 23 || m > 59 || s > 59 {
            return None;
        }
        let ms = days_from_civil(year, month, day) * MS_PER_DAY
            + i64::from(h) * MS_PER_HOUR
            + i64::from(m) * MS_PER_MINUTE
            + i64::from(s) * MS_PER_SECOND;
        Some(TimePoint::new(ms / MS_PER_SECOND, Granularity::Second).with_zone(Some(Zone::Utc)))
    }

    /// UTC milliseconds at which this point's period starts. Day-and-coarser
    /// periods are interpreted as local calendar periods of `zone`.
    fn start_ms(&self, zone: Option<Zone>) -> Option<i64> {
        let g = self.granularity;
        if let Some(unit) = g.unit_ms() {
            return Some(self.ticks * unit);
        }
        let days = match g {
            Granularity::Day => self.ticks,
            Granularity::Week => 7 * self.ticks - 3,
            Granularity::Month => {
                let (y, m) = month_parts(self.ticks);
                days_from_civil(y, m, 1)
            }
            Granularity::Quarter => {
                let (y, m) = month_parts(self.ticks * 3);
                days_from_civil(y, m, 1)
            }
            Granularity::Year => days_from_civil(1970 + self.ticks, 1, 1),
            _ => return None,
        };
        Some(days * MS_PER_DAY - zone.map_or(0, Zone::offset_ms))
    }

    /// The point of granularity `g` containing the UTC instant `ms`.
    fn containing(ms: i64, g: Granularity, zone: Option<Zone>) -> TimePoint {
        if let Some(unit) = g.unit_ms() {
            return TimePoint::new(ms.div_euclid(unit), g).with_zone(zone);
        }
        let days = (ms + zone.map_or(0, Zone::offset_ms)).div_euclid(MS_PER_DAY);
        let ticks = match g {
            Granularity::Day => days,
            Granularity::Week => week_of_days(days),
            Granularity::Month | Granularity::Quarter | Granularity::Year => {
                let (y, m, _) = civil_from_days(days);
                let months = (y - 1970) * 12 + i64::from(m) - 1;
                match g {
                    Granularity::Month => months,
                    Granularity::Quarter => months.div_euclid(3),
                    _ => y - 1970,
                }
            }
            _ => unreachable!("containing() is only called for calendar kinds"),
        };
        TimePoint::new(ticks, g)
    }

    /// Collapse to the coarser granularity `g` whose period contains this
    /// point. A week maps through its Monday.
    pub fn floor_to(&self, g: Granularity) -> Result<TimePoint> {
        if g == self.granularity {
            return Ok(*self);
        }
        if !self.granularity.is_calendar() || !g.is_calendar() {
            return Err(Error::unsupported(format!(
                "cannot convert a {} time point to {g}",
                self.granularity
            )));
        }
        if !g.is_coarser_or_equal(self.granularity) {
            return Err(Error::unsupported(format!(
                "cannot floor a {} time point to the finer granularity {g}",
                self.granularity
            )));
        }
        let zone = self.zone;
        let ms = self.start_ms(zone).expect("calendar kind");
        Ok(TimePoint::containing(ms, g, zone))
    }

    /// Inclusive tick range at the finer-or-equal granularity `g` covered by
    /// this point's period, with calendar periods read in `zone`.
    pub fn tick_bounds(&self, g: Granularity, zone: Option<Zone>) -> Result<(i64, i64)> {
        if g == self.granularity {
            return Ok((self.ticks, self.ticks));
        }
        if !self.granularity.is_calendar() || !g.is_calendar() {
            return Err(Error::unsupported(format!(
                "cannot compare a {} time point with a {g} index",
                self.granularity
            )));
        }
        if !self.granularity.is_coarser_or_equal(g) {
            return Err(Error::unsupported(format!(
                "a {} time point is finer than the {g} index",
                self.granularity
            )));
        }
        let lo = self.start_ms(zone).expect("calendar kind");
        let hi = self.shift(1).start_ms(zone).expect("calendar kind") - 1;
        Ok((
            TimePoint::containing(lo, g, zone).ticks,
            TimePoint::containing(hi, g, zone).ticks,
        ))
    }

    /// Parse canonical text, inferring the granularity from its shape. Bare
    /// integers are only accepted when `bare_integer` names their kind.
    pub fn detect(text: &str, bare_integer: Option<Granularity>, zone: Option<Zone>) -> Option<TimePoint> {
        let fields = parse_fields(text.trim())?;
        fields.into_point(bare_integer, zone)
    }

    /// Parse canonical text of exactly granularity `g`.
    pub fn parse_as(text: &str, g: Granularity, zone: Option<Zone>) -> Option<TimePoint> {
        if let Granularity::Custom(id) = g {
            return adapter::parse(id, text.trim()).map(|t| TimePoint::new(t, g));
        }
        let bare = matches!(g, Granularity::Year | Granularity::Ordinal).then_some(g);
        let fields = parse_fields(text.trim())?;
        let point = fields.into_point(bare, zone)?;
        (point.granularity == g).then_some(point)
    }

    /// Parse with a strftime-style pattern. The granularity is the finest
    /// field the pattern mentions.
    pub fn parse_with_pattern(text: &str, pattern: &str, zone: Option<Zone>) -> Option<TimePoint> {
        use chrono::{NaiveDate, NaiveDateTime, Timelike};
        let g = pattern_granularity(pattern)?;
        let text = text.trim();
        let (date, time_ms) = match g {
            Granularity::Year => (
                NaiveDate::parse_from_str(&format!("{text}|01|01"), &format!("{pattern}|%m|%d")).ok()?,
                0,
            ),
            Granularity::Month | Granularity::Quarter => (
                NaiveDate::parse_from_str(&format!("{text}|01"), &format!("{pattern}|%d")).ok()?,
                0,
            ),
            Granularity::Week | Granularity::Day => (NaiveDate::parse_from_str(text, pattern).ok()?, 0),
            _ => {
                let dt = NaiveDateTime::parse_from_str(text, pattern).ok()?;
                let t = dt.time();
                let ms =
                    i64::from(t.num_seconds_from_midnight()) * MS_PER_SECOND + i64::from(t.nanosecond() / 1_000_000);
                (dt.date(), ms)
            }
        };
        let days = days_of_naive(date);
        let ms = days * MS_PER_DAY + time_ms;
        if g.is_subdaily() {
            let zone = zone.or(Some(Zone::Utc));
            Some(TimePoint::containing(ms - zone.map_or(0, Zone::offset_ms), g, zone))
        } else {
            Some(TimePoint::containing(ms, g, None))
        }
    }

    fn local_ms(&self) -> i64 {
        let unit = self.granularity.unit_ms().unwrap_or(1);
        self.ticks * unit + self.zone.map_or(0, Zone::offset_ms)
    }
}

fn days_of_naive(date: chrono::NaiveDate) -> i64 {
    use chrono::Datelike;
    i64::from(date.num_days_from_ce()) - 719_163
}

/// Finest calendar field named by a strftime-style pattern.
pub fn pattern_granularity(pattern: &str) -> Option<Granularity> {
    let mut finest: Option<Granularity> = None;
    let mut chars = pattern.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '%' {
            continue;
        }
        // Skip flags and widths such as `%-d`, `%3f`, `%.3f`.
        let mut found = None;
        while let Some(&n) = chars.peek() {
            chars.next();
            if n.is_ascii_alphabetic() || n == '%' {
                found = Some(n);
                break;
            }
        }
        let g = match found {
            Some('f') => Granularity::Millisecond,
            Some('S' | 'T' | 's') => Granularity::Second,
            Some('M' | 'R') => Granularity::Minute,
            Some('H' | 'I' | 'k' | 'l') => Granularity::Hour,
            Some('d' | 'e' | 'j' | 'F' | 'D' | 'x' | 'a' | 'A' | 'u' | 'w') => Granularity::Day,
            Some('U' | 'W' | 'V') => Granularity::Week,
            Some('m' | 'b' | 'B' | 'h') => Granularity::Month,
            Some('Y' | 'y' | 'G' | 'C') => Granularity::Year,
            _ => continue,
        };
        if finest.is_none_or(|f| f.is_coarser_or_equal(g)) {
            finest = Some(g);
        }
    }
    finest
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.granularity {
            Granularity::Ordinal => write!(f, "{}", self.ticks),
            Granularity::Custom(id) => f.write_str(&adapter::render(id, self.ticks)),
            Granularity::Year => write!(f, "{}", 1970 + self.ticks),
            Granularity::Quarter => {
                let (y, m) = month_parts(self.ticks * 3);
                write!(f, "{y} Q{}", (m - 1) / 3 + 1)
            }
            Granularity::Month => {
                let (y, m) = month_parts(self.ticks);
                write!(f, "{y:04}-{m:02}")
            }
            Granularity::Week => {
                let (y, w) = iso_year_week(7 * self.ticks - 3);
                write!(f, "{y} W{w:02}")
            }
            Granularity::Day => {
                let (y, m, d) = civil_from_days(self.ticks);
                write!(f, "{y:04}-{m:02}-{d:02}")
            }
            g => {
                let ms = self.local_ms();
                let (y, mo, d) = civil_from_days(ms.div_euclid(MS_PER_DAY));
                let in_day = ms.rem_euclid(MS_PER_DAY);
                let h = in_day / MS_PER_HOUR;
                let mi = (in_day / MS_PER_MINUTE) % 60;
                let s = (in_day / MS_PER_SECOND) % 60;
                let milli = in_day % MS_PER_SECOND;
                write!(f, "{y:04}-{mo:02}-{d:02} {h:02}")?;
                if g == Granularity::Hour {
                    return Ok(());
                }
                write!(f, ":{mi:02}")?;
                if g == Granularity::Minute {
                    return Ok(());
                }
                write!(f, ":{s:02}")?;
                if g == Granularity::Millisecond {
                    write!(f, ".{milli:03}")?;
                }
                Ok(())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Canonical text parsing

enum Fields {
    Integer(i64),
    Quarter(i64, u32),
    Week(i64, u32),
    Month(i64, u32),
    Day(i64, u32, u32),
    Clock {
        date: (i64, u32, u32),
        ms_of_day: i64,
        granularity: Granularity,
    },
}

impl Fields {
    fn into_point(self, bare_integer: Option<Granularity>, zone: Option<Zone>) -> Option<TimePoint> {
        match self {
            Fields::Integer(n) => match bare_integer? {
                Granularity::Year => Some(TimePoint::year(n)),
                Granularity::Ordinal => Some(TimePoint::ordinal(n)),
                _ => None,
            },
            Fields::Quarter(y, q) => TimePoint::quarter(y, q),
            Fields::Week(y, w) => TimePoint::iso_week(y, w),
            Fields::Month(y, m) => TimePoint::month(y, m),
            Fields::Day(y, m, d) => TimePoint::date(y, m, d),
            Fields::Clock {
                date: (y, m, d),
                ms_of_day,
                granularity,
            } => {
                if !valid_date(y, m, d) {
                    return None;
                }
                let zone = zone.or(Some(Zone::Utc));
                let local = days_from_civil(y, m, d) * MS_PER_DAY + ms_of_day;
                let utc = local - zone.map_or(0, Zone::offset_ms);
                Some(TimePoint::containing(utc, granularity, zone))
            }
        }
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor {
            s: s.as_bytes(),
            pos: 0,
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.s.len()
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Between `min` and `max` ASCII digits.
    fn digits(&mut self, min: usize, max: usize) -> Option<(i64, usize)> {
        let start = self.pos;
        let mut v: i64 = 0;
        while self.pos - start < max {
            match self.peek() {
                Some(b @ b'0'..=b'9') => {
                    v = v.checked_mul(10)?.checked_add(i64::from(b - b'0'))?;
                    self.pos += 1;
                }
                _ => break,
            }
        }
        let n = self.pos - start;
        (n >= min).then_some((v, n))
    }

    fn rest(&self) -> &'a [u8] {
        &self.s[self.pos..]
    }
}

fn parse_fields(text: &str) -> Option<Fields> {
    let mut c = Cursor::new(text);
    let negative = c.eat(b'-');
    let (mut year, _) = c.digits(1, 18)?;
    if negative {
        year = -year;
    }
    if c.done() {
        return Some(Fields::Integer(year));
    }
    if c.eat(b' ') {
        if c.eat(b'Q') {
            let (q, _) = c.digits(1, 1)?;
            return c.done().then_some(Fields::Quarter(year, q as u32));
        }
        if c.eat(b'W') {
            let (w, _) = c.digits(1, 2)?;
            return c.done().then_some(Fields::Week(year, w as u32));
        }
        let name = std::str::from_utf8(c.rest()).ok()?;
        let m = month_from_name(name)?;
        return Some(Fields::Month(year, m));
    }
    if !c.eat(b'-') {
        return None;
    }
    let (month, _) = c.digits(2, 2)?;
    if c.done() {
        return Some(Fields::Month(year, month as u32));
    }
    if !c.eat(b'-') {
        return None;
    }
    let (day, _) = c.digits(2, 2)?;
    let date = (year, month as u32, day as u32);
    if c.done() {
        return Some(Fields::Day(date.0, date.1, date.2));
    }
    if !(c.eat(b' ') || c.eat(b'T')) {
        return None;
    }
    let (h, _) = c.digits(2, 2)?;
    if h > 23 {
        return None;
    }
    let mut ms_of_day = h * MS_PER_HOUR;
    let mut granularity = Granularity::Hour;
    if c.eat(b':') {
        let (mi, _) = c.digits(2, 2)?;
        if mi > 59 {
            return None;
        }
        ms_of_day += mi * MS_PER_MINUTE;
        granularity = Granularity::Minute;
        if c.eat(b':') {
            let (s, _) = c.digits(2, 2)?;
            if s > 59 {
                return None;
            }
            ms_of_day += s * MS_PER_SECOND;
            granularity = Granularity::Second;
            if c.eat(b'.') {
                let (frac, n) = c.digits(1, 3)?;
                ms_of_day += frac * 10_i64.pow(3 - n as u32);
                granularity = Granularity::Millisecond;
            }
        }
    }
    c.eat(b'Z');
    c.done().then_some(Fields::Clock {
        date,
        ms_of_day,
        granularity,
    })
}

fn month_from_name(name: &str) -> Option<u32> {
    const FULL: [&str; 12] = [
        "january",
        "february",
        "march",
        "april",
        "may",
        "june",
        "july",
        "august",
        "september",
        "october",
        "november",
        "december",
    ];
    let lower = name.to_ascii_lowercase();
    MONTH_ABBREV
        .iter()
        .position(|a| a.eq_ignore_ascii_case(&lower))
        .or_else(|| FULL.iter().position(|f| *f == lower))
        .map(|i| i as u32 + 1)
}

// ---------------------------------------------------------------------------
// Civil calendar arithmetic (proleptic Gregorian)

fn month_parts(months_since_epoch: i64) -> (i64, u32) {
    (
        1970 + months_since_epoch.div_euclid(12),
        months_since_epoch.rem_euclid(12) as u32 + 1,
    )
}

fn is_leap(y: i64) -> bool {
    (y % 4 == 0 && y % 100 != 0) || y % 400 == 0
}

fn days_in_month(y: i64, m: u32) -> u32 {
    match m {
        2 if is_leap(y) => 29,
        2 => 28,
        4 | 6 | 9 | 11 => 30,
        _ => 31,
    }
}

fn valid_date(y: i64, m: u32, d: u32) -> bool {
    (1..=12).contains(&m) && d >= 1 && d <= days_in_month(y, m)
}

/// Days since 1970-01-01 of a civil date.
pub(crate) fn days_from_civil(y: i64, m: u32, d: u32) -> i64 {
    let y = if m <= 2 { y - 1 } else { y };
    let era = y.div_euclid(400);
    let yoe = y - era * 400;
    let m = i64::from(m);
    let mp = if m > 2 { m - 3 } else { m + 9 };
    let doy = (153 * mp + 2) / 5 + i64::from(d) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

pub(crate) fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    let y = yoe + era * 400 + i64::from(m <= 2);
    (y, m, d)
}

/// Week tick containing a day; 1970-01-01 was a Thursday.
fn week_of_days(days: i64) -> i64 {
    (days + 3).div_euclid(7)
}

fn iso_week1_monday(year: i64) -> i64 {
    let jan4 = days_from_civil(year, 1, 4);
    // Monday = 0
    let weekday = (jan4 + 3).rem_euclid(7);
    jan4 - weekday
}

fn iso_weeks_in_year(year: i64) -> u32 {
    ((iso_week1_monday(year + 1) - iso_week1_monday(year)) / 7) as u32
}

fn iso_year_week(monday: i64) -> (i64, u32) {
    let (y, _, _) = civil_from_days(monday + 3);
    let week = (monday - iso_week1_monday(y)) / 7 + 1;
    (y, week as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_renderings() {
        assert_eq!(TimePoint::year(2011).to_string(), "2011");
        assert_eq!(TimePoint::quarter(2011, 3).unwrap().to_string(), "2011 Q3");
        assert_eq!(TimePoint::month(2011, 7).unwrap().to_string(), "2011-07");
        assert_eq!(TimePoint::iso_week(2011, 7).unwrap().to_string(), "2011 W07");
        assert_eq!(TimePoint::date(2011, 7, 5).unwrap().to_string(), "2011-07-05");
        assert_eq!(
            TimePoint::datetime(2011, 7, 5, 17, 45, 0).unwrap().to_string(),
            "2011-07-05 17:45:00"
        );
    }

    #[test]
    fn epoch_ticks() {
        assert_eq!(TimePoint::year(1970).ticks(), 0);
        assert_eq!(TimePoint::month(1971, 2).unwrap().ticks(), 13);
        assert_eq!(TimePoint::date(1970, 1, 2).unwrap().ticks(), 1);
        assert_eq!(TimePoint::date(1969, 12, 31).unwrap().ticks(), -1);
        // 1969-12-29 is the Monday starting week 0.
        let w = TimePoint::date(1969, 12, 29)
            .unwrap()
            .floor_to(Granularity::Week)
            .unwrap();
        assert_eq!(w.ticks(), 0);
    }

    #[test]
    fn month_alternate_spelling() {
        let a = TimePoint::detect("2011 Jul", None, None).unwrap();
        let b = TimePoint::detect("2011-07", None, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bare_integers_need_a_kind() {
        assert!(TimePoint::detect("2011", None, None).is_none());
        assert_eq!(
            TimePoint::detect("2011", Some(Granularity::Year), None),
            Some(TimePoint::year(2011))
        );
        assert_eq!(
            TimePoint::parse_as("7", Granularity::Ordinal, None),
            Some(TimePoint::ordinal(7))
        );
    }

    #[test]
    fn rejects_invalid_dates() {
        assert!(TimePoint::detect("2011-02-30", None, None).is_none());
        assert!(TimePoint::detect("2011-13", None, None).is_none());
        assert!(TimePoint::detect("2011 Q5", None, None).is_none());
        assert!(TimePoint::detect("2011 W54", None, None).is_none());
        assert!(TimePoint::detect("2011-07-05 24:00", None, None).is_none());
        assert!(TimePoint::detect("yesterday", None, None).is_none());
    }

    #[test]
    fn floor_examples() {
        let d = TimePoint::date(2013, 1, 15).unwrap();
        assert_eq!(
            d.floor_to(Granularity::Month).unwrap(),
            TimePoint::month(2013, 1).unwrap()
        );
        let d = TimePoint::date(2013, 1, 1).unwrap();
        assert_eq!(d.floor_to(Granularity::Day).unwrap(), d);
        let t = TimePoint::datetime(2017, 8, 3, 17, 45, 0).unwrap();
        assert_eq!(t.floor_to(Granularity::Year).unwrap(), TimePoint::year(2017));
    }

    #[test]
    fn floor_errors() {
        assert!(matches!(
            TimePoint::ordinal(3).floor_to(Granularity::Year),
            Err(Error::Unsupported(_))
        ));
        let m = TimePoint::month(2013, 1).unwrap();
        assert!(m.floor_to(Granularity::Day).is_err());
    }

    #[test]
    fn zone_shifts_rendering_and_date_floor() {
        let zone: Zone = "+10:00".parse().unwrap();
        let t = TimePoint::parse_as("2013-01-01 05:00:00", Granularity::Second, Some(zone)).unwrap();
        // 05:00 local at +10 is 19:00 UTC on the previous day.
        assert_eq!(t.with_zone(Some(Zone::Utc)).to_string(), "2012-12-31 19:00:00");
        assert_eq!(t.to_string(), "2013-01-01 05:00:00");
        assert_eq!(
            t.floor_to(Granularity::Day).unwrap(),
            TimePoint::date(2013, 1, 1).unwrap()
        );
        assert_eq!(zone.to_string(), "+10:00");
        assert_eq!("UTC".parse::<Zone>().unwrap(), Zone::Utc);
        assert!("Mars/Olympus".parse::<Zone>().is_err());
    }

    #[test]
    fn tick_bounds_expand_coarse_points() {
        let y = TimePoint::year(2013);
        let (lo, hi) = y.tick_bounds(Granularity::Month, None).unwrap();
        assert_eq!(lo, TimePoint::month(2013, 1).unwrap().ticks());
        assert_eq!(hi, TimePoint::month(2013, 12).unwrap().ticks());
        let m = TimePoint::month(2013, 2).unwrap();
        let (lo, hi) = m.tick_bounds(Granularity::Day, None).unwrap();
        assert_eq!(hi - lo + 1, 28);
    }

    #[test]
    fn pattern_parsing() {
        let t = TimePoint::parse_with_pattern("03/08/2017 17:45", "%d/%m/%Y %H:%M", None).unwrap();
        assert_eq!(t.granularity(), Granularity::Minute);
        assert_eq!(t.to_string(), "2017-08-03 17:45");
        let m = TimePoint::parse_with_pattern("Aug 2017", "%b %Y", None).unwrap();
        assert_eq!(m, TimePoint::month(2017, 8).unwrap());
        let y = TimePoint::parse_with_pattern("2017", "%Y", None).unwrap();
        assert_eq!(y, TimePoint::year(2017));
        assert_eq!(
            pattern_granularity("%Y-%m-%d %H:%M:%S%.3f"),
            Some(Granularity::Millisecond)
        );
    }

    #[test]
    fn coarseness_order() {
        let cal = Granularity::CALENDAR;
        for w in cal.windows(2) {
            assert_eq!(w[0].coarseness_cmp(w[1]), Some(Ordering::Greater));
        }
        assert_eq!(Granularity::Ordinal.coarseness_cmp(Granularity::Year), None);
        assert_eq!(
            Granularity::Ordinal.coarseness_cmp(Granularity::Ordinal),
            Some(Ordering::Equal)
        );
    }

    #[test]
    fn unordered_across_granularities() {
        assert_eq!(TimePoint::year(2011).partial_cmp(&TimePoint::ordinal(41)), None);
        assert!(TimePoint::year(2011) < TimePoint::year(2012));
    }
}
