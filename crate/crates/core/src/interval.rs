//! Interval representation and inference.

use std::fmt;

use crate::error::{Error, Result};
use crate::time::{Granularity, TimePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interval {
    /// Spacing of `multiple` units of `unit`; `multiple >= 1`.
    Regular {
        unit: Granularity,
        multiple: u64,
    },
    Irregular,
    /// Too few observations to tell.
    Unknown,
}

impl Interval {
    pub fn regular(unit: Granularity, multiple: u64) -> Result<Self> {
        if multiple == 0 {
            return Err(Error::precondition("a regular interval needs a multiple of at least 1"));
        }
        Ok(Interval::Regular { unit, multiple })
    }

    pub fn is_regular(&self) -> bool {
        matches!(self, Interval::Regular { .. })
    }

    /// Step in ticks of a regular interval.
    pub fn step(&self) -> Option<i64> {
        match *self {
            Interval::Regular { multiple, .. } => Some(multiple as i64),
            _ => None,
        }
    }

    /// Shorthand without brackets: `1Y`, `!`, `?`.
    pub fn shorthand(&self) -> String {
        match self {
            Interval::Regular { unit, multiple } => format!("{multiple}{}", unit.unit_symbol()),
            Interval::Irregular => "!".into(),
            Interval::Unknown => "?".into(),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.shorthand())
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Greatest common divisor of a non-empty list of positive integers.
pub fn gcd_of_diffs(diffs: &[u64]) -> Result<u64> {
    if diffs.is_empty() {
        return Err(Error::precondition("gcd of an empty list of differences"));
    }
    if diffs.contains(&0) {
        return Err(Error::precondition("differences must be positive"));
    }
    Ok(diffs.iter().copied().fold(0, gcd))
}

/// Infer one interval for a table from its per-key index sequences.
///
/// Differences between consecutive index values are pooled across all keys
/// and reduced with [`gcd_of_diffs`]. Each sequence must be strictly
/// increasing, and all points must share one granularity.
pub fn infer_interval<S: AsRef<[TimePoint]>>(per_key: &[S], declared_regular: bool) -> Result<Interval> {
    let mut granularity: Option<Granularity> = None;
    for seq in per_key {
        for p in seq.as_ref() {
            match granularity {
                None => granularity = Some(p.granularity()),
                Some(g) if g != p.granularity() => {
                    return Err(Error::schema(format!(
                        "index mixes {g} and {} time points",
                        p.granularity()
                    )))
                }
                Some(_) => {}
            }
        }
    }
    if !declared_regular {
        return Ok(Interval::Irregular);
    }

    let mut acc = 0u64;
    for seq in per_key {
        for w in seq.as_ref().windows(2) {
            let d = w[1].ticks() - w[0].ticks();
            if d <= 0 {
                return Err(Error::precondition(
                    "index values within a key must be sorted and distinct",
                ));
            }
            acc = gcd(acc, d as u64);
        }
    }
    Ok(match (acc, granularity) {
        (0, _) | (_, None) => Interval::Unknown,
        (m, Some(unit)) => Interval::Regular { unit, multiple: m },
    })
}
