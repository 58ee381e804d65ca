//! Custom index kinds.
//!
//! An adapter teaches the engine a new time representation by mapping raw
//! values onto integer ticks. Once registered, the kind is accepted wherever
//! a granularity is expected and every tick-based operation (interval
//! inference, gap verbs, rolling windows) works on it unchanged.
//!
//! The registry is process-global. Register adapters during start-up, before
//! tables using them are shared across threads.

use std::cmp::Ordering;
use std::sync::{Arc, LazyLock, RwLock};

use crate::error::{Error, Result};
use crate::time::Granularity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdapterId(u32);

pub trait IndexAdapter: Send + Sync {
    /// Kind name, used as the granularity name (e.g. `semester`).
    fn kind(&self) -> &str;

    /// Symbol used by the interval shorthand (`[1S]`).
    fn unit_symbol(&self) -> &str;

    /// Map a raw value to its tick, or `None` if the value is invalid.
    fn to_ticks(&self, raw: &str) -> Option<i64>;

    /// Render a tick as a raw value.
    fn render(&self, ticks: i64) -> String;

    /// Past-to-future ordering of raw values. `None` means incomparable.
    fn compare(&self, a: &str, b: &str) -> Option<Ordering>;

    /// Representative raw values checked at registration.
    fn probes(&self) -> Vec<String>;
}

struct Entry {
    kind: String,
    adapter: Arc<dyn IndexAdapter>,
}

static REGISTRY: LazyLock<RwLock<Vec<Entry>>> = LazyLock::new(|| RwLock::new(Vec::new()));

/// Register (or replace) an adapter. The probe values must be valid, render
/// back to the same tick, and be totally ordered consistently with their
/// ticks.
pub fn register_index_adapter<A: IndexAdapter + 'static>(adapter: A) -> Result<Granularity> {
    let kind = adapter.kind().trim().to_owned();
    let reject = |message: String| Error::Adapter {
        kind: kind.clone(),
        message,
    };
    if kind.is_empty() {
        return Err(reject("kind name is empty".into()));
    }
    if is_builtin_name(&kind) {
        return Err(reject("kind name collides with a built-in granularity".into()));
    }

    let probes = adapter.probes();
    if probes.is_empty() {
        return Err(reject("no probe values supplied".into()));
    }
    let mut ticks = Vec::with_capacity(probes.len());
    for p in &probes {
        let t = adapter
            .to_ticks(p)
            .ok_or_else(|| reject(format!("probe `{p}` is not a valid value")))?;
        if adapter.to_ticks(&adapter.render(t)) != Some(t) {
            return Err(reject(format!("rendering of `{p}` does not map back to its tick")));
        }
        ticks.push(t);
    }
    for (i, a) in probes.iter().enumerate() {
        for (j, b) in probes.iter().enumerate() {
            match adapter.compare(a, b) {
                None => {
                    return Err(reject(format!(
                        "ordering is not total: `{a}` and `{b}` are incomparable"
                    )))
                }
                Some(ord) if ord != ticks[i].cmp(&ticks[j]) => {
                    return Err(reject(format!(
                        "ordering of `{a}` and `{b}` disagrees with their ticks"
                    )))
                }
                Some(_) => {}
            }
        }
    }

    let mut reg = REGISTRY.write().expect("adapter registry poisoned");
    let entry = Entry {
        kind: kind.clone(),
        adapter: Arc::new(adapter),
    };
    let id = match reg.iter().position(|e| e.kind.eq_ignore_ascii_case(&kind)) {
        Some(pos) => {
            reg[pos] = entry;
            pos
        }
        None => {
            reg.push(entry);
            reg.len() - 1
        }
    };
    Ok(Granularity::Custom(AdapterId(id as u32)))
}

fn is_builtin_name(name: &str) -> bool {
    let probe = name.to_ascii_lowercase();
    Granularity::CALENDAR
        .iter()
        .map(|g| g.name())
        .chain(std::iter::once("ordinal".to_owned()))
        .any(|n| n == probe)
}

fn with_adapter<R>(id: AdapterId, f: impl FnOnce(&dyn IndexAdapter) -> R) -> Option<R> {
    let reg = REGISTRY.read().expect("adapter registry poisoned");
    reg.get(id.0 as usize).map(|e| f(e.adapter.as_ref()))
}

pub(crate) fn lookup_kind(name: &str) -> Option<AdapterId> {
    let reg = REGISTRY.read().expect("adapter registry poisoned");
    reg.iter()
        .position(|e| e.kind.eq_ignore_ascii_case(name))
        .map(|i| AdapterId(i as u32))
}

pub(crate) fn kind_name(id: AdapterId) -> String {
    with_adapter(id, |a| a.kind().to_owned()).unwrap_or_else(|| format!("custom#{}", id.0))
}

pub(crate) fn unit_symbol(id: AdapterId) -> String {
    with_adapter(id, |a| a.unit_symbol().to_owned()).unwrap_or_default()
}

pub(crate) fn parse(id: AdapterId, raw: &str) -> Option<i64> {
    with_adapter(id, |a| a.to_ticks(raw)).flatten()
}

pub(crate) fn render(id: AdapterId, ticks: i64) -> String {
    with_adapter(id, |a| a.render(ticks)).unwrap_or_else(|| ticks.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::TimePoint;

    struct Trimester;

    impl IndexAdapter for Trimester {
        fn kind(&self) -> &str {
            "trimester-unit-test"
        }
        fn unit_symbol(&self) -> &str {
            "T"
        }
        fn to_ticks(&self, raw: &str) -> Option<i64> {
            let (y, t) = raw.split_once(" T")?;
            let (y, t): (i64, i64) = (y.parse().ok()?, t.parse().ok()?);
            (1..=3).contains(&t).then_some(3 * y + t - 1)
        }
        fn render(&self, ticks: i64) -> String {
            format!("{} T{}", ticks.div_euclid(3), ticks.rem_euclid(3) + 1)
        }
        fn compare(&self, a: &str, b: &str) -> Option<Ordering> {
            Some(self.to_ticks(a)?.cmp(&self.to_ticks(b)?))
        }
        fn probes(&self) -> Vec<String> {
            vec!["2020 T1".into(), "2020 T3".into(), "2021 T2".into()]
        }
    }

    #[test]
    fn registered_kind_parses_and_renders() {
        let g = register_index_adapter(Trimester).unwrap();
        assert_eq!(g.name(), "trimester-unit-test");
        assert_eq!(g.unit_symbol(), "T");
        assert_eq!("trimester-unit-test".parse::<Granularity>().unwrap(), g);
        let p = TimePoint::parse_as("2021 T2", g, None).unwrap();
        assert_eq!(p.to_string(), "2021 T2");
        assert_eq!(p.shift(2).to_string(), "2022 T1");
    }

    #[test]
    fn builtin_names_are_reserved() {
        struct Fake;
        impl IndexAdapter for Fake {
            fn kind(&self) -> &str {
                "Month"
            }
            fn unit_symbol(&self) -> &str {
                "M"
            }
            fn to_ticks(&self, raw: &str) -> Option<i64> {
                raw.parse().ok()
            }
            fn render(&self, ticks: i64) -> String {
                ticks.to_string()
            }
            fn compare(&self, a: &str, b: &str) -> Option<Ordering> {
                Some(self.to_ticks(a)?.cmp(&self.to_ticks(b)?))
            }
            fn probes(&self) -> Vec<String> {
                vec!["1".into()]
            }
        }
        assert!(matches!(register_index_adapter(Fake), Err(Error::Adapter { .. })));
    }
}
