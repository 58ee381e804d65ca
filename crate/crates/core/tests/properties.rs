mod common;

use std::collections::HashSet;

use chrono::{Datelike, NaiveDate};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{rngs::StdRng, SeedableRng};
use tempora_core::verbs::{col, filter, gather, select, spread};
use tempora_core::{build, duplicates, gcd_of_diffs, infer_interval, Cell, Frame, Granularity, Interval, TimePoint};

const EPOCH: NaiveDate = match NaiveDate::from_ymd_opt(1970, 1, 1) {
    Some(d) => d,
    None => panic!(),
};

fn brute_gcd(xs: &[u64]) -> u64 {
    let max = *xs.iter().min().unwrap();
    (1..=max).rev().find(|d| xs.iter().all(|x| x % d == 0)).unwrap()
}

/// Expected tick of `date` at calendar granularity `g`, via chrono.
fn chrono_tick(date: NaiveDate, g: Granularity) -> i64 {
    let y = i64::from(date.year()) - 1970;
    let days = (date - EPOCH).num_days();
    match g {
        Granularity::Year => y,
        Granularity::Quarter => y * 4 + i64::from(date.month0() / 3),
        Granularity::Month => y * 12 + i64::from(date.month0()),
        Granularity::Week => {
            let monday = days - i64::from(date.weekday().num_days_from_monday());
            (monday + 3).div_euclid(7)
        }
        Granularity::Day => days,
        _ => unreachable!(),
    }
}

fn coarse() -> impl Strategy<Value = Granularity> {
    prop_oneof![
        Just(Granularity::Year),
        Just(Granularity::Quarter),
        Just(Granularity::Month),
        Just(Granularity::Week),
        Just(Granularity::Day),
    ]
}

proptest! {
    #[test]
    fn gcd_matches_brute_force(xs in prop::collection::vec(1u64..200, 1..8)) {
        let g = gcd_of_diffs(&xs).unwrap();
        prop_assert_eq!(g, brute_gcd(&xs));
        prop_assert!(xs.iter().all(|x| x % g == 0));
    }

    #[test]
    fn day_flooring_agrees_with_chrono(days in -200_000i64..200_000, g in coarse()) {
        let date = EPOCH + chrono::Duration::days(days);
        let p = TimePoint::new(days, Granularity::Day);
        let f = p.floor_to(g).unwrap();
        prop_assert_eq!(f.ticks(), chrono_tick(date, g));
        prop_assert_eq!(f.floor_to(g).unwrap(), f);
    }

    #[test]
    fn second_flooring_agrees_with_chrono(secs in -4_000_000_000i64..4_000_000_000, g in coarse()) {
        let dt = chrono::DateTime::UNIX_EPOCH.naive_utc() + chrono::Duration::seconds(secs);
        let p = TimePoint::new(secs, Granularity::Second);
        let f = p.floor_to(g).unwrap();
        prop_assert_eq!(f.ticks(), chrono_tick(dt.date(), g));
        let hour = p.floor_to(Granularity::Hour).unwrap();
        prop_assert_eq!(hour.ticks(), secs.div_euclid(3600));
    }

    #[test]
    fn flooring_is_monotone(a in -100_000i64..100_000, b in -100_000i64..100_000, g in coarse()) {
        let (lo, hi) = (a.min(b), a.max(b));
        let fl = TimePoint::new(lo, Granularity::Day).floor_to(g).unwrap();
        let fh = TimePoint::new(hi, Granularity::Day).floor_to(g).unwrap();
        prop_assert!(fl.ticks() <= fh.ticks());
    }

    #[test]
    fn canonical_text_round_trips(ticks in -50_000i64..50_000, g in coarse()) {
        let p = TimePoint::new(ticks, g);
        prop_assert_eq!(TimePoint::parse_as(&p.to_string(), g, None), Some(p));
    }

    #[test]
    fn inferred_step_divides_every_difference(
        keys in prop::collection::vec(prop::collection::btree_set(-500i64..500, 2..10), 1..5),
        seed in any::<u64>(),
    ) {
        let per_key: Vec<Vec<TimePoint>> = keys
            .iter()
            .map(|s| s.iter().map(|&t| TimePoint::new(t, Granularity::Month)).collect())
            .collect();
        let Interval::Regular { multiple, .. } = infer_interval(&per_key, true).unwrap() else {
            panic!("expected a regular interval");
        };
        let diffs: Vec<u64> = keys
            .iter()
            .flat_map(|s| {
                let v: Vec<i64> = s.iter().copied().collect();
                v.windows(2).map(|w| (w[1] - w[0]) as u64).collect::<Vec<_>>()
            })
            .collect();
        prop_assert_eq!(multiple, brute_gcd(&diffs));
        let mut shuffled = per_key.clone();
        shuffled.shuffle(&mut StdRng::seed_from_u64(seed));
        prop_assert_eq!(infer_interval(&shuffled, true).unwrap(), infer_interval(&per_key, true).unwrap());
    }

    #[test]
    fn build_ignores_row_order(
        cells in prop::collection::vec((0u8..4, 0i64..12, any::<i32>()), 0..40),
        seed in any::<u64>(),
    ) {
        let rows: Vec<Vec<Cell>> = cells
            .iter()
            .map(|&(k, t, v)| vec![Cell::text(format!("k{k}")), Cell::Time(TimePoint::ordinal(t)), Cell::Int(i64::from(v))])
            .collect();
        let mut shuffled = rows.clone();
        shuffled.shuffle(&mut StdRng::seed_from_u64(seed));
        let frame = |rows: Vec<Vec<Cell>>| {
            if rows.is_empty() {
                Frame::new(vec![
                    tempora_core::Column::new("k", tempora_core::CellKind::Text, vec![]).unwrap(),
                    tempora_core::Column::new("t", tempora_core::CellKind::Time, vec![]).unwrap(),
                    tempora_core::Column::new("v", tempora_core::CellKind::Int, vec![]).unwrap(),
                ]).unwrap()
            } else {
                Frame::from_rows(&["k", "t", "v"], rows).unwrap()
            }
        };
        let pairs: Vec<(u8, i64)> = cells.iter().map(|&(k, t, _)| (k, t)).collect();
        let unique = pairs.iter().collect::<HashSet<_>>().len() == pairs.len();

        let a = build(frame(rows.clone()), "t", &["k"], true);
        let dups = duplicates(&frame(rows), "t", &["k"]).unwrap();
        prop_assert_eq!(a.is_ok(), dups.is_empty());
        prop_assert_eq!(a.is_ok(), unique);
        if let Ok(a) = a {
            // Rows with equal pairs cannot exist, so the sorted result is
            // fully determined by the content.
            let b = build(frame(shuffled), "t", &["k"], true).unwrap();
            prop_assert_eq!(a.frame(), b.frame());
            a.validate().unwrap();
            let distinct: HashSet<u8> = cells.iter().map(|c| c.0).collect();
            prop_assert_eq!(a.key_groups().len(), distinct.len());
        }
    }

    #[test]
    fn filter_composition_and_select_rows(
        values in prop::collection::vec(0i64..100, 1..30),
        p in 0i64..100,
        q in 0i64..100,
    ) {
        let rows = values
            .iter()
            .enumerate()
            .map(|(i, &v)| vec![Cell::Time(TimePoint::ordinal(i as i64)), Cell::Int(v), Cell::Int(v % 7)])
            .collect();
        let t = build(Frame::from_rows(&["t", "v", "w"], rows).unwrap(), "t", &[] as &[&str], true).unwrap();
        let first = filter(&t, &col("v").ge(p)).unwrap().table;
        let twice = filter(&first, &col("v").lt(q)).unwrap().table;
        let once = filter(&t, &col("v").ge(p).and(col("v").lt(q))).unwrap().table;
        prop_assert_eq!(twice.frame(), once.frame());
        prop_assert_eq!(once.ncols(), t.ncols());
        let sel = select(&t, &["t", "v"]).unwrap().table;
        prop_assert_eq!(sel.nrows(), t.nrows());
    }

    #[test]
    fn spread_then_gather_round_trips(
        present in prop::collection::vec(any::<bool>(), 12),
        values in prop::collection::vec(-1000i64..1000, 12),
    ) {
        // Keys a/b x measures m0..m2 x two years; every (key, year) keeps m0.
        let mut rows = Vec::new();
        for (i, (&keep, &v)) in present.iter().zip(&values).enumerate() {
            let (key, measure, year) = (i / 6, (i / 2) % 3, i % 2);
            if keep || measure == 0 {
                rows.push(vec![
                    Cell::text(["a", "b"][key]),
                    Cell::text(format!("m{measure}")),
                    Cell::Time(TimePoint::year(2000 + year as i64)),
                    Cell::Int(v),
                ]);
            }
        }
        let t = build(Frame::from_rows(&["id", "m", "year", "v"], rows).unwrap(), "year", &["id", "m"], true).unwrap();
        let wide = spread(&t, "m", "v").unwrap().table;
        let names: Vec<String> = wide.frame().names().into_iter().filter(|n| n.starts_with('m')).map(str::to_owned).collect();
        let long = gather(&wide, &names, "m", "v").unwrap().table;
        let long = filter(&long, &!col("v").is_missing()).unwrap().table;
        let long = select(&long, &["id", "m", "year", "v"]).unwrap().table;
        prop_assert_eq!(long.frame(), t.frame());
    }
}
