use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use tempora_bench::{daily_panel, raw_rows};
use tempora_core::verbs::{group_by, index_by, summarize, Aggregation, IndexMap};
use tempora_core::{
    build, count_gaps, fill_gaps, roll_by_key, AggFn, CellKind, Execution, Frame, Granularity, RollOp, Window,
};

fn construct(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    for keys in [10, 100] {
        let rows = raw_rows(keys, 1000, 0);
        g.bench_with_input(BenchmarkId::from_parameter(keys), &rows, |b, rows| {
            b.iter_batched(
                || Frame::from_rows(&["id", "day", "x"], rows.clone()).unwrap(),
                |f| build(f, "day", &["id"], true).unwrap(),
                BatchSize::LargeInput,
            )
        });
    }
    g.finish();
}

fn gaps(c: &mut Criterion) {
    let t = daily_panel(100, 1000, 9);
    c.bench_function("count_gaps", |b| b.iter(|| count_gaps(&t, false).unwrap()));
    c.bench_function("fill_gaps", |b| b.iter(|| fill_gaps(&t, &[], false).unwrap()));
}

fn rolling(c: &mut Criterion) {
    let t = daily_panel(200, 1000, 0);
    let mean = |xs: &[tempora_core::Cell]| AggFn::Mean.apply(CellKind::Real, xs).unwrap();
    let op = RollOp::Slide(Window::new(30).unwrap());
    let mut g = c.benchmark_group("roll_by_key");
    for (name, exec) in [("serial", Execution::Serial), ("parallel", Execution::Parallel)] {
        g.bench_function(name, |b| b.iter(|| roll_by_key(&t, "x", op, mean, "m", exec).unwrap()));
    }
    g.finish();
}

fn aggregate(c: &mut Criterion) {
    let t = daily_panel(100, 1000, 0);
    c.bench_function("monthly_summarize", |b| {
        b.iter(|| {
            let grouped = group_by(&t, &["id"]).unwrap();
            let monthly = index_by(&grouped, "month", IndexMap::Floor(Granularity::Month)).unwrap();
            summarize(&monthly, &[Aggregation::new("x", AggFn::Mean, "x")]).unwrap()
        })
    });
}

criterion_group!(benches, construct, gaps, rolling, aggregate);
criterion_main!(benches);
