use criterion::{criterion_group, criterion_main, Criterion};

use llplan::planner::{Budget, Planner};
use llplan::planners::{LlpPlanner, RrtConnectPlanner};
use llplan::Rng;
use llplan_bench::corridor_fixture;

fn two_room(c: &mut Criterion) {
    let (s, mask) = corridor_fixture();
    let budget = Budget::samples(200_000);
    let llp = LlpPlanner {
        mask,
        cr_fraction: 0.05,
        budget,
    };
    let rrtc = RrtConnectPlanner { budget };
    let mut group = c.benchmark_group("two_room");
    group.sample_size(20);
    for planner in [&llp as &dyn Planner, &rrtc] {
        group.bench_function(planner.name(), |b| {
            let mut seed = 0;
            b.iter(|| {
                seed += 1;
                planner.solve(&s.env, &s.start, &s.goal, &mut Rng::new(seed)).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, two_room);
criterion_main!(benches);
