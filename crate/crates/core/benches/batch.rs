use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use verdier::catalog::{builtin, builtin_names};
use verdier::par::Execution;
use verdier::ring::BaseGeometry;
use verdier::verify::{run_batch, Check, Job};

fn jobs(check: Check) -> Vec<Job> {
    builtin_names()
        .iter()
        .map(|n| Job {
            spec: Arc::new(builtin(n).unwrap()),
            check: check.clone(),
        })
        .collect()
}

fn batch(c: &mut Criterion) {
    let cases = [
        ("formal-d3", jobs(Check::Formal { dim: 3 })),
        ("formal-d4", jobs(Check::Formal { dim: 4 })),
        (
            "cross-check-P3",
            jobs(Check::CrossCheck(
                BaseGeometry::projective(3)
                    .with_assignment("L", 4)
                    .with_assignment("S", 1),
            )),
        ),
    ];
    let mut group = c.benchmark_group("batch");
    group.sample_size(20);
    for (name, jobs) in &cases {
        for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(*name, label), jobs, |b, jobs| {
                b.iter(|| run_batch(jobs, exec))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);
