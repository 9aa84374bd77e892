//! Criterion comparison of the parallel and sequential suite paths. The
//! `parallel` flag in the runner config is a runtime switch, so one binary
//! measures both; building with `--no-default-features` removes the rayon
//! path entirely and both benches collapse to the sequential code.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use sylow_inv::verify::{suite_runner, Config, SuiteKind, Target};
use sylow_inv::groups::Family;

fn bench_config(parallel: bool, suites: Vec<SuiteKind>) -> Config {
    Config {
        suites,
        targets: vec![
            Target { family: Family::GuEven, m: 2, q: 2 },
            Target { family: Family::Sp, m: 2, q: 3 },
            Target { family: Family::OPlus, m: 3, q: 2 },
            Target { family: Family::OMinus, m: 2, q: 2 },
            Target { family: Family::OOdd, m: 2, q: 3 },
        ],
        parallel,
        timings: false,
    }
}

fn identity_suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("identity-suites");
    group.sample_size(10);
    for (name, parallel) in [("parallel", true), ("sequential", false)] {
        group.bench_function(name, |b| {
            b.iter_batched(
                || bench_config(parallel, vec![SuiteKind::Steenrod, SuiteKind::Psi, SuiteKind::Degrees]),
                |cfg| {
                    let report = suite_runner(&cfg).unwrap();
                    assert_eq!(report.summary.failed, 0);
                    report.summary.total
                },
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn group_and_certificates(c: &mut Criterion) {
    let mut group = c.benchmark_group("group-and-certificates");
    group.sample_size(10);
    for (name, parallel) in [("parallel", true), ("sequential", false)] {
        group.bench_function(name, |b| {
            b.iter_batched(
                || bench_config(parallel, vec![SuiteKind::Group, SuiteKind::Certificates]),
                |cfg| {
                    let report = suite_runner(&cfg).unwrap();
                    assert_eq!(report.summary.failed, 0);
                    report.summary.total
                },
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

criterion_group!(benches, identity_suites, group_and_certificates);
criterion_main!(benches);
