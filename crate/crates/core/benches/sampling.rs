//! Sequential versus rayon scheduling of Monte-Carlo trials.

use bratteli_core::branching::BranchingParams;
use bratteli_core::exec::Execution;
use bratteli_core::macdonald::Alphabet;
use bratteli_core::oracles::jordan_distribution_mc;
use bratteli_core::samplers::{sample_bk, sample_generic};
use bratteli_core::special::HLParams;
use bratteli_core::ExactRational;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

const SCHEDULES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn column_sampler(c: &mut Criterion) {
    let hl = HLParams::new(2).unwrap();
    let mut group = c.benchmark_group("column_sampler_n200_10k");
    group.sample_size(10);
    for (name, exec) in SCHEDULES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| sample_bk(black_box(200), &hl, 10_000, 1, exec)));
    }
    group.finish();
}

fn generic_sampler(c: &mut Criterion) {
    let params = BranchingParams::numeric(ExactRational::frac(1, 3), ExactRational::frac(1, 2)).unwrap();
    let x: Alphabet = "2/5,3/10,1/5,1/10".parse().unwrap();
    let mut group = c.benchmark_group("generic_sampler_n8_100k");
    group.sample_size(10);
    for (name, exec) in SCHEDULES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sample_generic(black_box(8), &x, &params, 100_000, 1, exec).unwrap())
        });
    }
    group.finish();
}

fn unipotent_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("unipotent_jordan_n8_p2_20k");
    group.sample_size(10);
    for (name, exec) in SCHEDULES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| jordan_distribution_mc(black_box(8), 2, 20_000, 1, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, column_sampler, generic_sampler, unipotent_oracle);
criterion_main!(benches);
