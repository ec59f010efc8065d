//! Sequential vs rayon fan-out on the two batch workloads that dominate real
//! runs: a randomized MVT sweep and an exact FTC sweep.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use prering::exec::{self, Execution};
use prering::harness::{self, MvtInstance};
use prering::piecewise::PiecewiseFunc;
use prering::poly::Poly;
use prering::random::{self, rng_for};
use prering::rational::int;

const BATCH: usize = 64;

fn mvt_batch() -> Vec<MvtInstance> {
    (0..BATCH)
        .map(|i| {
            let mut rng = rng_for(7, i as u64);
            let f = random::rand_continuous_piecewise_poly(&mut rng, 2, &int(-1), &int(2), 4, 3);
            let slope = f.lipschitz_bound().unwrap() + int(1);
            let g = PiecewiseFunc::polynomial(f.domain(), vec![Poly::new(vec![int(0), slope])])
                .unwrap();
            let corners = f.breakpoints();
            MvtInstance::new(
                format!("bench {i}"),
                f,
                g,
                "[-1,2]".parse().unwrap(),
                corners,
            )
            .unwrap()
        })
        .collect()
}

fn ftc_batch() -> Vec<PiecewiseFunc> {
    (0..BATCH)
        .map(|i| {
            random::rand_continuous_piecewise_poly(
                &mut rng_for(8, i as u64),
                3,
                &int(-2),
                &int(2),
                6,
                4,
            )
        })
        .collect()
}

fn sweeps(c: &mut Criterion) {
    let mvt = mvt_batch();
    let ftc = ftc_batch();
    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    for (name, exec) in [
        ("sequential", Execution::Sequential),
        ("parallel", Execution::Parallel),
    ] {
        group.bench_with_input(BenchmarkId::new("mvt", name), &exec, |b, &exec| {
            b.iter(|| {
                exec::map_slice(exec, &mvt, |inst| {
                    harness::check_strong_mvt(black_box(inst), 256).unwrap()
                })
            })
        });
        group.bench_with_input(BenchmarkId::new("ftc", name), &exec, |b, &exec| {
            b.iter(|| {
                exec::map_slice(exec, &ftc, |f| {
                    harness::check_ftc(
                        black_box(f),
                        &int(-2),
                        &int(2),
                        &f.breakpoints().into_iter().collect(),
                    )
                    .unwrap()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
