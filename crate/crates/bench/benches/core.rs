use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use unramified_core::dseries::DFamily;
use unramified_core::experiments::{sample_rng, ModelKind, SamplingModel};
use unramified_core::padic::{count_generating_roots, phi, GaloisRingContext};

fn d_functions(c: &mut Criterion) {
    let mut g = c.benchmark_group("d_function");
    for n in [6u64, 12, 24] {
        g.bench_with_input(BenchmarkId::new("d", n), &n, |b, &n| {
            b.iter(|| DFamily::new().d(n).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("d_star_render", n), &n, |b, &n| {
            b.iter(|| DFamily::new().d_star(n).unwrap().render())
        });
    }
    g.finish();
}

fn galois_ring(c: &mut Criterion) {
    let mut g = c.benchmark_group("galois_ring");
    for (p, n, m) in [(2u64, 3u32, 40u32), (3, 3, 40), (2, 4, 126)] {
        let ctx = GaloisRingContext::new(p, n, m).unwrap();
        let mut rng = sample_rng(1, 0);
        let x = ctx.random_element(&mut rng);
        let y = ctx.random_element(&mut rng);
        let id = format!("p{p}_n{n}_m{m}");
        g.bench_function(BenchmarkId::new("mul", &id), |b| {
            b.iter(|| ctx.mul(black_box(&x), black_box(&y)))
        });
        g.bench_function(BenchmarkId::new("frobenius", &id), |b| {
            b.iter(|| ctx.frobenius(black_box(&x)))
        });
        g.bench_function(BenchmarkId::new("phi", &id), |b| b.iter(|| phi(&ctx, black_box(&x))));
    }
    g.finish();
}

fn root_counting(c: &mut Criterion) {
    let mut g = c.benchmark_group("root_counting");
    for (n, p) in [(2u32, 2u64), (2, 5), (3, 3)] {
        let model = SamplingModel::new(ModelKind::Haar, n, p);
        let ctx = model.context().unwrap();
        let polys: Vec<_> = (0..64).map(|i| model.sample(&ctx, &mut sample_rng(7, i))).collect();
        g.bench_function(BenchmarkId::new("haar_64", format!("n{n}_p{p}")), |b| {
            b.iter(|| {
                for f in &polys {
                    black_box(count_generating_roots(f, &ctx).unwrap());
                }
            })
        });
    }
    g.finish();
}

criterion_group!(benches, d_functions, galois_ring, root_counting);
criterion_main!(benches);
