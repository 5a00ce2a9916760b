use criterion::{black_box, criterion_group, criterion_main, Criterion};
use vasculo_core::specfun;

fn kernels(c: &mut Criterion) {
    let xs: Vec<f64> = (0..64).map(|i| 1e-3 * 1.12f64.powi(i)).collect();
    c.bench_function("j0 sweep", |b| {
        b.iter(|| {
            xs.iter()
                .map(|&x| specfun::j0(black_box(x)).unwrap().value)
                .sum::<f64>()
        })
    });
    c.bench_function("y0 sweep", |b| {
        b.iter(|| {
            xs.iter()
                .map(|&x| specfun::y0(black_box(x)).unwrap().value)
                .sum::<f64>()
        })
    });
    c.bench_function("i0 sweep", |b| {
        b.iter(|| {
            xs.iter()
                .map(|&x| specfun::i0(black_box(x)).unwrap().value)
                .sum::<f64>()
        })
    });
    c.bench_function("k0 sweep", |b| {
        b.iter(|| {
            xs.iter()
                .map(|&x| specfun::k0(black_box(x)).unwrap().value)
                .sum::<f64>()
        })
    });
}

criterion_group!(benches, kernels);
criterion_main!(benches);
