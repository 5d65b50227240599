use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use k3cert_bench::hilbert_pairs;
use k3cert_core::arith::{hilbert, support_primes, Place};

fn bench_hilbert(c: &mut Criterion) {
    let pairs = hilbert_pairs(100);
    c.bench_function("hilbert/all_places_100_pairs", |b| {
        b.iter(|| {
            let mut bits = 0;
            for (x, y) in &pairs {
                let mut places = vec![Place::Infinite, Place::Finite(2)];
                places.extend(support_primes(x).unwrap().into_iter().map(Place::Finite));
                places.extend(support_primes(y).unwrap().into_iter().map(Place::Finite));
                places.sort();
                places.dedup();
                for v in places {
                    bits += hilbert(black_box(x), black_box(y), v).unwrap().bit();
                }
            }
            bits
        })
    });
}

criterion_group!(benches, bench_hilbert);
criterion_main!(benches);
