use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use mzv_core::algebra::parse::parse_poly;
use mzv_core::{FieldSpec, PowerSums, ResidueRing};

fn sums(q: u64) -> PowerSums {
    PowerSums::from_spec(FieldSpec::with_q(q).unwrap())
}

fn exact(c: &mut Criterion) {
    c.bench_function("exact S_d(k), q=3, d<=4, k in 1..=6", |b| {
        b.iter_batched(
            || sums(3),
            |s| {
                for d in 0..=4 {
                    for k in 1..=6 {
                        black_box(s.exact(d, k));
                    }
                }
            },
            BatchSize::SmallInput,
        )
    });
    c.bench_function("exact S_d(-k), q=2, d<=8, k in 1..=8", |b| {
        b.iter_batched(
            || sums(2),
            |s| {
                for d in 0..=8 {
                    for k in 1..=8 {
                        black_box(s.exact(d, -k));
                    }
                }
            },
            BatchSize::SmallInput,
        )
    });
}

fn residues(c: &mut Criterion) {
    c.bench_function("coprime S_d(k) mod (t^2+t+1)^6, q=2, d<40", |b| {
        b.iter_batched(
            || {
                let s = sums(2);
                let v = parse_poly(s.poly_ring(), "t^2+t+1").unwrap();
                let rr = ResidueRing::new(s.field().clone(), v, 6).unwrap();
                (s, rr)
            },
            |(s, rr)| {
                for d in 0..40 {
                    for k in 1..=6 {
                        black_box(s.residue(&rr, d, k, true).unwrap());
                    }
                }
            },
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, exact, residues);
criterion_main!(benches);
