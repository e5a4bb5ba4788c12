use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fundgpd::envgpd::{enveloping_groupoid, DEFAULT_STEP_BOUND};
use fundgpd::fieldgalois::{classify_torsors, primitive_idempotents, Fq, DEFAULT_BUDGET};
use fundgpd::fincat::{enumerate_functors, equivalence_check, FinCategory, DEFAULT_FUNCTOR_BUDGET as B};
use fundgpd::progpd::{pro_hom, zhat_chain, MAX_ZHAT_LEVEL};
use fundgpd::topos::CartRing;
use fundgpd::torsors::enumerate_torsors;
use fundgpd_bench::{bgroupoid, groups, large_algebra, walking_idempotent};

fn functors(c: &mut Criterion) {
    let mut g = c.benchmark_group("functors");
    for name in ["Z4", "S3", "Q8"] {
        let h = bgroupoid(name);
        g.bench_with_input(BenchmarkId::new("endofunctors", name), &h, |b, h| {
            b.iter(|| enumerate_functors(h, h, B).unwrap().functors.len())
        });
    }
    let s3 = bgroupoid("S3");
    let inertia = FinCategory::inertia(&fundgpd::FinGroup::symmetric(3));
    let fun = enumerate_functors(&FinCategory::from_group(&fundgpd::FinGroup::cyclic(6)), &s3, B).unwrap().category;
    g.bench_function("equivalence_check", |b| {
        b.iter(|| equivalence_check(black_box(&fun), &inertia, B).unwrap().is_some())
    });
    g.finish();
}

fn torsors(c: &mut Criterion) {
    let mut g = c.benchmark_group("torsors");
    g.sample_size(20);
    for (name, bound) in [("Z3", 3), ("S3", 6)] {
        let h = bgroupoid(name);
        g.bench_with_input(BenchmarkId::new("finset", name), &h, |b, h| {
            b.iter(|| enumerate_torsors(h, &CartRing::FinSet, bound, B).unwrap().torsors.len())
        });
    }
    let ring = CartRing::Presheaf(walking_idempotent());
    let s3 = bgroupoid("S3");
    g.bench_function("presheaf_M_S3", |b| b.iter(|| enumerate_torsors(&s3, &ring, 6, B).unwrap().torsors.len()));
    g.finish();
}

fn galois(c: &mut Criterion) {
    let mut g = c.benchmark_group("galois");
    g.sample_size(20);
    let f2 = Fq::of_order(2).unwrap();
    for gamma in groups() {
        g.bench_with_input(BenchmarkId::new("classify_q2", gamma.label().to_string()), &gamma, |b, gamma| {
            b.iter(|| classify_torsors(gamma, &f2, DEFAULT_BUDGET).unwrap().classes.len())
        });
    }
    let r = large_algebra();
    g.bench_function("pierce_split", |b| b.iter(|| primitive_idempotents(black_box(&r)).unwrap().points()));
    g.finish();
}

fn envelopes_and_pro(c: &mut Criterion) {
    let mut g = c.benchmark_group("envelopes_and_pro");
    let m = walking_idempotent();
    let q8 = bgroupoid("Q8");
    g.bench_function("envelope_M", |b| {
        b.iter(|| enveloping_groupoid(black_box(&m), DEFAULT_STEP_BOUND).unwrap().steps_used)
    });
    g.bench_function("envelope_Q8", |b| {
        b.iter(|| enveloping_groupoid(black_box(&q8), DEFAULT_STEP_BOUND).unwrap().steps_used)
    });
    let z = zhat_chain(MAX_ZHAT_LEVEL).unwrap();
    g.sample_size(10);
    for name in ["S3", "D4"] {
        let h = bgroupoid(name);
        g.bench_with_input(BenchmarkId::new("zhat_hom", name), &h, |b, h| {
            b.iter(|| pro_hom(&z, h, B).unwrap().position)
        });
    }
    g.finish();
}

criterion_group!(benches, functors, torsors, galois, envelopes_and_pro);
criterion_main!(benches);
