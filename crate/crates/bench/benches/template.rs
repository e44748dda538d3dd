use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zkfp_core::matcher::{similarity, to_fixed_point};
use zkfp_core::synthetic::{impression, random_finger, FingerShape, Perturbation};
use zkfp_core::{make_template, TemplateParams};

fn templates(c: &mut Criterion) {
    let shape = FingerShape::default();
    let params = TemplateParams::default();
    let mut group = c.benchmark_group("make_template");
    for n in [10, 24, 40] {
        let finger = random_finger(&mut ChaCha8Rng::seed_from_u64(n as u64), n, &shape);
        group.bench_with_input(BenchmarkId::from_parameter(n), &finger, |b, f| {
            b.iter(|| make_template(black_box(f), &params, b"bench key").unwrap())
        });
    }
    group.finish();
}

fn matching(c: &mut Criterion) {
    let shape = FingerShape::default();
    let params = TemplateParams::default();
    let mut group = c.benchmark_group("similarity");
    for n in [10, 24, 40] {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + n as u64);
        let finger = random_finger(&mut rng, n, &shape);
        let probe = impression(&mut rng, &finger, &Perturbation::default(), &shape);
        let a = make_template(&finger, &params, b"bench key").unwrap();
        let q = make_template(&probe, &params, b"bench key").unwrap();
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| to_fixed_point(&similarity(black_box(&a), black_box(&q)).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, templates, matching);
criterion_main!(benches);
