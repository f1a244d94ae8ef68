use criterion::{black_box, criterion_group, criterion_main, Criterion};
use skyshift_core::equivalence::{find_swe_not_shift, partition, Relation, Universe};
use skyshift_core::{
    build_automaton, m_level_dp, parse_word, series_a, shift_class, strong_wilf_equivalent,
};

fn levels(c: &mut Criterion) {
    let u = parse_word("3122").unwrap();
    c.bench_function("m_level_dp 3122 m=5", |b| {
        b.iter(|| m_level_dp(&build_automaton(black_box(&u)), 5, 40))
    });
    let r = build_automaton(&parse_word("235164").unwrap()).reduce();
    c.bench_function("reduced levels 235164 x12", |b| {
        b.iter(|| black_box(&r).levels(12))
    });
    let (u, v) = (parse_word("223133").unwrap(), parse_word("233132").unwrap());
    c.bench_function("strong_wilf 223133 233132", |b| {
        b.iter(|| strong_wilf_equivalent(black_box(&u), black_box(&v)))
    });
}

fn series(c: &mut Criterion) {
    let u = parse_word("132").unwrap();
    c.bench_function("series_a 132 cap 16", |b| {
        b.iter(|| series_a(black_box(&u), 16, 14))
    });
}

fn classes(c: &mut Criterion) {
    let u = parse_word("2233213452").unwrap();
    c.bench_function("shift_class 2233213452", |b| {
        b.iter(|| shift_class(black_box(&u)))
    });
    let s5 = Universe::permutations(5).unwrap();
    c.bench_function("partition S5 strong_wilf", |b| {
        b.iter(|| partition(black_box(&s5), Relation::StrongWilf))
    });
    let sum10 = Universe::by_sum(10).unwrap();
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("sum 10", |b| {
        b.iter(|| find_swe_not_shift(black_box(&sum10)))
    });
    group.finish();
}

criterion_group!(benches, levels, series, classes);
criterion_main!(benches);
