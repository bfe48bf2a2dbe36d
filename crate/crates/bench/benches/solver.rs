use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use wavg_bench::synthetic;
use wavg_core::solver::run;
use wavg_core::{
    AveragingScheme, RunConfig, SamplingStrategy, StepSchedule, SvmObjective, SvmOracle, WeightVector,
};

fn svm_steps(c: &mut Criterion) {
    let mut group = c.benchmark_group("svm_run");
    for p in [20, 200] {
        let d = synthetic(1000, p);
        let lambda = 1e-3;
        let objective = SvmObjective::new(&d, lambda).unwrap();
        let iterations = 10_000;
        group.throughput(Throughput::Elements(iterations));
        for (name, schemes) in [
            ("last", vec![AveragingScheme::NoAveraging]),
            ("six", AveragingScheme::standard_set(iterations)),
        ] {
            group.bench_with_input(BenchmarkId::new(name, p), &schemes, |b, schemes| {
                let mut rc = RunConfig::new(StepSchedule::classical(lambda).unwrap(), schemes.clone(), iterations, iterations);
                rc.evaluations_per_pass = 1;
                b.iter(|| {
                    let mut oracle = SvmOracle::new(&d, lambda, SamplingStrategy::WithReplacement);
                    run(&mut oracle, &objective, &rc, &WeightVector::zeros(d.dim())).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn objective(c: &mut Criterion) {
    let d = synthetic(10_000, 50);
    let objective = SvmObjective::new(&d, 1e-4).unwrap();
    let w = WeightVector::new((0..d.dim()).map(|j| j as f64 / 100.0).collect()).unwrap();
    c.bench_function("svm_objective_10k_x_51", |b| b.iter(|| objective.evaluate(&w).unwrap()));
}

criterion_group!(benches, svm_steps, objective);
criterion_main!(benches);
