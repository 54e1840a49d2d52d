use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flipzeros::certificates::{default_c_grid, theorem2_experiment, CertificateParams, Interval, Theorem2Params};
use flipzeros::exec::Execution;
use flipzeros::harness::{run_corollary_v, run_theorem1, ExperimentConfig};
use flipzeros::theta::{FlipModel, MagnitudeLaw, ModelSpec};
use flipzeros::Complex64;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn theorem1(c: &mut Criterion) {
    let mut group = c.benchmark_group("theorem1_n64_x64");
    group.sample_size(10);
    let cfg = ExperimentConfig {
        model: ModelSpec::rademacher(64),
        trials: 64,
        ..ExperimentConfig::default()
    };
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_theorem1(&cfg, exec).unwrap())
        });
    }
    group.finish();
}

fn corollary(c: &mut Criterion) {
    let mut group = c.benchmark_group("corollary_n100_x1000");
    let cfg = ExperimentConfig {
        model: ModelSpec::symmetric(MagnitudeLaw::Normal { sigma: 1.0 }, 100),
        trials: 1000,
        ..ExperimentConfig::default()
    };
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_corollary_v(&cfg, exec).unwrap())
        });
    }
    group.finish();
}

fn theorem2(c: &mut Criterion) {
    let mut group = c.benchmark_group("theorem2_n8");
    group.sample_size(10);
    let model = FlipModel::symmetric(&[Complex64::new(1.0, 0.0); 9]).unwrap();
    let params = Theorem2Params {
        cert: CertificateParams {
            m: 2,
            interval: Interval::new(0.0, 1.0).unwrap(),
            r: 1.0,
            c_candidate: None,
            b_candidate: None,
            grid_points: None,
        },
        c_grid: default_c_grid(),
        samples: None,
        seed: 0,
    };
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| theorem2_experiment(&model, &params, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, theorem1, corollary, theorem2);
criterion_main!(benches);
