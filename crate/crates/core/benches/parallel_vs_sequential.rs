use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qindist_core::analysis::indistinguishability_check_with;
use qindist_core::game::{run_ind_game_with, Distinguisher};
use qindist_core::linalg::hermitian_eig;
use qindist_core::random::{random_hermitian, random_pure_state, seeded};
use qindist_core::scheme::{
    builtin, cipher_state, cipher_state_with, Builtin, Limits, PlaintextSet,
};
use qindist_core::state::PureState;
use qindist_core::Execution;

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn ind_game(c: &mut Criterion) {
    let s = builtin(&Builtin::Qotp, 2, Limits::default()).unwrap();
    let x = PureState::basis("00").unwrap();
    let y = random_pure_state(&mut seeded(1), 2);
    let d = Distinguisher::helstrom(
        &cipher_state(&s, &x).unwrap(),
        &cipher_state(&s, &y).unwrap(),
    )
    .unwrap();
    let mut group = c.benchmark_group("ind_game_100k");
    for (name, exec) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| run_ind_game_with(&s, &x, &y, &d, 100_000, 7, exec).unwrap())
        });
    }
    group.finish();
}

fn cipher_state_qotp(c: &mut Criterion) {
    let mut group = c.benchmark_group("cipher_state_qotp");
    group.sample_size(10);
    for qubits in [3, 5] {
        let s = builtin(&Builtin::Qotp, qubits, Limits::default()).unwrap();
        let x = random_pure_state(&mut seeded(2), qubits);
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, qubits), &qubits, |b, _| {
                b.iter(|| cipher_state_with(&s, &x, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn eigen_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigen_batch_32x64");
    group.sample_size(10);
    let mut rng = seeded(3);
    let batch: Vec<_> = (0..32).map(|_| random_hermitian(&mut rng, 64)).collect();
    for (name, exec) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| exec.map(&batch, |a| hermitian_eig(a).unwrap()))
        });
    }
    group.finish();
}

fn analysis(c: &mut Criterion) {
    let s = builtin(&Builtin::ClassicalOtp, 3, Limits::default()).unwrap();
    let mut rng = seeded(4);
    let entries = (0..8)
        .map(|i| (format!("p{i}"), random_pure_state(&mut rng, 3)))
        .collect();
    let plaintexts = PlaintextSet::new(entries, 3).unwrap();
    let mut group = c.benchmark_group("indistinguishability_8_plaintexts");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| indistinguishability_check_with(&s, &plaintexts, 1e-6, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, ind_game, cipher_state_qotp, eigen_batch, analysis);
criterion_main!(benches);
