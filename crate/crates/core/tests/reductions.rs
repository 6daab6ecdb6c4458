use qindist_core::analysis::trace_distance;
use qindist_core::game::{
    adversary_from_distinguisher, baseline_adversary, distinguisher_from_adversary, run_ind_game,
    run_semantic_game, Adversary, Distinguisher, Hint, SemanticInstance,
};
use qindist_core::scheme::{builtin, cipher_state, Builtin, Limits, Scheme};
use qindist_core::state::PureState;

const TRIALS: u64 = 40_000;

fn schemes() -> Vec<Scheme> {
    let lim = Limits::default();
    vec![
        builtin(&Builtin::Qotp, 1, lim).unwrap(),
        builtin(&Builtin::Identity, 1, lim).unwrap(),
        builtin(&Builtin::ClassicalOtp, 1, lim).unwrap(),
        builtin(&Builtin::Qotp, 2, lim).unwrap(),
        builtin(&Builtin::ClassicalOtp, 2, lim).unwrap(),
        builtin(
            &Builtin::PauliSubset(vec!["I".parse().unwrap(), "X".parse().unwrap()]),
            1,
            lim,
        )
        .unwrap(),
    ]
}

fn plaintexts(qubits: usize) -> Vec<PureState> {
    let mut out: Vec<PureState> = (0..1usize << qubits)
        .map(|i| PureState::basis_index(qubits, i).unwrap())
        .collect();
    if qubits == 1 {
        out.extend([PureState::plus(), PureState::minus()]);
    } else {
        out.push(qindist_core::random::random_pure_state(
            &mut qindist_core::random::seeded(3),
            qubits,
        ));
    }
    out
}

/// Every pair of plaintexts for every reference scheme, with the cipher-state distance.
fn cases() -> Vec<(Scheme, PureState, PureState, f64)> {
    let mut out = Vec::new();
    for s in schemes() {
        let pts = plaintexts(s.qubits());
        for (i, x) in pts.iter().enumerate() {
            for y in &pts[i + 1..] {
                let d =
                    trace_distance(&cipher_state(&s, x).unwrap(), &cipher_state(&s, y).unwrap())
                        .unwrap();
                out.push((s.clone(), x.clone(), y.clone(), d));
            }
        }
    }
    out
}

#[test]
fn round_trip_reduction_recovers_helstrom_advantage() {
    for (seed, (s, x, y, d)) in cases().into_iter().enumerate() {
        let helstrom = Distinguisher::helstrom(
            &cipher_state(&s, &x).unwrap(),
            &cipher_state(&s, &y).unwrap(),
        )
        .unwrap();
        let inst =
            SemanticInstance::new(x.clone(), y.clone(), Hint::Distinguisher(helstrom)).unwrap();
        let adv = adversary_from_distinguisher(&inst).unwrap();
        let back = distinguisher_from_adversary(&adv, &inst).unwrap();
        let r = run_ind_game(&s, &x, &y, &back, TRIALS, seed as u64).unwrap();
        // |2s - 1| against d: compare success s against ½(1 + d).
        assert!(
            r.within(0.5 * (1.0 + d), 5.0),
            "{} pair {seed}: {r:?} vs D = {d}",
            s.name()
        );
    }
}

#[test]
fn no_adversary_beats_the_helstrom_ceiling() {
    for (seed, (s, x, y, d)) in cases().into_iter().enumerate() {
        let helstrom = Distinguisher::helstrom(
            &cipher_state(&s, &x).unwrap(),
            &cipher_state(&s, &y).unwrap(),
        )
        .unwrap();
        let inst =
            SemanticInstance::new(x.clone(), y.clone(), Hint::Distinguisher(helstrom)).unwrap();
        let dim = s.dim();
        let random_measure = Adversary::measurement(
            qindist_core::random::random_two_outcome_povm(
                &mut qindist_core::random::seeded(seed as u64),
                dim,
            ),
            vec![1, 0],
        )
        .unwrap();
        let computational = Adversary::measurement(
            qindist_core::state::Povm::computational(s.qubits()).unwrap(),
            (0..dim).map(|i| u8::from(i % 2 == 0)).collect(),
        )
        .unwrap();
        let adversaries = [
            adversary_from_distinguisher(&inst).unwrap(),
            baseline_adversary(&inst),
            Adversary::constant(1).unwrap(),
            random_measure,
            computational,
        ];
        for (j, adv) in adversaries.iter().enumerate() {
            let r =
                run_semantic_game(&s, &inst, adv, TRIALS, 1000 * seed as u64 + j as u64).unwrap();
            let ceiling = 0.5 * (1.0 + d);
            assert!(
                r.empirical_success <= ceiling + 5.0 * r.stderr + 1e-12,
                "{} pair {seed} adversary {j}: {r:?} above {ceiling}",
                s.name()
            );
        }
    }
}

#[test]
fn baseline_is_pinned_to_one_half() {
    for (seed, (s, x, y, _)) in cases().into_iter().enumerate() {
        let inst = SemanticInstance::new(x, y, Hint::None).unwrap();
        let r = run_semantic_game(
            &s,
            &inst,
            &baseline_adversary(&inst),
            TRIALS,
            77 + seed as u64,
        )
        .unwrap();
        assert!(r.within(0.5, 5.0), "{} pair {seed}: {r:?}", s.name());
    }
}

#[test]
fn semantic_advantage_doubles_into_distinguishing_advantage() {
    let s = builtin(&Builtin::Identity, 1, Limits::default()).unwrap();
    let (x, y) = (PureState::basis("0").unwrap(), PureState::plus());
    let helstrom = Distinguisher::helstrom(
        &cipher_state(&s, &x).unwrap(),
        &cipher_state(&s, &y).unwrap(),
    )
    .unwrap();
    let inst = SemanticInstance::new(x.clone(), y.clone(), Hint::Distinguisher(helstrom)).unwrap();
    let adv = adversary_from_distinguisher(&inst).unwrap();
    let sem = run_semantic_game(&s, &inst, &adv, 100_000, 5).unwrap();
    let back = distinguisher_from_adversary(&adv, &inst).unwrap();
    let ind = run_ind_game(&s, &x, &y, &back, 100_000, 6).unwrap();
    let band = 5.0 * (ind.stderr * 2.0 + sem.stderr * 2.0);
    assert!(
        (ind.empirical_advantage - 2.0 * sem.empirical_advantage).abs() <= band,
        "{ind:?} vs {sem:?}"
    );
}
