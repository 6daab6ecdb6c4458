//! Monte Carlo distinguishing and semantic-security games.
//!
//! Every trial `i` draws from its own stream `SeedStream::split(seed, i)` in a
//! fixed order: challenge bit, then key, then measurement outcome. The Born
//! probabilities `Pr[output 1 | plaintext, key]` are computed once before the
//! trials, so a trial is three uniform draws and a table lookup. Win counts are
//! integers, which makes the result independent of how trials are scheduled.
//!
//! Bit conventions: a [`Distinguisher`] outputs 1 when it believes the
//! plaintext was `x`. In the distinguishing game the challenge bit `b = 0`
//! selects `x`. In the semantic game the predicate is `f = 1` on `x` and
//! `f = 0` on `y`.

use std::fmt;
use std::sync::Arc;

use crate::analysis::{helstrom_povm, RHO_LABEL};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{Complex, ComplexMatrix, ZERO};
use crate::rng::SeedStream;
use crate::scheme::{KeyModel, Scheme};
use crate::state::{DensityOperator, Povm, PureState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameResult {
    pub trials: u64,
    pub wins: u64,
    pub empirical_success: f64,
    /// `|2s - 1|` for the distinguishing game, `s - ½` for the semantic game.
    pub empirical_advantage: f64,
    /// Binomial standard error `sqrt(s(1 - s)/trials)`.
    pub stderr: f64,
    pub seed: u64,
}

impl GameResult {
    fn from_counts(trials: u64, wins: u64, seed: u64, advantage: impl Fn(f64) -> f64) -> Self {
        let s = wins as f64 / trials as f64;
        Self {
            trials,
            wins,
            empirical_success: s,
            empirical_advantage: advantage(s),
            stderr: (s * (1.0 - s) / trials as f64).sqrt(),
            seed,
        }
    }

    /// Whether `empirical_success` lies within `k` standard errors of `expected`.
    pub fn within(&self, expected: f64, k: f64) -> bool {
        (self.empirical_success - expected).abs() <= k * self.stderr + 1e-12
    }
}

/// Two-outcome measurement whose outcome `x_label` means "the plaintext was `x`".
#[derive(Debug, Clone, PartialEq)]
pub struct Distinguisher {
    povm: Povm,
    x_label: String,
}

impl Distinguisher {
    pub fn new(povm: Povm, x_label: impl Into<String>) -> Result<Self> {
        let x_label = x_label.into();
        if povm.len() != 2 {
            return Err(Error::Usage(format!(
                "a distinguisher needs a two-outcome POVM, got {} outcomes",
                povm.len()
            )));
        }
        if povm.index_of(&x_label).is_none() {
            return Err(Error::Usage(format!("POVM has no outcome {x_label:?}")));
        }
        Ok(Self { povm, x_label })
    }

    /// POVM with outcomes `"0"` and `"1"`, read as the distinguisher's output bit.
    pub fn from_bit_povm(povm: Povm) -> Result<Self> {
        let mut labels: Vec<&str> = povm.labels().iter().map(String::as_str).collect();
        labels.sort_unstable();
        if labels != ["0", "1"] {
            return Err(Error::Usage(format!(
                "expected POVM outcomes {{0, 1}}, got {:?}",
                povm.labels()
            )));
        }
        Self::new(povm, "1")
    }

    /// Optimal measurement for telling `rho` (the `x` side) from `sigma`.
    pub fn helstrom(rho: &DensityOperator, sigma: &DensityOperator) -> Result<Self> {
        Self::new(helstrom_povm(rho, sigma)?, RHO_LABEL)
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn x_label(&self) -> &str {
        &self.x_label
    }

    fn x_effect(&self) -> &ComplexMatrix {
        &self.povm.effects()[self.povm.index_of(&self.x_label).expect("validated label")]
    }
}

/// Key sampling by inverse CDF over the scheme's key probabilities.
struct KeySampler {
    cumulative: Vec<f64>,
    last_live: usize,
}

impl KeySampler {
    fn new(s: &Scheme) -> Self {
        let mut acc = 0.0;
        let cumulative = s
            .keys()
            .iter()
            .map(|k| {
                acc += k.prob;
                acc
            })
            .collect();
        let last_live = s.keys().iter().rposition(|k| k.prob > 0.0).unwrap_or(0);
        Self {
            cumulative,
            last_live,
        }
    }

    fn sample(&self, u: f64) -> usize {
        let idx = self.cumulative.partition_point(|&c| c <= u);
        idx.min(self.last_live)
    }
}

/// Ciphertext vectors for key `k` in the register the adversary measures:
/// the cipher register, or key register ⊗ cipher register in public mode.
fn observed_branches(
    s: &Scheme,
    x: &PureState,
    measured_dim: usize,
    exec: Execution,
) -> Result<Vec<Vec<Vec<Complex>>>> {
    if x.qubits() != s.qubits() {
        return Err(Error::DimensionMismatch {
            left: s.dim(),
            right: x.dim(),
        });
    }
    let d = s.dim();
    let joint_dim = (1usize << s.key_register_qubits()) * d;
    let embed = if measured_dim == d {
        false
    } else if s.key_model() == KeyModel::Public && measured_dim == joint_dim {
        true
    } else {
        return Err(Error::DimensionMismatch {
            left: measured_dim,
            right: d,
        });
    };
    let indices: Vec<usize> = (0..s.keys().len()).collect();
    exec.map(&indices, |&k| {
        let branches = s.keys()[k].encrypt.apply_pure(x.amplitudes())?;
        if !embed {
            return Ok(branches);
        }
        Ok(branches
            .into_iter()
            .map(|v| {
                let mut full = vec![ZERO; joint_dim];
                full[k * d..(k + 1) * d].copy_from_slice(&v);
                full
            })
            .collect())
    })
    .into_iter()
    .collect()
}

/// `Pr[accept | plaintext, key]` for each key, for `effect` the accepting effect.
fn accept_probabilities(
    s: &Scheme,
    x: &PureState,
    effect: &ComplexMatrix,
    exec: Execution,
) -> Result<Vec<f64>> {
    let outputs = observed_branches(s, x, effect.dim(), exec)?;
    exec.map(&outputs, |branches| {
        let p = branches
            .iter()
            .map(|v| effect.expectation(v))
            .sum::<Result<f64>>()?;
        if !(-1e-9..=1.0 + 1e-9).contains(&p) {
            return Err(Error::Numeric(format!(
                "outcome probability {p} outside [0, 1]"
            )));
        }
        Ok(p.clamp(0.0, 1.0))
    })
    .into_iter()
    .collect()
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        Err(Error::Usage("trials must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn average_over_keys(s: &Scheme, table: &[f64]) -> f64 {
    s.keys().iter().zip(table).map(|(k, p)| k.prob * p).sum()
}

pub fn run_ind_game(
    s: &Scheme,
    x: &PureState,
    y: &PureState,
    dist: &Distinguisher,
    trials: u64,
    seed: u64,
) -> Result<GameResult> {
    run_ind_game_with(s, x, y, dist, trials, seed, Execution::default())
}

/// Distinguishing game: `b` uniform, key from the key distribution, encrypt
/// `x` (`b = 0`) or `y` (`b = 1`), measure; win iff the guess equals `b`.
pub fn run_ind_game_with(
    s: &Scheme,
    x: &PureState,
    y: &PureState,
    dist: &Distinguisher,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<GameResult> {
    check_trials(trials)?;
    let effect = dist.x_effect();
    let table = [
        accept_probabilities(s, x, effect, exec)?,
        accept_probabilities(s, y, effect, exec)?,
    ];
    let keys = KeySampler::new(s);
    let wins = exec.count(trials, |i| {
        let mut r = SeedStream::split(seed, i);
        let b = usize::from(r.bit());
        let k = keys.sample(r.uniform());
        let says_x = r.uniform() < table[b][k];
        u64::from(says_x == (b == 0))
    });
    Ok(GameResult::from_counts(trials, wins, seed, |p| {
        (2.0 * p - 1.0).abs()
    }))
}

/// Exact success probability of `dist` in the distinguishing game.
pub fn ind_success_probability(
    s: &Scheme,
    x: &PureState,
    y: &PureState,
    dist: &Distinguisher,
) -> Result<f64> {
    let effect = dist.x_effect();
    let px = average_over_keys(
        s,
        &accept_probabilities(s, x, effect, Execution::default())?,
    );
    let py = average_over_keys(
        s,
        &accept_probabilities(s, y, effect, Execution::default())?,
    );
    Ok(0.5 * (px + 1.0 - py))
}

/// What the adversary is given besides the ciphertext.
#[derive(Debug, Clone, PartialEq)]
pub enum Hint {
    /// Description of a distinguisher for the two plaintexts.
    Distinguisher(Distinguisher),
    None,
}

/// Plaintext distribution uniform over `{x, y}` with `f = 1` on `x`, `f = 0` on `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticInstance {
    x: PureState,
    y: PureState,
    hint: Hint,
}

impl SemanticInstance {
    pub fn new(x: PureState, y: PureState, hint: Hint) -> Result<Self> {
        if x.qubits() != y.qubits() {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: y.dim(),
            });
        }
        if x == y {
            return Err(Error::Usage(
                "semantic instance needs two different plaintexts".into(),
            ));
        }
        Ok(Self { x, y, hint })
    }

    pub fn x(&self) -> &PureState {
        &self.x
    }

    pub fn y(&self) -> &PureState {
        &self.y
    }

    pub fn hint(&self) -> &Hint {
        &self.hint
    }

    fn branch(&self, b: usize) -> &PureState {
        if b == 0 {
            &self.x
        } else {
            &self.y
        }
    }
}

/// Adversary that is not a measurement policy: an arbitrary function of the
/// ciphertext state and the trial's random stream.
pub type OpaqueFn = dyn Fn(&DensityOperator, &mut SeedStream) -> u8 + Send + Sync;

#[derive(Clone)]
pub enum Strategy {
    /// Measure, then output `outputs[m]` on outcome `m`.
    Measurement {
        povm: Povm,
        outputs: Vec<u8>,
    },
    UniformGuess,
    Constant(u8),
    Opaque(Arc<OpaqueFn>),
}

impl fmt::Debug for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Measurement { povm, outputs } => f
                .debug_struct("Measurement")
                .field("labels", &povm.labels())
                .field("outputs", outputs)
                .finish(),
            Strategy::UniformGuess => f.write_str("UniformGuess"),
            Strategy::Constant(c) => write!(f, "Constant({c})"),
            Strategy::Opaque(_) => f.write_str("Opaque"),
        }
    }
}

/// Output bit for (branch, key index, trial stream).
type TrialOutput = Box<dyn Fn(usize, usize, &mut SeedStream) -> u8 + Send + Sync>;

/// A guesser for `f` in the semantic game.
#[derive(Debug, Clone)]
pub struct Adversary {
    strategy: Strategy,
}

impl Adversary {
    pub fn measurement(povm: Povm, outputs: Vec<u8>) -> Result<Self> {
        if outputs.len() != povm.len() {
            return Err(Error::Usage(format!(
                "{} outputs for {} POVM outcomes",
                outputs.len(),
                povm.len()
            )));
        }
        if outputs.iter().any(|&o| o > 1) {
            return Err(Error::Usage("adversary outputs must be bits".into()));
        }
        Ok(Self {
            strategy: Strategy::Measurement { povm, outputs },
        })
    }

    pub fn constant(bit: u8) -> Result<Self> {
        if bit > 1 {
            return Err(Error::Usage(format!("constant output {bit} is not a bit")));
        }
        Ok(Self {
            strategy: Strategy::Constant(bit),
        })
    }

    pub fn opaque(
        f: impl Fn(&DensityOperator, &mut SeedStream) -> u8 + Send + Sync + 'static,
    ) -> Self {
        Self {
            strategy: Strategy::Opaque(Arc::new(f)),
        }
    }

    pub fn strategy(&self) -> &Strategy {
        &self.strategy
    }

    /// The effect for output 1, when the strategy is a measurement on a `dim`-dimensional register.
    fn output_one_effect(&self, dim: usize) -> Result<ComplexMatrix> {
        match &self.strategy {
            Strategy::Measurement { povm, outputs } => {
                let mut e = ComplexMatrix::zeros(povm.dim());
                for (effect, &o) in povm.effects().iter().zip(outputs) {
                    if o == 1 {
                        e = e.add(effect)?;
                    }
                }
                Ok(e)
            }
            Strategy::UniformGuess => Ok(ComplexMatrix::identity(dim).scale_real(0.5)),
            Strategy::Constant(c) => Ok(ComplexMatrix::identity(dim).scale_real(f64::from(*c))),
            Strategy::Opaque(_) => Err(Error::Usage(
                "adversary is not measurement-based; it has no output POVM".into(),
            )),
        }
    }
}

/// The adversary that reads the distinguisher from the hint, runs it on the
/// ciphertext and outputs its bit as the guess for `f`.
pub fn adversary_from_distinguisher(inst: &SemanticInstance) -> Result<Adversary> {
    let Hint::Distinguisher(d) = inst.hint() else {
        return Err(Error::Usage(
            "instance hint does not carry a distinguisher".into(),
        ));
    };
    let outputs = d
        .povm()
        .labels()
        .iter()
        .map(|l| u8::from(l == d.x_label()))
        .collect();
    Adversary::measurement(d.povm().clone(), outputs)
}

/// Ignores the ciphertext and guesses `f` with a fair coin.
pub fn baseline_adversary(_inst: &SemanticInstance) -> Adversary {
    Adversary {
        strategy: Strategy::UniformGuess,
    }
}

/// Distinguisher that runs `adv` and outputs 1 iff the adversary outputs
/// `f(x) = 1`. Only measurement-based adversaries (including the coin and
/// constant guessers, as POVMs proportional to the identity) convert.
pub fn distinguisher_from_adversary(
    adv: &Adversary,
    inst: &SemanticInstance,
) -> Result<Distinguisher> {
    let one = adv.output_one_effect(inst.x().dim())?;
    if one.dim() % inst.x().dim() != 0 {
        return Err(Error::DimensionMismatch {
            left: one.dim(),
            right: inst.x().dim(),
        });
    }
    let zero = ComplexMatrix::identity(one.dim()).sub(&one)?;
    let povm = Povm::new(vec![zero, one], vec!["0".into(), "1".into()])?;
    Distinguisher::new(povm, "1")
}

pub fn run_semantic_game(
    s: &Scheme,
    inst: &SemanticInstance,
    adv: &Adversary,
    trials: u64,
    seed: u64,
) -> Result<GameResult> {
    run_semantic_game_with(s, inst, adv, trials, seed, Execution::default())
}

/// Semantic game: branch uniform over `{x, y}`, key from the key
/// distribution, encrypt, run the adversary; win iff its output equals `f`.
/// The reported advantage is `success - ½`, the excess over guessing.
pub fn run_semantic_game_with(
    s: &Scheme,
    inst: &SemanticInstance,
    adv: &Adversary,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<GameResult> {
    check_trials(trials)?;
    let keys = KeySampler::new(s);
    let outcome: TrialOutput = match &adv.strategy {
        Strategy::Measurement { .. } => {
            let effect = adv.output_one_effect(s.dim())?;
            let table = [
                accept_probabilities(s, inst.x(), &effect, exec)?,
                accept_probabilities(s, inst.y(), &effect, exec)?,
            ];
            Box::new(move |b, k, r| u8::from(r.uniform() < table[b][k]))
        }
        Strategy::UniformGuess => {
            observed_branches(s, inst.x(), s.dim(), Execution::Sequential)?;
            Box::new(|_, _, r| r.bit())
        }
        Strategy::Constant(c) => {
            observed_branches(s, inst.x(), s.dim(), Execution::Sequential)?;
            let c = *c;
            Box::new(move |_, _, _| c)
        }
        Strategy::Opaque(f) => {
            let dim = match s.key_model() {
                KeyModel::Private => s.dim(),
                KeyModel::Public => (1usize << s.key_register_qubits()) * s.dim(),
            };
            let states = [0, 1].map(|b| -> Result<Vec<DensityOperator>> {
                observed_branches(s, inst.branch(b), dim, exec)?
                    .into_iter()
                    .map(|branches| {
                        let mut m = ComplexMatrix::zeros(dim);
                        for v in &branches {
                            m = m.add(&ComplexMatrix::outer(v)?)?;
                        }
                        DensityOperator::new(m)
                    })
                    .collect()
            });
            let [sx, sy] = states;
            let table = [sx?, sy?];
            let f = Arc::clone(f);
            Box::new(move |b, k, r| f(&table[b][k], r) & 1)
        }
    };
    let wins = exec.count(trials, |i| {
        let mut r = SeedStream::split(seed, i);
        let b = usize::from(r.bit());
        let k = keys.sample(r.uniform());
        let f_value = u8::from(b == 0);
        u64::from(outcome(b, k, &mut r) == f_value)
    });
    Ok(GameResult::from_counts(trials, wins, seed, |p| p - 0.5))
}

/// Exact success probability of a measurement-based adversary in the semantic game.
pub fn semantic_success_probability(
    s: &Scheme,
    inst: &SemanticInstance,
    adv: &Adversary,
) -> Result<f64> {
    let effect = adv.output_one_effect(s.dim())?;
    let px = average_over_keys(
        s,
        &accept_probabilities(s, inst.x(), &effect, Execution::default())?,
    );
    let py = average_over_keys(
        s,
        &accept_probabilities(s, inst.y(), &effect, Execution::default())?,
    );
    Ok(0.5 * (px + 1.0 - py))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{helstrom_success, trace_distance};
    use crate::scheme::{builtin, cipher_state, Builtin, Limits};
    use crate::state::pure_to_density;

    fn scheme(kind: Builtin) -> Scheme {
        builtin(&kind, 1, Limits::default()).unwrap()
    }

    fn bit_flip_pad() -> Scheme {
        scheme(Builtin::PauliSubset(vec![
            "I".parse().unwrap(),
            "X".parse().unwrap(),
        ]))
    }

    fn helstrom_for(s: &Scheme, x: &PureState, y: &PureState) -> Distinguisher {
        Distinguisher::helstrom(&cipher_state(s, x).unwrap(), &cipher_state(s, y).unwrap()).unwrap()
    }

    fn instance(s: &Scheme, x: PureState, y: PureState) -> SemanticInstance {
        let d = helstrom_for(s, &x, &y);
        SemanticInstance::new(x, y, Hint::Distinguisher(d)).unwrap()
    }

    fn zero() -> PureState {
        PureState::basis("0").unwrap()
    }

    fn one() -> PureState {
        PureState::basis("1").unwrap()
    }

    #[test]
    fn result_statistics() {
        let r = GameResult::from_counts(100, 75, 9, |p| (2.0 * p - 1.0).abs());
        assert_eq!(r.empirical_success, 0.75);
        assert_eq!(r.empirical_advantage, 0.5);
        assert!((r.stderr - (0.75f64 * 0.25 / 100.0).sqrt()).abs() < 1e-15);
        assert!(r.within(0.7, 5.0));
        assert!(!r.within(0.5, 5.0));
    }

    #[test]
    fn key_sampler_boundaries() {
        let s = builtin(&Builtin::Qotp, 1, Limits::default()).unwrap();
        let ks = KeySampler::new(&s);
        assert_eq!(ks.sample(0.0), 0);
        assert_eq!(ks.sample(0.2499), 0);
        assert_eq!(ks.sample(0.25), 1);
        assert_eq!(ks.sample(0.9999999), 3);
        assert_eq!(ks.sample(1.0), 3);
    }

    #[test]
    fn identity_orthogonal_is_perfect() {
        let s = scheme(Builtin::Identity);
        let d = helstrom_for(&s, &zero(), &one());
        let r = run_ind_game(&s, &zero(), &one(), &d, 10_000, 1).unwrap();
        assert_eq!(r.wins, 10_000);
        assert_eq!(r.empirical_success, 1.0);
        assert_eq!(
            ind_success_probability(&s, &zero(), &one(), &d).unwrap(),
            1.0
        );
    }

    #[test]
    fn qotp_game_is_a_coin_flip() {
        let s = builtin(&Builtin::Qotp, 1, Limits::default()).unwrap();
        let d = helstrom_for(&s, &zero(), &PureState::plus());
        let r = run_ind_game(&s, &zero(), &PureState::plus(), &d, 100_000, 2).unwrap();
        assert!(r.within(0.5, 5.0), "{r:?}");
    }

    #[test]
    fn identity_zero_plus_matches_helstrom() {
        let s = scheme(Builtin::Identity);
        let (x, y) = (zero(), PureState::plus());
        let d = helstrom_for(&s, &x, &y);
        let expected = helstrom_success(&pure_to_density(&x), &pure_to_density(&y)).unwrap();
        assert!((ind_success_probability(&s, &x, &y, &d).unwrap() - expected).abs() < 1e-12);
        let r = run_ind_game(&s, &x, &y, &d, 100_000, 3).unwrap();
        assert!(r.within(expected, 5.0), "{r:?} vs {expected}");
    }

    #[test]
    fn games_do_not_depend_on_execution_strategy() {
        let s = builtin(&Builtin::Qotp, 2, Limits::default()).unwrap();
        let x = PureState::basis("01").unwrap();
        let y = crate::random::random_pure_state(&mut crate::random::seeded(5), 2);
        let d = Distinguisher::from_bit_povm(crate::random::random_two_outcome_povm(
            &mut crate::random::seeded(6),
            4,
        ))
        .unwrap();
        let par = run_ind_game_with(&s, &x, &y, &d, 20_000, 7, Execution::Parallel).unwrap();
        let seq = run_ind_game_with(&s, &x, &y, &d, 20_000, 7, Execution::Sequential).unwrap();
        assert_eq!(par, seq);
        let inst = SemanticInstance::new(x, y, Hint::Distinguisher(d)).unwrap();
        let adv = adversary_from_distinguisher(&inst).unwrap();
        let par = run_semantic_game_with(&s, &inst, &adv, 20_000, 8, Execution::Parallel).unwrap();
        let seq =
            run_semantic_game_with(&s, &inst, &adv, 20_000, 8, Execution::Sequential).unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn adversary_from_distinguisher_examples() {
        let s = scheme(Builtin::Identity);
        let inst = instance(&s, zero(), one());
        let adv = adversary_from_distinguisher(&inst).unwrap();
        let r = run_semantic_game(&s, &inst, &adv, 10_000, 11).unwrap();
        assert_eq!(r.empirical_success, 1.0);

        let q = builtin(&Builtin::Qotp, 1, Limits::default()).unwrap();
        let inst = instance(&q, zero(), one());
        let adv = adversary_from_distinguisher(&inst).unwrap();
        let r = run_semantic_game(&q, &inst, &adv, 100_000, 12).unwrap();
        assert!(r.within(0.5, 5.0), "{r:?}");

        let p = bit_flip_pad();
        let inst = instance(&p, PureState::plus(), PureState::minus());
        let adv = adversary_from_distinguisher(&inst).unwrap();
        let r = run_semantic_game(&p, &inst, &adv, 10_000, 13).unwrap();
        assert!(r.within(1.0, 5.0), "{r:?}");

        let no_hint = SemanticInstance::new(zero(), one(), Hint::None).unwrap();
        assert_eq!(
            adversary_from_distinguisher(&no_hint).unwrap_err().kind(),
            crate::ErrorKind::Usage
        );
    }

    #[test]
    fn adversary_tracks_distinguisher_advantage() {
        let s = scheme(Builtin::Identity);
        let (x, y) = (zero(), PureState::plus());
        let inst = instance(&s, x.clone(), y.clone());
        let adv = adversary_from_distinguisher(&inst).unwrap();
        let d = trace_distance(
            &cipher_state(&s, &x).unwrap(),
            &cipher_state(&s, &y).unwrap(),
        )
        .unwrap();
        assert!(
            (semantic_success_probability(&s, &inst, &adv).unwrap() - 0.5 * (1.0 + d)).abs()
                < 1e-12
        );
        let r = run_semantic_game(&s, &inst, &adv, 100_000, 14).unwrap();
        assert!(r.within(0.5 + d / 2.0, 5.0), "{r:?}");
    }

    #[test]
    fn baseline_and_constant_guessers() {
        let s = scheme(Builtin::Identity);
        let inst = instance(&s, zero(), one());
        let base = baseline_adversary(&inst);
        let r = run_semantic_game(&s, &inst, &base, 100_000, 15).unwrap();
        assert!(r.within(0.5, 5.0), "{r:?}");
        assert_eq!(semantic_success_probability(&s, &inst, &base).unwrap(), 0.5);
        for c in [0, 1] {
            let adv = Adversary::constant(c).unwrap();
            assert_eq!(semantic_success_probability(&s, &inst, &adv).unwrap(), 0.5);
        }
        assert!(Adversary::constant(2).is_err());
    }

    #[test]
    fn distinguisher_from_adversary_examples() {
        let s = scheme(Builtin::Identity);
        let inst = instance(&s, zero(), one());
        let perfect = adversary_from_distinguisher(&inst).unwrap();
        let d = distinguisher_from_adversary(&perfect, &inst).unwrap();
        let r = run_ind_game(&s, &zero(), &one(), &d, 10_000, 16).unwrap();
        assert_eq!(r.empirical_advantage, 1.0);

        let base = distinguisher_from_adversary(&baseline_adversary(&inst), &inst).unwrap();
        let r = run_ind_game(&s, &zero(), &one(), &base, 100_000, 17).unwrap();
        assert!(r.within(0.5, 5.0), "{r:?}");

        // Adversary with success ½ + δ gives a distinguisher with advantage 2δ.
        let (x, y) = (zero(), PureState::plus());
        let inst = instance(&s, x.clone(), y.clone());
        let adv = adversary_from_distinguisher(&inst).unwrap();
        let delta = semantic_success_probability(&s, &inst, &adv).unwrap() - 0.5;
        let d = distinguisher_from_adversary(&adv, &inst).unwrap();
        let analytic = ind_success_probability(&s, &x, &y, &d).unwrap();
        assert!((2.0 * analytic - 1.0 - 2.0 * delta).abs() < 1e-12);
        let r = run_ind_game(&s, &x, &y, &d, 100_000, 18).unwrap();
        assert!(r.within(0.5 + delta, 5.0), "{r:?}");

        let opaque = Adversary::opaque(|_, r| r.bit());
        assert_eq!(
            distinguisher_from_adversary(&opaque, &inst)
                .unwrap_err()
                .kind(),
            crate::ErrorKind::Usage
        );
    }

    #[test]
    fn opaque_adversary_runs_on_states() {
        let s = scheme(Builtin::Identity);
        let inst = SemanticInstance::new(zero(), one(), Hint::None).unwrap();
        // Reads the <0|ρ|0> entry directly: perfect on the computational basis.
        let adv = Adversary::opaque(|rho, _| u8::from(rho.matrix()[(0, 0)].re > 0.5));
        let r = run_semantic_game(&s, &inst, &adv, 1000, 19).unwrap();
        assert_eq!(r.wins, 1000);
        assert!(semantic_success_probability(&s, &inst, &adv).is_err());
    }

    #[test]
    fn public_key_games_use_the_key_register() {
        let s = bit_flip_pad().with_key_model(KeyModel::Public);
        let jx = crate::scheme::joint_cipher_state_public(&s, &zero()).unwrap();
        let jy = crate::scheme::joint_cipher_state_public(&s, &one()).unwrap();
        let d = Distinguisher::helstrom(&jx, &jy).unwrap();
        let r = run_ind_game(&s, &zero(), &one(), &d, 10_000, 20).unwrap();
        assert_eq!(r.empirical_success, 1.0);
        // A cipher-only measurement sees the key-averaged I/2 on both sides.
        let c = helstrom_for(&s, &zero(), &one());
        assert!((ind_success_probability(&s, &zero(), &one(), &c).unwrap() - 0.5).abs() < 1e-12);
        let opaque = Adversary::opaque(|rho, _| u8::from(rho.dim() == 4));
        let inst = SemanticInstance::new(zero(), one(), Hint::None).unwrap();
        let r = run_semantic_game(&s, &inst, &opaque, 1000, 21).unwrap();
        assert!(r.empirical_success > 0.0 && r.empirical_success < 1.0);
    }

    #[test]
    fn argument_errors() {
        let s = scheme(Builtin::Identity);
        let d = helstrom_for(&s, &zero(), &one());
        assert!(run_ind_game(&s, &zero(), &one(), &d, 0, 1).is_err());
        let two = PureState::basis("00").unwrap();
        assert!(matches!(
            run_ind_game(&s, &two, &two, &d, 10, 1),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(SemanticInstance::new(zero(), zero(), Hint::None).is_err());
        assert!(SemanticInstance::new(zero(), two, Hint::None).is_err());
        assert!(Distinguisher::from_bit_povm(Povm::computational(2).unwrap()).is_err());
        assert!(Adversary::measurement(Povm::computational(1).unwrap(), vec![0]).is_err());
    }
}
