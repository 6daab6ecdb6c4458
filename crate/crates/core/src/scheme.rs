//! Quantum encryption schemes as keyed channel ensembles.
//!
//! A [`Scheme`] holds keys `k` with probabilities `p_k`, an encryption channel
//! `E_k` and (optionally) a decryption channel `D_k`. The object the security
//! analysis works with is the cipher state `ρ_x = Σ_k p_k E_k(|x><x|)`; for
//! public-key schemes the adversary also holds the key, which is modelled by a
//! classical key register: `Σ_k p_k |k><k| ⊗ E_k(|x><x|)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{CompensatedSum, Complex, ComplexMatrix, DEFAULT_MAX_DIM};
use crate::rng::SeedStream;
use crate::state::{Channel, DensityOperator, PauliString, PureState};

/// Default cap on the number of keys (`qotp(6)` has exactly 4096).
pub const DEFAULT_MAX_KEYS: usize = 4096;
/// Tolerance on `Σ p_k = 1`.
pub const PROBABILITY_TOL: f64 = 1e-9;
/// Tolerance on `D_k(E_k(|x><x|)) = |x><x|`.
pub const CORRECTNESS_TOL: f64 = 1e-9;
/// Registers up to this many qubits are checked for correctness on every basis state.
const EXHAUSTIVE_CORRECTNESS_QUBITS: usize = 3;
const SAMPLED_CORRECTNESS_STATES: usize = 8;
const CORRECTNESS_SAMPLE_SEED: u64 = 0x00c0_ffee;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_dim: usize,
    pub max_keys: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
            max_keys: DEFAULT_MAX_KEYS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyModel {
    Private,
    Public,
}

impl KeyModel {
    pub fn as_str(self) -> &'static str {
        match self {
            KeyModel::Private => "private",
            KeyModel::Public => "public",
        }
    }
}

impl fmt::Display for KeyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Key {
    pub id: String,
    pub prob: f64,
    pub encrypt: Channel,
    pub decrypt: Option<Channel>,
}

impl Key {
    pub fn new(
        id: impl Into<String>,
        prob: f64,
        encrypt: Channel,
        decrypt: Option<Channel>,
    ) -> Self {
        Self {
            id: id.into(),
            prob,
            encrypt,
            decrypt,
        }
    }
}

/// Validated encryption scheme on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    name: String,
    qubits: usize,
    key_model: KeyModel,
    keys: Vec<Key>,
    limits: Limits,
    warnings: Vec<String>,
}

impl Scheme {
    pub fn new(
        name: impl Into<String>,
        qubits: usize,
        key_model: KeyModel,
        keys: Vec<Key>,
        limits: Limits,
    ) -> Result<Self> {
        let name = name.into();
        let dim = register_dim(qubits, limits)?;
        if keys.is_empty() {
            return Err(Error::InvalidScheme("scheme has no keys".into()));
        }
        if keys.len() > limits.max_keys {
            return Err(Error::Capacity {
                what: "key count",
                requested: keys.len(),
                cap: limits.max_keys,
            });
        }
        for (i, k) in keys.iter().enumerate() {
            if keys[..i].iter().any(|other| other.id == k.id) {
                return Err(Error::InvalidScheme(format!("duplicate key id {:?}", k.id)));
            }
            if !k.prob.is_finite() || k.prob < 0.0 {
                return Err(Error::InvalidScheme(format!(
                    "key {:?} has invalid probability {}",
                    k.id, k.prob
                )));
            }
            for (role, ch) in [
                ("encrypt", Some(&k.encrypt)),
                ("decrypt", k.decrypt.as_ref()),
            ] {
                if let Some(ch) = ch {
                    if ch.dim() != dim {
                        return Err(Error::InvalidScheme(format!(
                            "key {:?} {role} channel acts on {} qubits, scheme has {qubits}",
                            k.id,
                            ch.qubits()
                        )));
                    }
                }
            }
        }
        let total: f64 = keys.iter().map(|k| k.prob).sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::InvalidScheme(format!(
                "probabilities sum to {total}"
            )));
        }

        let mut warnings = Vec::new();
        let missing: Vec<&str> = keys
            .iter()
            .filter(|k| k.decrypt.is_none())
            .map(|k| k.id.as_str())
            .collect();
        if !missing.is_empty() {
            warnings.push(format!(
                "correctness check skipped for {} key(s) without a decrypt channel",
                missing.len()
            ));
        }
        let scheme = Self {
            name,
            qubits,
            key_model,
            keys,
            limits,
            warnings,
        };
        scheme.check_correctness()?;
        Ok(scheme)
    }

    pub fn with_key_model(mut self, key_model: KeyModel) -> Self {
        self.key_model = key_model;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn key_model(&self) -> KeyModel {
        self.key_model
    }

    pub fn keys(&self) -> &[Key] {
        &self.keys
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// Non-fatal notes from construction (e.g. skipped correctness checks).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Basis states used for the correctness check.
    fn correctness_indices(&self) -> Vec<usize> {
        let dim = self.dim();
        if self.qubits <= EXHAUSTIVE_CORRECTNESS_QUBITS {
            return (0..dim).collect();
        }
        let mut stream = SeedStream::new(CORRECTNESS_SAMPLE_SEED);
        let mut picked = Vec::with_capacity(SAMPLED_CORRECTNESS_STATES);
        while picked.len() < SAMPLED_CORRECTNESS_STATES {
            let idx = (stream.uniform() * dim as f64) as usize % dim;
            if !picked.contains(&idx) {
                picked.push(idx);
            }
        }
        picked
    }

    fn check_correctness(&self) -> Result<()> {
        let indices = self.correctness_indices();
        for key in &self.keys {
            let Some(decrypt) = &key.decrypt else {
                continue;
            };
            for &idx in &indices {
                let x = PureState::basis_index(self.qubits, idx)?;
                let mut recovered = Vec::new();
                for v in key.encrypt.apply_pure(x.amplitudes())? {
                    recovered.extend(decrypt.apply_pure(&v)?);
                }
                let mut acc = CompensatedSum::new(self.dim());
                for v in &recovered {
                    acc.add_weighted_outer(1.0, v);
                }
                let dev = acc
                    .finish()
                    .max_abs_diff(&ComplexMatrix::outer(x.amplitudes())?);
                if dev > CORRECTNESS_TOL {
                    return Err(Error::InvalidScheme(format!(
                        "key {:?} does not decrypt basis state {idx:0w$b} (deviation {dev:e})",
                        key.id,
                        w = self.qubits
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_plaintext(&self, x: &PureState) -> Result<()> {
        if x.qubits() == self.qubits {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim(),
                right: x.dim(),
            })
        }
    }

    /// Per-key output ensembles `{K_j |x>}` of the encryption channels, in key order.
    pub(crate) fn key_outputs(
        &self,
        x: &PureState,
        exec: Execution,
    ) -> Result<Vec<Vec<Vec<Complex>>>> {
        self.check_plaintext(x)?;
        exec.map(&self.keys, |k| k.encrypt.apply_pure(x.amplitudes()))
            .into_iter()
            .collect()
    }

    /// Number of qubits in the classical key register used in public-key mode.
    pub fn key_register_qubits(&self) -> usize {
        let n = self.keys.len();
        (usize::BITS - (n - 1).leading_zeros()).max(1) as usize
    }
}

fn register_dim(qubits: usize, limits: Limits) -> Result<usize> {
    if qubits == 0 {
        return Err(Error::InvalidScheme(
            "scheme must act on at least one qubit".into(),
        ));
    }
    match 1usize
        .checked_shl(qubits as u32)
        .filter(|&d| d <= limits.max_dim && qubits < 63)
    {
        Some(d) => Ok(d),
        None => Err(Error::Capacity {
            what: "register dimension",
            requested: 1usize.checked_shl(qubits as u32).unwrap_or(usize::MAX),
            cap: limits.max_dim,
        }),
    }
}

/// `ρ_x = Σ_k p_k E_k(|x><x|)`.
pub fn cipher_state(s: &Scheme, x: &PureState) -> Result<DensityOperator> {
    cipher_state_with(s, x, Execution::default())
}

/// [`cipher_state`] with an explicit evaluation strategy. The per-key images
/// may be computed concurrently; they are summed in key order with
/// compensated summation, so the result does not depend on the strategy.
pub fn cipher_state_with(s: &Scheme, x: &PureState, exec: Execution) -> Result<DensityOperator> {
    let outputs = s.key_outputs(x, exec)?;
    let mut acc = CompensatedSum::new(s.dim());
    for (key, branches) in s.keys.iter().zip(&outputs) {
        for v in branches {
            acc.add_weighted_outer(key.prob, v);
        }
    }
    DensityOperator::new(acc.finish())
        .map_err(|e| Error::Numeric(format!("cipher state is not a valid state: {e}")))
}

/// `Σ_k p_k |k><k| ⊗ E_k(|x><x|)`, with key `k` (in key order) stored as basis
/// state `k` of a register of `max(1, ⌈log₂ #keys⌉)` qubits.
pub fn joint_cipher_state_public(s: &Scheme, x: &PureState) -> Result<DensityOperator> {
    joint_cipher_state_public_with(s, x, Execution::default())
}

pub fn joint_cipher_state_public_with(
    s: &Scheme,
    x: &PureState,
    exec: Execution,
) -> Result<DensityOperator> {
    if s.key_model != KeyModel::Public {
        return Err(Error::Usage(format!(
            "scheme {:?} is private-key; the joint key/cipher state needs a public-key scheme",
            s.name
        )));
    }
    let d = s.dim();
    let key_dim = 1usize << s.key_register_qubits();
    let total = key_dim
        .checked_mul(d)
        .filter(|&t| t <= s.limits.max_dim)
        .ok_or(Error::Capacity {
            what: "joint key/cipher dimension",
            requested: key_dim.saturating_mul(d),
            cap: s.limits.max_dim,
        })?;
    let outputs = s.key_outputs(x, exec)?;
    let mut acc = CompensatedSum::new(total);
    for (k, (key, branches)) in s.keys.iter().zip(&outputs).enumerate() {
        let offset = k * d;
        for v in branches {
            for (i, vi) in v.iter().enumerate() {
                let wi = vi * key.prob;
                for (j, vj) in v.iter().enumerate() {
                    acc.add_entry((offset + i) * total + offset + j, wi * vj.conj());
                }
            }
        }
    }
    DensityOperator::new(acc.finish())
        .map_err(|e| Error::Numeric(format!("joint cipher state is not a valid state: {e}")))
}

/// Reference schemes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    /// Uniform over all `4^n` Pauli strings.
    Qotp,
    /// Uniform over the given Pauli strings.
    PauliSubset(Vec<PauliString>),
    /// A single identity key.
    Identity,
    /// Uniform over the `2^n` bit-flip strings: the classical one-time pad in the computational basis.
    ClassicalOtp,
}

impl Builtin {
    /// Parses `qotp`, `identity`, `classical_otp` or `pauli_subset` (with Pauli strings as params).
    pub fn from_name(name: &str, params: &[String]) -> Result<Self> {
        let no_params = |b: Builtin| {
            if params.is_empty() {
                Ok(b)
            } else {
                Err(Error::Usage(format!("builtin {name:?} takes no params")))
            }
        };
        match name {
            "qotp" => no_params(Builtin::Qotp),
            "identity" => no_params(Builtin::Identity),
            "classical_otp" => no_params(Builtin::ClassicalOtp),
            "pauli_subset" => Ok(Builtin::PauliSubset(
                params
                    .iter()
                    .map(|p| p.parse())
                    .collect::<Result<Vec<PauliString>>>()?,
            )),
            other => Err(Error::Usage(format!(
                "unknown builtin {other:?} (expected qotp, pauli_subset, identity or classical_otp)"
            ))),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Builtin::Qotp => "qotp",
            Builtin::PauliSubset(_) => "pauli_subset",
            Builtin::Identity => "identity",
            Builtin::ClassicalOtp => "classical_otp",
        }
    }

    pub fn params(&self) -> Vec<String> {
        match self {
            Builtin::PauliSubset(ps) => ps.iter().map(ToString::to_string).collect(),
            _ => Vec::new(),
        }
    }
}

/// Builds a reference scheme as a private-key scheme named after its construction.
pub fn builtin(kind: &Builtin, qubits: usize, limits: Limits) -> Result<Scheme> {
    register_dim(qubits, limits)?;
    let strings = match kind {
        Builtin::Qotp => {
            let count = 4usize.checked_pow(qubits as u32).unwrap_or(usize::MAX);
            if count > limits.max_keys {
                return Err(Error::Capacity {
                    what: "qotp key count",
                    requested: count,
                    cap: limits.max_keys,
                });
            }
            PauliString::all(qubits)?
        }
        Builtin::ClassicalOtp => {
            let count = 1usize << qubits;
            if count > limits.max_keys {
                return Err(Error::Capacity {
                    what: "classical_otp key count",
                    requested: count,
                    cap: limits.max_keys,
                });
            }
            (0..count)
                .map(|mask| {
                    (0..qubits)
                        .map(|pos| {
                            if mask >> (qubits - 1 - pos) & 1 == 1 {
                                'X'
                            } else {
                                'I'
                            }
                        })
                        .collect::<String>()
                        .parse()
                })
                .collect::<Result<Vec<PauliString>>>()?
        }
        Builtin::Identity => vec![PauliString::identity(qubits)?],
        Builtin::PauliSubset(ps) => {
            if ps.is_empty() {
                return Err(Error::Usage(
                    "pauli_subset needs at least one Pauli string".into(),
                ));
            }
            if let Some(bad) = ps.iter().find(|p| p.qubits() != qubits) {
                return Err(Error::Usage(format!(
                    "pauli_subset string {bad} has {} qubits, scheme has {qubits}",
                    bad.qubits()
                )));
            }
            ps.clone()
        }
    };
    let prob = 1.0 / strings.len() as f64;
    let keys = strings
        .into_iter()
        .map(|p| {
            let ch = Channel::pauli(p.clone());
            Key::new(p.to_string(), prob, ch.clone(), Some(ch))
        })
        .collect();
    let name = match kind {
        Builtin::PauliSubset(ps) => format!(
            "pauli_subset({})",
            ps.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        ),
        other => format!("{}({qubits})", other.kind_name()),
    };
    Scheme::new(name, qubits, KeyModel::Private, keys, limits)
}

/// Named plaintexts for an analysis run.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaintextSet {
    entries: Vec<(String, PureState)>,
}

impl PlaintextSet {
    pub fn new(entries: Vec<(String, PureState)>, qubits: usize) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Usage("plaintext set is empty".into()));
        }
        for (i, (name, state)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::Usage(format!("duplicate plaintext name {name:?}")));
            }
            if state.qubits() != qubits {
                return Err(Error::Usage(format!(
                    "plaintext {name:?} has {} qubits, scheme has {qubits}",
                    state.qubits()
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(String, PureState)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&PureState> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}
