//! Trace distance, the Helstrom measurement and the indistinguishability verdict.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::scheme::{
    cipher_state_with, joint_cipher_state_public_with, KeyModel, PlaintextSet, Scheme,
};
use crate::state::{measure_probabilities, DensityOperator, Povm};

/// Upper bound overshoot tolerated (then clamped) before a distance is treated as a numerical failure.
pub const DISTANCE_OVERSHOOT_TOL: f64 = 1e-9;
/// Eigenvalues of `ρ - σ` below this magnitude count as zero in the Helstrom projector.
pub const HELSTROM_ZERO_TOL: f64 = 1e-12;
pub const DEFAULT_THRESHOLD: f64 = 1e-6;

pub const RHO_LABEL: &str = "rho";
pub const SIGMA_LABEL: &str = "sigma";

fn check_dims(rho: &DensityOperator, sigma: &DensityOperator) -> Result<()> {
    if rho.dim() == sigma.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        })
    }
}

/// Total order on matrices by the bit patterns of their entries.
fn entry_order(a: &ComplexMatrix, b: &ComplexMatrix) -> Ordering {
    let bits = |m: &ComplexMatrix| {
        m.as_slice()
            .iter()
            .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
            .collect::<Vec<u64>>()
    };
    bits(a).cmp(&bits(b))
}

/// `½ Tr|ρ - σ|`, clamped to `[0, 1]`.
///
/// The difference is always formed in a fixed order of the two arguments, so
/// swapping them gives the same floating-point result.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_dims(rho, sigma)?;
    let (a, b) = match entry_order(rho.matrix(), sigma.matrix()) {
        Ordering::Equal => return Ok(0.0),
        Ordering::Less => (rho.matrix(), sigma.matrix()),
        Ordering::Greater => (sigma.matrix(), rho.matrix()),
    };
    let eig = hermitian_eig(&a.sub(b)?)?;
    let d = 0.5 * eig.eigenvalues().iter().map(|l| l.abs()).sum::<f64>();
    if d > 1.0 + DISTANCE_OVERSHOOT_TOL {
        return Err(Error::Numeric(format!("trace distance {d} exceeds 1")));
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Two-outcome measurement `{P₊, I - P₊}` labelled `"rho"` / `"sigma"`, where
/// `P₊` projects onto the strictly positive eigenspace of `ρ - σ`.
pub fn helstrom_povm(rho: &DensityOperator, sigma: &DensityOperator) -> Result<Povm> {
    check_dims(rho, sigma)?;
    let eig = hermitian_eig(&rho.matrix().sub(sigma.matrix())?)?;
    let positive = eig.projector(|l| l > HELSTROM_ZERO_TOL);
    let rest = ComplexMatrix::identity(rho.dim()).sub(&positive)?;
    Povm::new(
        vec![positive, rest],
        vec![RHO_LABEL.into(), SIGMA_LABEL.into()],
    )
}

/// Optimal single-shot success for equiprobable `ρ`, `σ`: `½(1 + D)`.
pub fn helstrom_success(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(0.5 * (1.0 + trace_distance(rho, sigma)?))
}

/// Success probability of guessing "ρ" on outcome `rho_label` (and "σ"
/// otherwise) for equiprobable `ρ`, `σ`, computed from Born probabilities.
pub fn guessing_success(
    povm: &Povm,
    rho_label: &str,
    rho: &DensityOperator,
    sigma: &DensityOperator,
) -> Result<f64> {
    check_dims(rho, sigma)?;
    if povm.index_of(rho_label).is_none() {
        return Err(Error::Usage(format!("POVM has no outcome {rho_label:?}")));
    }
    let p_rho = measure_probabilities(povm, rho)?
        .probability(rho_label)
        .unwrap_or(0.0);
    let p_sigma = measure_probabilities(povm, sigma)?
        .probability(rho_label)
        .unwrap_or(0.0);
    Ok(0.5 * (p_rho + 1.0 - p_sigma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Indistinguishable,
    Distinguishable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Indistinguishable => "indistinguishable",
            Verdict::Distinguishable => "distinguishable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairDistance {
    pub x: String,
    pub y: String,
    pub trace_distance: f64,
    pub helstrom_success: f64,
}

/// Distances over all plaintext pairs for one way of presenting the ciphertext.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    pub pairs: Vec<PairDistance>,
    pub max_distance: f64,
    worst: usize,
}

impl DistanceTable {
    pub fn worst_pair(&self) -> &PairDistance {
        &self.pairs[self.worst]
    }
}

/// Helstrom measurement for the worst pair: outcome `"rho"` guesses `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackWitness {
    pub x: String,
    pub y: String,
    pub povm: Povm,
    pub success: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdvantageReport {
    pub scheme: String,
    pub key_model: KeyModel,
    pub qubits: usize,
    pub threshold: f64,
    /// Distances the verdict is based on: key-averaged cipher states for
    /// private-key schemes, key-and-cipher states for public-key schemes.
    pub distances: DistanceTable,
    /// For public-key schemes, the same table on key-averaged cipher states.
    pub key_averaged: Option<DistanceTable>,
    pub verdict: Verdict,
    pub witness: Option<AttackWitness>,
    pub warnings: Vec<String>,
}

impl AdvantageReport {
    pub const TIER: &'static str = "information-theoretic";
    pub const NOT_EVALUATED: [&'static str; 2] = ["computational", "physical"];

    pub fn max_distance(&self) -> f64 {
        self.distances.max_distance
    }

    pub fn pairs(&self) -> &[PairDistance] {
        &self.distances.pairs
    }
}

fn distance_table(
    names: &[&str],
    states: &[DensityOperator],
    exec: Execution,
) -> Result<DistanceTable> {
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| names[a].cmp(names[b]));
    let mut index_pairs = Vec::new();
    for (i, &a) in order.iter().enumerate() {
        for &b in &order[i + 1..] {
            index_pairs.push((a, b));
        }
    }
    let pairs = exec
        .map(&index_pairs, |&(a, b)| {
            let d = trace_distance(&states[a], &states[b])?;
            Ok(PairDistance {
                x: names[a].to_string(),
                y: names[b].to_string(),
                trace_distance: d,
                helstrom_success: 0.5 * (1.0 + d),
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0;
    for (i, p) in pairs.iter().enumerate() {
        if p.trace_distance > pairs[worst].trace_distance {
            worst = i;
        }
    }
    Ok(DistanceTable {
        max_distance: pairs[worst].trace_distance,
        pairs,
        worst,
    })
}

pub fn indistinguishability_check(
    s: &Scheme,
    plaintexts: &PlaintextSet,
    threshold: f64,
) -> Result<AdvantageReport> {
    indistinguishability_check_with(s, plaintexts, threshold, Execution::default())
}

/// Pairwise distances between cipher states for all plaintexts, the verdict
/// `max_distance < threshold`, and a Helstrom attack on the worst pair when
/// the verdict is "distinguishable".
pub fn indistinguishability_check_with(
    s: &Scheme,
    plaintexts: &PlaintextSet,
    threshold: f64,
    exec: Execution,
) -> Result<AdvantageReport> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::Usage(format!(
            "threshold {threshold} is not in (0, 1]"
        )));
    }
    if plaintexts.len() < 2 {
        return Err(Error::Usage(
            "need at least two plaintexts to compare".into(),
        ));
    }
    let names: Vec<&str> = plaintexts
        .entries()
        .iter()
        .map(|(n, _)| n.as_str())
        .collect();
    let averaged = exec
        .map(plaintexts.entries(), |(_, x)| {
            cipher_state_with(s, x, Execution::Sequential)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let (states, key_averaged) = match s.key_model() {
        KeyModel::Private => (averaged, None),
        KeyModel::Public => {
            let joint = exec
                .map(plaintexts.entries(), |(_, x)| {
                    joint_cipher_state_public_with(s, x, Execution::Sequential)
                })
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            (joint, Some(distance_table(&names, &averaged, exec)?))
        }
    };
    let distances = distance_table(&names, &states, exec)?;
    let verdict = if distances.max_distance < threshold {
        Verdict::Indistinguishable
    } else {
        Verdict::Distinguishable
    };
    let witness = match verdict {
        Verdict::Indistinguishable => None,
        Verdict::Distinguishable => {
            let worst = distances.worst_pair();
            let pos = |name: &str| names.iter().position(|n| *n == name).expect("known name");
            let (rho, sigma) = (&states[pos(&worst.x)], &states[pos(&worst.y)]);
            let povm = helstrom_povm(rho, sigma)?;
            let success = guessing_success(&povm, RHO_LABEL, rho, sigma)?;
            Some(AttackWitness {
                x: worst.x.clone(),
                y: worst.y.clone(),
                povm,
                success,
            })
        }
    };
    Ok(AdvantageReport {
        scheme: s.name().to_string(),
        key_model: s.key_model(),
        qubits: s.qubits(),
        threshold,
        distances,
        key_averaged,
        verdict,
        witness,
        warnings: s.warnings().to_vec(),
    })
}
