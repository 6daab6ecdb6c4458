use rand::{Rng, RngCore};

use super::DensityOperator;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, Complex, ComplexMatrix, HERMITIAN_TOL};

/// Tolerance on effect positivity and on `Σ E_m = I`.
pub const POVM_TOL: f64 = 1e-9;

/// Finite set of positive effects summing to the identity, each with a label.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        let dim = effects
            .first()
            .map(ComplexMatrix::dim)
            .ok_or_else(|| Error::InvalidPovm("no effects".into()))?;
        if labels.len() != effects.len() {
            return Err(Error::InvalidPovm(format!(
                "{} labels for {} effects",
                labels.len(),
                effects.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidPovm(format!("duplicate label {l:?}")));
            }
        }
        let mut total = ComplexMatrix::zeros(dim);
        for (e, label) in effects.iter().zip(&labels) {
            if e.dim() != dim {
                return Err(Error::InvalidPovm(format!(
                    "effect {label:?} has dimension {}, expected {dim}",
                    e.dim()
                )));
            }
            let dev = e.hermitian_deviation();
            if dev > HERMITIAN_TOL {
                return Err(Error::InvalidPovm(format!(
                    "effect {label:?} is not Hermitian (deviation {dev:e})"
                )));
            }
            let min = hermitian_eig(e)?
                .eigenvalues()
                .last()
                .copied()
                .unwrap_or(0.0);
            if min < -POVM_TOL {
                return Err(Error::InvalidPovm(format!(
                    "effect {label:?} is not positive (minimum eigenvalue {min:e})"
                )));
            }
            total = total.add(e)?;
        }
        let dev = total.max_abs_diff(&ComplexMatrix::identity(dim));
        if dev > POVM_TOL {
            return Err(Error::InvalidPovm(format!(
                "effects do not sum to the identity (max deviation {dev:e})"
            )));
        }
        Ok(Self { effects, labels })
    }

    /// `{E, I - E}` with labels `"0"` and `"1"`.
    pub fn binary(first: ComplexMatrix) -> Result<Self> {
        let second = ComplexMatrix::identity(first.dim()).sub(&first)?;
        Self::new(vec![first, second], vec!["0".into(), "1".into()])
    }

    /// Projective measurement in the computational basis, labelled by bitstrings.
    pub fn computational(qubits: usize) -> Result<Self> {
        let dim = 1usize << qubits;
        let effects = (0..dim)
            .map(|k| {
                let mut diag = vec![0.0; dim];
                diag[k] = 1.0;
                ComplexMatrix::from_diagonal(&diag)
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = (0..dim).map(|k| format!("{k:0qubits$b}")).collect();
        Self::new(effects, labels)
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// `Tr(ρ E)` without forming the product.
pub(crate) fn trace_product(rho: &ComplexMatrix, e: &ComplexMatrix) -> Complex {
    let n = rho.dim();
    let mut acc = Complex::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += rho[(i, j)] * e[(j, i)];
        }
    }
    acc
}

/// Probabilities over labelled outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    labels: Vec<String>,
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    /// Checks each probability lies in `[-1e-9, 1 + 1e-9]` and the total is 1
    /// within `1e-9`, then clamps to `[0, 1]`.
    pub fn new(labels: Vec<String>, probabilities: Vec<f64>) -> Result<Self> {
        if labels.len() != probabilities.len() || labels.is_empty() {
            return Err(Error::Usage(format!(
                "{} labels for {} probabilities",
                labels.len(),
                probabilities.len()
            )));
        }
        if let Some((l, p)) = labels
            .iter()
            .zip(&probabilities)
            .find(|(_, &p)| !(-POVM_TOL..=1.0 + POVM_TOL).contains(&p))
        {
            return Err(Error::Numeric(format!(
                "probability of outcome {l:?} is {p}, outside [0, 1]"
            )));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > POVM_TOL {
            return Err(Error::Numeric(format!("probabilities sum to {total}")));
        }
        let probabilities = probabilities
            .into_iter()
            .map(|p| p.clamp(0.0, 1.0))
            .collect();
        Ok(Self {
            labels,
            probabilities,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, label: &str) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.probabilities[i])
    }

    /// Index of an outcome drawn with the stored probabilities; uses one uniform draw.
    pub fn sample_index<R: RngCore + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.index_for(u)
    }

    /// Inverse-CDF lookup for a uniform `u` in `[0, 1)`.
    pub(crate) fn index_for(&self, u: f64) -> usize {
        let mut cumulative = 0.0;
        for (i, &p) in self.probabilities.iter().enumerate() {
            cumulative += p;
            if u < cumulative {
                return i;
            }
        }
        // Round-off left u above the total: take the last outcome with mass.
        self.probabilities
            .iter()
            .rposition(|&p| p > 0.0)
            .unwrap_or(self.probabilities.len() - 1)
    }
}

/// `p_m = Tr(ρ E_m)` for every effect.
pub fn measure_probabilities(povm: &Povm, rho: &DensityOperator) -> Result<OutcomeDistribution> {
    if povm.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: povm.dim(),
            right: rho.dim(),
        });
    }
    let probs = povm
        .effects()
        .iter()
        .map(|e| trace_product(rho.matrix(), e).re)
        .collect();
    OutcomeDistribution::new(povm.labels().to_vec(), probs)
}

/// Draws an outcome label from `dist` using the next value of `rng`.
pub fn sample_outcome<'a, R: RngCore + ?Sized>(
    dist: &'a OutcomeDistribution,
    rng: &mut R,
) -> &'a str {
    &dist.labels[dist.sample_index(rng)]
}
