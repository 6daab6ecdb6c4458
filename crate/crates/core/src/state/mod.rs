//! Validated quantum states, channels and measurements on qubit registers.

mod channel;
mod pauli;
mod povm;

pub use channel::{apply_channel, Channel, ChannelKind, KRAUS_TOL, UNITARY_TOL};
pub use pauli::{pauli_string, Pauli, PauliString};
pub use povm::{measure_probabilities, sample_outcome, OutcomeDistribution, Povm, POVM_TOL};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, Complex, ComplexMatrix, HERMITIAN_TOL, ONE, ZERO};

/// Allowed deviation of a state vector's squared norm from 1.
pub const NORM_TOL: f64 = 1e-10;
/// Allowed deviation of a density operator's trace from 1.
pub const TRACE_TOL: f64 = 1e-9;
/// Most negative eigenvalue a density operator may have.
pub const PSD_TOL: f64 = 1e-9;

pub(crate) fn qubits_for_dim(dim: usize) -> Option<usize> {
    (dim >= 2 && dim.is_power_of_two()).then(|| dim.trailing_zeros() as usize)
}

/// Normalized state vector on `n >= 1` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    qubits: usize,
    amplitudes: Vec<Complex>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        let qubits = qubits_for_dim(amplitudes.len()).ok_or_else(|| {
            Error::InvalidState(format!(
                "state vector length {} is not a power of two >= 2",
                amplitudes.len()
            ))
        })?;
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "squared norm is {norm_sqr}, expected 1"
            )));
        }
        Ok(Self { qubits, amplitudes })
    }

    /// Computational-basis state from a bitstring such as `"01"`.
    pub fn basis(bits: &str) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidState("empty basis bitstring".into()));
        }
        let mut index = 0usize;
        for (i, ch) in bits.chars().enumerate() {
            index = (index << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    other => {
                        return Err(Error::InvalidState(format!(
                            "invalid bit {other:?} at position {i}"
                        )))
                    }
                };
        }
        Self::basis_index(bits.len(), index)
    }

    pub fn basis_index(qubits: usize, index: usize) -> Result<Self> {
        if qubits == 0 || qubits >= usize::BITS as usize || index >= 1 << qubits {
            return Err(Error::InvalidState(format!(
                "basis index {index} out of range for {qubits} qubits"
            )));
        }
        let mut amplitudes = vec![ZERO; 1 << qubits];
        amplitudes[index] = ONE;
        Ok(Self { qubits, amplitudes })
    }

    /// `|+>` (sign `+1`) or `|->` (sign `-1`) on one qubit.
    fn hadamard_basis(sign: f64) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            qubits: 1,
            amplitudes: vec![Complex::new(h, 0.0), Complex::new(sign * h, 0.0)],
        }
    }

    pub fn plus() -> Self {
        Self::hadamard_basis(1.0)
    }

    pub fn minus() -> Self {
        Self::hadamard_basis(-1.0)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn overlap(&self, other: &Self) -> Complex {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Hermitian, positive semidefinite, unit-trace operator on `n >= 1` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates `matrix` against the density-operator invariants.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let qubits = qubits_for_dim(matrix.dim()).ok_or_else(|| {
            Error::InvalidState(format!(
                "dimension {} is not a power of two >= 2",
                matrix.dim()
            ))
        })?;
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (max deviation {deviation:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = hermitian_eig(&matrix)?
            .eigenvalues()
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (minimum eigenvalue {min:e})"
            )));
        }
        Ok(Self { qubits, matrix })
    }

    /// For outputs that are valid by construction (pure-state outer products).
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        let qubits = qubits_for_dim(matrix.dim()).expect("power-of-two dimension");
        Self { qubits, matrix }
    }

    pub fn maximally_mixed(qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > 20 {
            return Err(Error::InvalidState(format!(
                "unsupported qubit count {qubits}"
            )));
        }
        let d = 1usize << qubits;
        Ok(Self {
            qubits,
            matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `self ⊗ other`, capped at `max_dim`.
    pub fn tensor(&self, other: &Self, max_dim: usize) -> Result<Self> {
        let matrix = self.matrix.kron(&other.matrix, max_dim)?;
        Ok(Self {
            qubits: self.qubits + other.qubits,
            matrix,
        })
    }
}

pub fn pure_to_density(s: &PureState) -> DensityOperator {
    let matrix = ComplexMatrix::outer(s.amplitudes()).expect("finite amplitudes");
    DensityOperator::from_trusted(matrix)
}

impl From<&PureState> for DensityOperator {
    fn from(s: &PureState) -> Self {
        pure_to_density(s)
    }
}
