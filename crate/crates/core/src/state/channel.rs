use super::{qubits_for_dim, DensityOperator, PauliString};
use crate::error::{Error, Result};
use crate::linalg::{Complex, ComplexMatrix};

/// `U^dagger U = I` tolerance for unitary channels.
pub const UNITARY_TOL: f64 = 1e-10;
/// `Σ K^dagger K = I` tolerance for Kraus channels.
pub const KRAUS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Unitary,
    Kraus,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Unitary(ComplexMatrix),
    /// Unitary stored as a Pauli string; applied without a dense matrix.
    Pauli(PauliString),
    Kraus(Vec<ComplexMatrix>),
}

/// A completely positive trace-preserving map on a qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    dim: usize,
    repr: Repr,
}

fn register_qubits(dim: usize) -> Result<usize> {
    qubits_for_dim(dim)
        .ok_or_else(|| Error::InvalidChannel(format!("dimension {dim} is not a power of two >= 2")))
}

impl Channel {
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        register_qubits(u.dim())?;
        let gram = u.dagger().matmul(&u)?;
        let dev = gram.max_abs_diff(&ComplexMatrix::identity(u.dim()));
        if dev > UNITARY_TOL {
            return Err(Error::InvalidChannel(format!(
                "matrix is not unitary (max |U^dagger U - I| = {dev:e})"
            )));
        }
        Ok(Self {
            dim: u.dim(),
            repr: Repr::Unitary(u),
        })
    }

    pub fn pauli(p: PauliString) -> Self {
        Self {
            dim: p.dim(),
            repr: Repr::Pauli(p),
        }
    }

    pub fn identity(qubits: usize) -> Result<Self> {
        Ok(Self::pauli(PauliString::identity(qubits)?))
    }

    pub fn kraus(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidChannel("Kraus set is empty".into()))?;
        let dim = first.dim();
        register_qubits(dim)?;
        if let Some((i, k)) = ops.iter().enumerate().find(|(_, k)| k.dim() != dim) {
            return Err(Error::InvalidChannel(format!(
                "Kraus operator {i} has dimension {}, expected {dim}",
                k.dim()
            )));
        }
        let mut total = ComplexMatrix::zeros(dim);
        for k in &ops {
            total = total.add(&k.dagger().matmul(k)?)?;
        }
        let dev = total.max_abs_diff(&ComplexMatrix::identity(dim));
        if dev > KRAUS_TOL {
            return Err(Error::InvalidChannel(format!(
                "Kraus operators are not trace preserving (max |Σ K^dagger K - I| = {dev:e})"
            )));
        }
        Ok(Self {
            dim,
            repr: Repr::Kraus(ops),
        })
    }

    pub fn kind(&self) -> ChannelKind {
        match self.repr {
            Repr::Unitary(_) | Repr::Pauli(_) => ChannelKind::Unitary,
            Repr::Kraus(_) => ChannelKind::Kraus,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn as_pauli(&self) -> Option<&PauliString> {
        match &self.repr {
            Repr::Pauli(p) => Some(p),
            _ => None,
        }
    }

    /// Dense unitary, for unitary-kind channels.
    pub fn unitary_matrix(&self) -> Option<ComplexMatrix> {
        match &self.repr {
            Repr::Unitary(u) => Some(u.clone()),
            Repr::Pauli(p) => Some(p.to_matrix()),
            Repr::Kraus(_) => None,
        }
    }

    pub fn kraus_operators(&self) -> Vec<ComplexMatrix> {
        match &self.repr {
            Repr::Kraus(ops) => ops.clone(),
            _ => vec![self.unitary_matrix().expect("unitary kind")],
        }
    }

    /// The map applied to an arbitrary matrix, without validating the result.
    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(rho.dim())?;
        match &self.repr {
            Repr::Pauli(p) => p.conjugate(rho),
            Repr::Unitary(u) => u.matmul(rho)?.matmul(&u.dagger()),
            Repr::Kraus(ops) => {
                let mut out = ComplexMatrix::zeros(self.dim);
                for k in ops {
                    out = out.add(&k.matmul(rho)?.matmul(&k.dagger())?)?;
                }
                Ok(out)
            }
        }
    }

    /// Image of a pure input as an ensemble of unnormalized vectors `K_j |ψ>`;
    /// the output state is `Σ_j v_j v_j^dagger`.
    pub fn apply_pure(&self, psi: &[Complex]) -> Result<Vec<Vec<Complex>>> {
        self.check_dim(psi.len())?;
        match &self.repr {
            Repr::Pauli(p) => Ok(vec![p.apply(psi)?]),
            Repr::Unitary(u) => Ok(vec![u.apply(psi)?]),
            Repr::Kraus(ops) => ops.iter().map(|k| k.apply(psi)).collect(),
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: dim,
            })
        }
    }
}

/// `UρU^dagger` or `Σ KρK^dagger`, re-validated as a density operator.
pub fn apply_channel(ch: &Channel, rho: &DensityOperator) -> Result<DensityOperator> {
    let out = ch.apply_matrix(rho.matrix())?;
    DensityOperator::new(out)
        .map_err(|e| Error::Numeric(format!("channel output is not a valid state: {e}")))
}
