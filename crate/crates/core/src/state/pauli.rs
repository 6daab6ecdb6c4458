use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{Complex, ComplexMatrix, DEFAULT_MAX_DIM, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis. The leftmost symbol acts on the most
/// significant qubit of the computational-basis index.
///
/// Application is a signed permutation of amplitudes, so this never needs a
/// dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    symbols: Vec<Pauli>,
    flip_mask: usize,
    phase_mask: usize,
    y_count: u32,
}

impl PauliString {
    pub fn new(symbols: Vec<Pauli>) -> Result<Self> {
        let n = symbols.len();
        if n == 0 {
            return Err(Error::Usage("Pauli string must be nonempty".into()));
        }
        if n >= usize::BITS as usize {
            return Err(Error::Capacity {
                what: "Pauli string length",
                requested: n,
                cap: usize::BITS as usize - 1,
            });
        }
        let (mut flip_mask, mut phase_mask, mut y_count) = (0usize, 0usize, 0u32);
        for (pos, p) in symbols.iter().enumerate() {
            let bit = 1usize << (n - 1 - pos);
            match p {
                Pauli::I => {}
                Pauli::X => flip_mask |= bit,
                Pauli::Z => phase_mask |= bit,
                Pauli::Y => {
                    flip_mask |= bit;
                    phase_mask |= bit;
                    y_count += 1;
                }
            }
        }
        Ok(Self {
            symbols,
            flip_mask,
            phase_mask,
            y_count,
        })
    }

    pub fn identity(qubits: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; qubits])
    }

    /// All `4^n` strings in lexicographic `I < X < Y < Z` order.
    pub fn all(qubits: usize) -> Result<Vec<Self>> {
        let mut out = vec![Vec::new()];
        for _ in 0..qubits {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Pauli>| {
                    Pauli::ALL.iter().map(move |&p| {
                        let mut next = prefix.clone();
                        next.push(p);
                        next
                    })
                })
                .collect();
        }
        out.into_iter().map(Self::new).collect()
    }

    pub fn qubits(&self) -> usize {
        self.symbols.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.symbols.len()
    }

    pub fn symbols(&self) -> &[Pauli] {
        &self.symbols
    }

    /// `P|j> = phase(j) |j ^ flip_mask>`.
    #[inline]
    fn phase(&self, j: usize) -> Complex {
        let sign = if (j & self.phase_mask).count_ones() & 1 == 0 {
            1.0
        } else {
            -1.0
        };
        match self.y_count % 4 {
            0 => Complex::new(sign, 0.0),
            1 => Complex::new(0.0, sign),
            2 => Complex::new(-sign, 0.0),
            _ => Complex::new(0.0, -sign),
        }
    }

    pub fn apply(&self, amplitudes: &[Complex]) -> Result<Vec<Complex>> {
        if amplitudes.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: amplitudes.len(),
            });
        }
        let mut out = vec![ZERO; amplitudes.len()];
        for (j, &a) in amplitudes.iter().enumerate() {
            out[j ^ self.flip_mask] = self.phase(j) * a;
        }
        Ok(out)
    }

    /// `P ρ P^dagger`.
    pub fn conjugate(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.dim();
        if rho.dim() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: rho.dim(),
            });
        }
        let mut out = vec![ZERO; d * d];
        for a in 0..d {
            let pa = self.phase(a);
            for b in 0..d {
                let pb = self.phase(b).conj();
                out[(a ^ self.flip_mask) * d + (b ^ self.flip_mask)] = pa * rho[(a, b)] * pb;
            }
        }
        Ok(ComplexMatrix::from_raw(d, out))
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut out = vec![ZERO; d * d];
        for j in 0..d {
            out[(j ^ self.flip_mask) * d + j] = self.phase(j);
        }
        ComplexMatrix::from_raw(d, out)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let symbols = text
            .chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Usage(format!(
                    "invalid Pauli symbol {other:?} at position {i} (expected I, X, Y or Z)"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols
            .iter()
            .try_for_each(|p| write!(f, "{}", p.symbol()))
    }
}

/// Dense matrix of a Pauli string such as `"XZI"`.
pub fn pauli_string(text: &str) -> Result<ComplexMatrix> {
    let p: PauliString = text.parse()?;
    if p.dim() > DEFAULT_MAX_DIM {
        return Err(Error::Capacity {
            what: "Pauli string dimension",
            requested: p.dim(),
            cap: DEFAULT_MAX_DIM,
        });
    }
    Ok(p.to_matrix())
}
