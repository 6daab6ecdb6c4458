//! Dense complex square matrices and the handful of operations the analysis
//! needs: products, adjoints, Kronecker products, traces, and a Hermitian
//! eigensolver.
//!
//! Storage is row-major. Every constructor rejects non-finite entries, so a
//! `ComplexMatrix` in hand is always finite.

mod eigen;

use std::fmt;
use std::ops::Index;

pub use eigen::{hermitian_eig, EigenDecomposition, HERMITIAN_TOL};

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Largest matrix dimension accepted by capacity-checked operations (10 qubits).
pub const DEFAULT_MAX_DIM: usize = 1024;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);

/// Builds a complex scalar, rejecting NaN and infinities.
pub fn complex(re: f64, im: f64) -> Result<Complex> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex::new(re, im))
    } else {
        Err(Error::NonFinite("complex scalar"))
    }
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    /// Wraps `data` (row-major, `dim * dim` entries).
    pub fn new(dim: usize, data: Vec<Complex>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Usage("matrix dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::Usage(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let dim = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(Error::Usage(format!(
                "row {i} has {} entries, expected {dim} (matrices must be square)",
                row.len()
            )));
        }
        Self::new(dim, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// `|v><v|` for an (unnormalized) column vector `v`.
    pub fn outer(v: &[Complex]) -> Result<Self> {
        let dim = v.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in v {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self::new(dim, data)
    }

    /// Diagonal matrix with real entries.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let dim = diag.len();
        let mut data = vec![ZERO; dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            data[i * dim + i] = Complex::new(d, 0.0);
        }
        Self::new(dim, data)
    }

    pub(crate) fn from_raw(dim: usize, data: Vec<Complex>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex> {
        (0..self.dim).map(|i| self.data[i * self.dim + j]).collect()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == ZERO {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += aik * b;
                }
            }
        }
        Ok(Self::from_raw(n, out))
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self::from_raw(n, out)
    }

    /// Kronecker product `self ⊗ other`, refusing results wider than `max_dim`.
    pub fn kron(&self, other: &Self, max_dim: usize) -> Result<Self> {
        let (n, m) = (self.dim, other.dim);
        let dim = n
            .checked_mul(m)
            .filter(|&d| d <= max_dim)
            .ok_or(Error::Capacity {
                what: "tensor product dimension",
                requested: n.saturating_mul(m),
                cap: max_dim,
            })?;
        let mut out = vec![ZERO; dim * dim];
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    let row = (i * m + k) * dim + j * m;
                    for (o, b) in out[row..row + m].iter_mut().zip(other.row(k)) {
                        *o = a * b;
                    }
                }
            }
        }
        Ok(Self::from_raw(dim, out))
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self::from_raw(self.dim, self.data.iter().map(|z| z * factor).collect())
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        Self::from_raw(self.dim, self.data.iter().map(|z| z * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::from_raw(self.dim, data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self::from_raw(self.dim, data))
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[Complex]) -> Result<Vec<Complex>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: x.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Real part of `<v|A|v>`.
    pub fn expectation(&self, v: &[Complex]) -> Result<f64> {
        let av = self.apply(v)?;
        Ok(v.iter().zip(&av).map(|(a, b)| (a.conj() * b).re).sum())
    }

    /// Largest entrywise modulus of `self - other`; infinite when dimensions differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A - A^dagger|` entrywise.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        dev
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Whether `U^dagger U = I` entrywise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.dagger()
            .matmul(self)
            .map(|p| p.max_abs_diff(&Self::identity(self.dim)) <= tol)
            .unwrap_or(false)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

/// Kronecker product under the default dimension cap.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.kron(b, DEFAULT_MAX_DIM)
}

pub fn trace(a: &ComplexMatrix) -> Complex {
    a.trace()
}

/// Schatten 1-norm of a Hermitian matrix: the sum of absolute eigenvalues.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eig(a)?;
    Ok(eig.eigenvalues().iter().map(|l| l.abs()).sum())
}

/// Running per-entry Neumaier summation of equally sized matrices.
pub(crate) struct CompensatedSum {
    dim: usize,
    sum: Vec<Complex>,
    carry: Vec<Complex>,
}

impl CompensatedSum {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            dim,
            sum: vec![ZERO; dim * dim],
            carry: vec![ZERO; dim * dim],
        }
    }

    pub(crate) fn add_entry(&mut self, idx: usize, z: Complex) {
        let (re, cre) = neumaier(self.sum[idx].re, self.carry[idx].re, z.re);
        let (im, cim) = neumaier(self.sum[idx].im, self.carry[idx].im, z.im);
        self.sum[idx] = Complex::new(re, im);
        self.carry[idx] = Complex::new(cre, cim);
    }

    /// Adds `weight * v v^dagger`.
    pub(crate) fn add_weighted_outer(&mut self, weight: f64, v: &[Complex]) {
        let n = self.dim;
        for (i, vi) in v.iter().enumerate() {
            let wi = vi * weight;
            if wi == ZERO {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                self.add_entry(i * n + j, wi * vj.conj());
            }
        }
    }

    pub(crate) fn finish(self) -> ComplexMatrix {
        let data = self
            .sum
            .into_iter()
            .zip(self.carry)
            .map(|(s, c)| s + c)
            .collect();
        ComplexMatrix::from_raw(self.dim, data)
    }
}

#[inline]
fn neumaier(sum: f64, carry: f64, x: f64) -> (f64, f64) {
    let t = sum + x;
    let c = if sum.abs() >= x.abs() {
        (sum - t) + x
    } else {
        (x - t) + sum
    };
    (t, carry + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_matrix, seeded};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![ZERO, c(0.0, -1.0)], vec![c(0.0, 1.0), ZERO]]).unwrap()
    }

    /// Plain triple loop, kept separate from the optimized product.
    fn schoolbook(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        let n = a.dim();
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += a[(i, k)] * b[(k, j)];
                }
                data[i * n + j] = acc;
            }
        }
        ComplexMatrix::new(n, data).unwrap()
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(ComplexMatrix::new(0, vec![]).is_err());
        assert!(ComplexMatrix::new(2, vec![ZERO; 3]).is_err());
        assert_eq!(
            ComplexMatrix::new(1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite("matrix entries"))
        );
        assert!(complex(f64::INFINITY, 0.0).is_err());
        assert!(ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ONE]]).is_err());
    }

    #[test]
    fn matmul_identity_and_involution() {
        let mut rng = seeded(1);
        let a = random_matrix(&mut rng, 3);
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(matmul(&i3, &a).unwrap(), a);
        assert_eq!(
            matmul(&pauli_x(), &pauli_x()).unwrap(),
            ComplexMatrix::identity(2)
        );
        assert_eq!(
            matmul(&i3, &pauli_x()).unwrap_err(),
            Error::DimensionMismatch { left: 3, right: 2 }
        );
    }

    #[test]
    fn matmul_matches_schoolbook() {
        let mut rng = seeded(2);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 4);
            let b = random_matrix(&mut rng, 4);
            assert!(matmul(&a, &b).unwrap().max_abs_diff(&schoolbook(&a, &b)) <= 1e-12);
        }
    }

    #[test]
    fn dagger_cases() {
        assert_eq!(
            dagger(&ComplexMatrix::identity(2)),
            ComplexMatrix::identity(2)
        );
        assert_eq!(dagger(&pauli_y()), pauli_y());
        let a = random_matrix(&mut seeded(3), 5);
        assert_eq!(dagger(&dagger(&a)), a);
    }

    #[test]
    fn tensor_cases() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, -1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(tensor(&pauli_x(), &pauli_z()).unwrap(), expected);

        let mut rng = seeded(4);
        let a = random_matrix(&mut rng, 3);
        let b = random_matrix(&mut rng, 4);
        let lhs = trace(&tensor(&a, &b).unwrap());
        assert!((lhs - trace(&a) * trace(&b)).norm() <= 1e-12);
    }

    #[test]
    fn tensor_respects_cap() {
        let a = ComplexMatrix::identity(64);
        let err = tensor(&a, &ComplexMatrix::identity(32)).unwrap_err();
        assert_eq!(
            err,
            Error::Capacity {
                what: "tensor product dimension",
                requested: 2048,
                cap: 1024
            }
        );
        assert_eq!(err.kind(), crate::ErrorKind::Capacity);
        assert!(a.kron(&ComplexMatrix::identity(16), 1024).is_ok());
    }

    #[test]
    fn tensor_is_associative() {
        let mut rng = seeded(5);
        let (a, b, cm) = (
            random_matrix(&mut rng, 2),
            random_matrix(&mut rng, 3),
            random_matrix(&mut rng, 2),
        );
        let left = tensor(&tensor(&a, &b).unwrap(), &cm).unwrap();
        let right = tensor(&a, &tensor(&b, &cm).unwrap()).unwrap();
        assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn trace_cases() {
        assert_eq!(trace(&ComplexMatrix::identity(4)), c(4.0, 0.0));
        assert_eq!(trace(&pauli_x()), ZERO);
        let mut rng = seeded(6);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 5);
            let b = random_matrix(&mut rng, 5);
            let ab = trace(&a.matmul(&b).unwrap());
            let ba = trace(&b.matmul(&a).unwrap());
            assert!((ab - ba).norm() <= 1e-12);
        }
    }

    #[test]
    fn trace_norm_cases() {
        assert_eq!(trace_norm(&ComplexMatrix::zeros(3)).unwrap(), 0.0);
        assert!((trace_norm(&pauli_z()).unwrap() - 2.0).abs() <= 1e-12);
        let ket0 = ComplexMatrix::outer(&[ONE, ZERO]).unwrap();
        let half_id = ComplexMatrix::identity(2).scale_real(0.5);
        let diff = ket0.sub(&half_id).unwrap();
        assert!((trace_norm(&diff).unwrap() - 1.0).abs() <= 1e-12);
        assert!(matches!(
            trace_norm(&random_matrix(&mut seeded(7), 3)),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::new(1);
        acc.add_entry(0, c(1.0, 0.0));
        for _ in 0..10 {
            acc.add_entry(0, c(1e-17, 0.0));
        }
        acc.add_entry(0, c(-1.0, 0.0));
        let total = acc.finish()[(0, 0)].re;
        assert!((total - 1e-16).abs() < 1e-30);
    }
}
