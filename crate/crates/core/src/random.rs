//! Random test instances: matrices, states, unitaries, channels and POVMs.
//!
//! Used by the self-test suite, the benches and the test suites. Complex
//! Gaussian entries come from a Box-Muller transform of the stream's uniforms.

use rand::Rng;

use crate::linalg::{Complex, ComplexMatrix, ZERO};
use crate::rng::SeedStream;
use crate::state::{Channel, DensityOperator, Povm, PureState};

pub fn seeded(seed: u64) -> SeedStream {
    SeedStream::new(seed)
}

/// Standard complex Gaussian (independent N(0, 1/2) parts).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = (-u1.ln()).sqrt();
    Complex::from_polar(r, std::f64::consts::TAU * u2)
}

/// Entries uniform in the unit square `[-1, 1] × [-1, 1]`.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let data = (0..dim * dim)
        .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::from_raw(dim, data)
}

/// `M + M^dagger` for a random `M`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let m = random_matrix(rng, dim);
    m.add(&m.dagger()).expect("same dimension")
}

/// Haar-distributed unitary: Gram-Schmidt on Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex> = (0..dim).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let proj: Complex = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, a) in v.iter_mut().zip(u) {
                *x -= proj * a;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    let mut data = vec![ZERO; dim * dim];
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            data[i * dim + j] = z;
        }
    }
    ComplexMatrix::from_raw(dim, data)
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, qubits: usize) -> PureState {
    let dim = 1usize << qubits;
    let mut v: Vec<Complex> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    PureState::new(v).expect("normalized")
}

/// `G G^dagger / Tr(G G^dagger)` with `G` a `dim × rank` Gaussian matrix.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityOperator {
    let g: Vec<Complex> = (0..dim * rank).map(|_| gaussian(rng)).collect();
    let mut data = vec![ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            data[i * dim + j] = (0..rank)
                .map(|k| g[i * rank + k] * g[j * rank + k].conj())
                .sum();
        }
    }
    let m = ComplexMatrix::from_raw(dim, data);
    let tr = m.trace().re;
    DensityOperator::from_trusted(m.scale_real(1.0 / tr))
}

/// Kraus channel with `count` operators cut from a random isometry.
pub fn random_kraus_channel<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Channel {
    let big = dim * count;
    let u = random_unitary(rng, big);
    let ops = (0..count)
        .map(|k| {
            let data = (0..dim)
                .flat_map(|i| (0..dim).map(move |j| (i, j)))
                .map(|(i, j)| u[(k * dim + i, j)])
                .collect();
            ComplexMatrix::from_raw(dim, data)
        })
        .collect();
    Channel::kraus(ops).expect("isometry blocks are trace preserving")
}

/// `{E, I - E}` with `E = V diag(u) V^dagger`, `u` uniform in `[0, 1]`.
pub fn random_two_outcome_povm<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Povm {
    let v = random_unitary(rng, dim);
    let weights: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
    let d = ComplexMatrix::from_diagonal(&weights).expect("finite");
    let e = v
        .matmul(&d)
        .and_then(|m| m.matmul(&v.dagger()))
        .expect("same dimension");
    // Exact Hermitian symmetrization so validation sees no round-off skew.
    let e = e.add(&e.dagger()).expect("same dimension").scale_real(0.5);
    Povm::binary(e).expect("valid two-outcome POVM")
}
