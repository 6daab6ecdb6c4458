use super::{Complex, ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Inputs further than this from Hermitian (entrywise) are rejected.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;
/// Convergence: off-diagonal Frobenius mass relative to the input's Frobenius norm.
const OFF_DIAGONAL_TOL: f64 = 1e-14;
/// Largest tolerated imaginary part on the converged diagonal, relative to the input norm.
const IMAGINARY_RESIDUE_TOL: f64 = 1e-12;

/// Spectrum of a Hermitian matrix: real eigenvalues in descending order and
/// the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex> {
        self.eigenvectors.column(k)
    }

    /// `V Λ V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let weights: Vec<f64> = self.eigenvalues.clone();
        self.weighted_sum(|k| weights[k], n)
    }

    /// Orthogonal projector onto the span of eigenvectors whose eigenvalue satisfies `keep`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let mask: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| if keep(l) { 1.0 } else { 0.0 })
            .collect();
        self.weighted_sum(|k| mask[k], n)
    }

    /// `V f(Λ) V^dagger` for a real function of the spectrum.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.weighted_sum(|k| mapped[k], n)
    }

    /// `V e^{iΛ} V^dagger`, the unitary generated by this Hermitian matrix.
    pub fn exp_i(&self) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let v = &self.eigenvectors;
        let phases: Vec<Complex> = self
            .eigenvalues
            .iter()
            .map(|&l| Complex::from_polar(1.0, l))
            .collect();
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += v[(i, k)] * phases[k] * v[(j, k)].conj();
                }
                data[i * n + j] = acc;
            }
        }
        ComplexMatrix::from_raw(n, data)
    }

    fn weighted_sum(&self, weight: impl Fn(usize) -> f64, n: usize) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let ks: Vec<usize> = (0..n).filter(|&k| weight(k) != 0.0).collect();
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for &k in &ks {
                    acc += v[(i, k)] * v[(j, k)].conj() * weight(k);
                }
                data[i * n + j] = acc;
            }
        }
        ComplexMatrix::from_raw(n, data)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// The input must be Hermitian within [`HERMITIAN_TOL`]; it is symmetrized as
/// `(A + A^dagger) / 2` before iterating. Degenerate eigenvalues come back in
/// no particular order within their cluster.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let deviation = a.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = a.dim();
    let mut w = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            w[i * n + j] = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
        }
    }
    let scale = a.frobenius_norm();
    // vt holds V^dagger's conjugate: row k is eigenvector k.
    let mut vt = vec![ZERO; n * n];
    for k in 0..n {
        vt[k * n + k] = Complex::new(1.0, 0.0);
    }

    let target = OFF_DIAGONAL_TOL * scale;
    let schedule = round_robin(n);
    let mut rotations = Vec::with_capacity(n / 2 + 1);
    let mut converged = false;
    let mut off = off_diagonal_mass(&w, n);
    for _ in 0..MAX_SWEEPS {
        if off <= target {
            converged = true;
            break;
        }
        for round in &schedule {
            rotations.clear();
            rotations.extend(
                round
                    .iter()
                    .filter_map(|&(p, q)| Rotation::annihilating(&w, n, p, q)),
            );
            apply_round(&mut w, &mut vt, n, &rotations);
        }
        off = off_diagonal_mass(&w, n);
    }
    if !converged && off > target {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            residual: off,
        });
    }

    let residue = (0..n).map(|i| w[i * n + i].im.abs()).fold(0.0, f64::max);
    if residue > IMAGINARY_RESIDUE_TOL * scale.max(1.0) {
        return Err(Error::Numeric(format!(
            "eigenvalue imaginary residue {residue:e} after diagonalization"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[j * n + j].re.total_cmp(&w[i * n + i].re));
    let eigenvalues = order.iter().map(|&k| w[k * n + k].re).collect();
    let mut vecs = vec![ZERO; n * n];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vecs[i * n + col] = vt[k * n + i];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_raw(n, vecs),
    })
}

fn off_diagonal_mass(w: &[Complex], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += w[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Tournament ordering: `n - 1` (or `n` for odd `n`) rounds of disjoint index
/// pairs that together cover every pair `p < q` once per sweep.
fn round_robin(n: usize) -> Vec<Vec<(usize, usize)>> {
    let m = n + n % 2;
    let mut ring: Vec<usize> = (0..m).collect();
    let mut rounds = Vec::with_capacity(m - 1);
    for _ in 0..m.saturating_sub(1) {
        let round = (0..m / 2)
            .map(|k| (ring[k], ring[m - 1 - k]))
            .filter(|&(a, b)| a < n && b < n)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        rounds.push(round);
        // Keep ring[0] fixed and rotate the rest by one.
        ring[1..].rotate_right(1);
    }
    rounds
}

/// `J = diag(1, e^{-iφ}) · R(θ)` on the `(p, q)` plane, chosen so that
/// `(J† A J)_pq = 0` where `a_pq = |a_pq| e^{iφ}`.
#[derive(Debug, Clone, Copy)]
struct Rotation {
    p: usize,
    q: usize,
    c: f64,
    /// `s e^{-iφ}`
    s_conj_phase: Complex,
    /// `c e^{-iφ}`
    c_conj_phase: Complex,
    s: f64,
    /// New diagonal entries `a_pp - t|a_pq|`, `a_qq + t|a_pq|`.
    diag: (f64, f64),
}

impl Rotation {
    #[inline]
    fn annihilating(w: &[Complex], n: usize, p: usize, q: usize) -> Option<Self> {
        let b = w[p * n + q];
        let bm = b.norm();
        if bm == 0.0 {
            return None;
        }
        let app = w[p * n + p].re;
        let aqq = w[q * n + q].re;
        let phase = b / bm;
        let theta = (aqq - app) / (2.0 * bm);
        let t = if theta.abs() > 1e150 {
            0.5 / theta
        } else {
            theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
        };
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;
        Some(Self {
            p,
            q,
            c,
            s,
            s_conj_phase: phase.conj() * s,
            c_conj_phase: phase.conj() * c,
            diag: (app - t * bm, aqq + t * bm),
        })
    }
}

/// Applies a round of disjoint rotations: `w ← J† w J` and `V ← V J`.
///
/// The rotations commute, so each pass streams over whole rows.
fn apply_round(w: &mut [Complex], vt: &mut [Complex], n: usize, rotations: &[Rotation]) {
    if rotations.is_empty() {
        return;
    }
    // Columns: w ← w J, row by row.
    for row in w.chunks_exact_mut(n) {
        for r in rotations {
            let wp = row[r.p];
            let wq = row[r.q];
            row[r.p] = wp * r.c - wq * r.s_conj_phase;
            row[r.q] = wp * r.s + wq * r.c_conj_phase;
        }
    }
    // Rows: w ← J† w. Row coefficients are the conjugates of the column ones.
    for r in rotations {
        rotate_rows(
            w,
            n,
            r.p,
            r.q,
            r.c,
            r.s,
            r.s_conj_phase.conj(),
            r.c_conj_phase.conj(),
        );
        let (pp, qq) = r.diag;
        let (diag_p_im, diag_q_im) = (w[r.p * n + r.p].im, w[r.q * n + r.q].im);
        w[r.p * n + r.q] = ZERO;
        w[r.q * n + r.p] = ZERO;
        w[r.p * n + r.p] = Complex::new(pp, diag_p_im);
        w[r.q * n + r.q] = Complex::new(qq, diag_q_im);
        // Row k of vt is column k of V, so V ← V J is a row update here.
        rotate_rows(vt, n, r.p, r.q, r.c, r.s, r.s_conj_phase, r.c_conj_phase);
    }
}

/// `row_p ← c row_p - sφ row_q`, `row_q ← s row_p + cφ row_q` with `p < q`.
#[inline]
#[allow(clippy::too_many_arguments)]
fn rotate_rows(
    m: &mut [Complex],
    n: usize,
    p: usize,
    q: usize,
    c: f64,
    s: f64,
    s_phase: Complex,
    c_phase: Complex,
) {
    let (head, tail) = m.split_at_mut(q * n);
    let row_p = &mut head[p * n..(p + 1) * n];
    let row_q = &mut tail[..n];
    for (xp, xq) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (a, b) = (*xp, *xq);
        *xp = a * c - b * s_phase;
        *xq = a * s + b * c_phase;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, seeded};

    fn assert_valid(a: &ComplexMatrix, eig: &EigenDecomposition, tol: f64) {
        let n = a.dim();
        assert!(eig.reconstruct().max_abs_diff(a) <= tol, "reconstruction");
        let v = eig.eigenvectors();
        let gram = v.dagger().matmul(v).unwrap();
        assert!(
            gram.max_abs_diff(&ComplexMatrix::identity(n)) <= tol,
            "orthonormality"
        );
        assert!(
            eig.eigenvalues().windows(2).all(|w| w[0] >= w[1]),
            "descending"
        );
    }

    #[test]
    fn identity_spectrum() {
        let eig = hermitian_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(eig.eigenvalues(), &[1.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum_and_vectors() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let eig = hermitian_eig(&x).unwrap();
        assert!((eig.eigenvalues()[0] - 1.0).abs() < 1e-15);
        assert!((eig.eigenvalues()[1] + 1.0).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [Complex::new(h, 0.0), Complex::new(h, 0.0)];
        let minus = [Complex::new(h, 0.0), Complex::new(-h, 0.0)];
        let overlap = |v: &[Complex], w: &[Complex]| -> f64 {
            v.iter()
                .zip(w)
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex>()
                .norm()
        };
        assert!((overlap(&eig.eigenvector(0), &plus) - 1.0).abs() < 1e-12);
        assert!((overlap(&eig.eigenvector(1), &minus) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_two_by_two_matches_closed_form() {
        // [[a, b], [b*, d]] has eigenvalues (a+d)/2 ± sqrt(((a-d)/2)^2 + |b|^2).
        let (a, d, b) = (0.3, -1.2, Complex::new(0.4, -0.7));
        let m = ComplexMatrix::from_rows(&[
            vec![Complex::new(a, 0.0), b],
            vec![b.conj(), Complex::new(d, 0.0)],
        ])
        .unwrap();
        let eig = hermitian_eig(&m).unwrap();
        let r = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
        assert!((eig.eigenvalues()[0] - ((a + d) / 2.0 + r)).abs() < 1e-14);
        assert!((eig.eigenvalues()[1] - ((a + d) / 2.0 - r)).abs() < 1e-14);
        assert_valid(&m, &eig, 1e-14);
    }

    #[test]
    fn random_hermitian_reconstruction() {
        let mut rng = seeded(11);
        for dim in [1, 2, 3, 5, 8, 16, 33] {
            for _ in 0..5 {
                let a = random_hermitian(&mut rng, dim);
                let eig = hermitian_eig(&a).unwrap();
                assert_valid(&a, &eig, 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_spectrum_projectors() {
        // diag(2, 2, -1) rotated by a random unitary: compare projectors, not columns.
        let mut rng = seeded(12);
        let u = crate::random::random_unitary(&mut rng, 3);
        let d = ComplexMatrix::from_diagonal(&[2.0, -1.0, 2.0]).unwrap();
        let a = u.matmul(&d).unwrap().matmul(&u.dagger()).unwrap();
        let eig = hermitian_eig(&a).unwrap();
        let got = [
            eig.eigenvalues()[0],
            eig.eigenvalues()[1],
            eig.eigenvalues()[2],
        ];
        for (g, e) in got.iter().zip([2.0, 2.0, -1.0]) {
            assert!((g - e).abs() < 1e-12);
        }
        let p_top = eig.projector(|l| l > 0.0);
        let d_top = ComplexMatrix::from_diagonal(&[1.0, 0.0, 1.0]).unwrap();
        let expected = u.matmul(&d_top).unwrap().matmul(&u.dagger()).unwrap();
        assert!(p_top.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn slightly_non_hermitian_input_is_symmetrized() {
        let mut m = random_hermitian(&mut seeded(13), 4).as_slice().to_vec();
        m[1] += Complex::new(5e-11, 0.0);
        let a = ComplexMatrix::new(4, m).unwrap();
        assert!(hermitian_eig(&a).is_ok());
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_eig(&a),
            Err(Error::NotHermitian { deviation }) if deviation == 1.0
        ));
    }

    #[test]
    fn spectral_helpers() {
        let mut rng = seeded(14);
        let h = random_hermitian(&mut rng, 4);
        let eig = hermitian_eig(&h).unwrap();
        let u = eig.exp_i();
        assert!(u.is_unitary(1e-12));
        assert!(eig.map_spectrum(|l| l).max_abs_diff(&h) < 1e-12);
    }
}
