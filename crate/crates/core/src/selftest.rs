//! Fixed-seed invariant checks, run by the `selftest` command.

use crate::analysis::{
    guessing_success, helstrom_povm, helstrom_success, trace_distance, RHO_LABEL,
};
use crate::error::Result;
use crate::exec::Execution;
use crate::game::{run_ind_game_with, Distinguisher};
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::random::{
    random_density, random_hermitian, random_kraus_channel, random_pure_state,
    random_two_outcome_povm, random_unitary, seeded,
};
use crate::scheme::{builtin, cipher_state, Builtin, Limits};
use crate::state::{apply_channel, pure_to_density, Channel, DensityOperator, PureState};

type CheckFn = fn() -> Result<Check>;

pub const SELFTEST_SEED: u64 = 20_240_601;
const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Largest observed violation, or a short note.
    pub detail: String,
}

fn check(name: &'static str, worst: f64, limit: f64) -> Check {
    Check {
        name,
        passed: worst <= limit,
        detail: format!("worst {worst:.3e} (limit {limit:.0e})"),
    }
}

fn eigen_reconstruction() -> Result<Check> {
    let mut rng = seeded(SELFTEST_SEED);
    let mut worst: f64 = 0.0;
    for dim in [2, 4, 8, 16] {
        for _ in 0..10 {
            let a = random_hermitian(&mut rng, dim);
            worst = worst.max(hermitian_eig(&a)?.reconstruct().max_abs_diff(&a));
        }
    }
    Ok(check("eigendecomposition reconstructs input", worst, 1e-10))
}

fn qotp_mixes() -> Result<Check> {
    let mut rng = seeded(SELFTEST_SEED + 1);
    let mut worst: f64 = 0.0;
    for n in 1..=2 {
        let s = builtin(&Builtin::Qotp, n, Limits::default())?;
        let mixed = DensityOperator::maximally_mixed(n)?;
        for _ in 0..5 {
            let x = random_pure_state(&mut rng, n);
            worst = worst.max(cipher_state(&s, &x)?.matrix().max_abs_diff(mixed.matrix()));
        }
    }
    Ok(check(
        "one-time pad cipher states are maximally mixed",
        worst,
        TOL,
    ))
}

/// Data processing, ancilla invariance, triangle inequality and unitary invariance.
fn distance_properties() -> Result<Vec<Check>> {
    let mut rng = seeded(SELFTEST_SEED + 2);
    let (mut dpi, mut ancilla, mut triangle, mut unitary, mut symmetry) =
        (0f64, 0f64, 0f64, 0f64, 0f64);
    for dim in [2, 4, 8] {
        for _ in 0..10 {
            let rho = random_density(&mut rng, dim, dim);
            let sigma = random_density(&mut rng, dim, 1);
            let omega = random_density(&mut rng, dim, 2);
            let d = trace_distance(&rho, &sigma)?;

            let ch = random_kraus_channel(&mut rng, dim, 2);
            let processed =
                trace_distance(&apply_channel(&ch, &rho)?, &apply_channel(&ch, &sigma)?)?;
            dpi = dpi.max(processed - d);

            let tau = random_density(&mut rng, 2, 2);
            let extended = trace_distance(&rho.tensor(&tau, 1024)?, &sigma.tensor(&tau, 1024)?)?;
            ancilla = ancilla.max((extended - d).abs());

            let via = trace_distance(&rho, &omega)? + trace_distance(&omega, &sigma)?;
            triangle = triangle.max(d - via);

            let u = Channel::unitary(random_unitary(&mut rng, dim))?;
            let rotated = trace_distance(&apply_channel(&u, &rho)?, &apply_channel(&u, &sigma)?)?;
            unitary = unitary.max((rotated - d).abs());

            symmetry = symmetry.max((d - trace_distance(&sigma, &rho)?).abs());
        }
    }
    Ok(vec![
        check("channels do not increase trace distance", dpi, TOL),
        check("ancilla leaves trace distance unchanged", ancilla, TOL),
        check(
            "trace distance obeys the triangle inequality",
            triangle,
            TOL,
        ),
        check("unitaries leave trace distance unchanged", unitary, TOL),
        check("trace distance is symmetric", symmetry, 0.0),
    ])
}

fn helstrom_optimality() -> Result<Check> {
    let mut rng = seeded(SELFTEST_SEED + 3);
    let mut worst: f64 = 0.0;
    for dim in [2, 4] {
        for _ in 0..5 {
            let rho = random_density(&mut rng, dim, dim);
            let sigma = random_density(&mut rng, dim, 1);
            let bound = helstrom_success(&rho, &sigma)?;
            let attained =
                guessing_success(&helstrom_povm(&rho, &sigma)?, RHO_LABEL, &rho, &sigma)?;
            worst = worst.max((attained - bound).abs());
            for _ in 0..20 {
                let povm = random_two_outcome_povm(&mut rng, dim);
                for label in ["0", "1"] {
                    worst = worst.max(guessing_success(&povm, label, &rho, &sigma)? - bound);
                }
            }
        }
    }
    Ok(check(
        "Helstrom measurement is optimal and attains its bound",
        worst,
        TOL,
    ))
}

fn game_matches_analytic() -> Result<Check> {
    let s = builtin(&Builtin::Identity, 1, Limits::default())?;
    let (x, y) = (PureState::basis("0")?, PureState::plus());
    let (rx, ry) = (pure_to_density(&x), pure_to_density(&y));
    let expected = helstrom_success(&rx, &ry)?;
    let d = Distinguisher::helstrom(&rx, &ry)?;
    let r = run_ind_game_with(&s, &x, &y, &d, 20_000, SELFTEST_SEED, Execution::default())?;
    let deviation = (r.empirical_success - expected).abs();
    Ok(Check {
        name: "distinguishing game agrees with the Helstrom bound",
        passed: r.within(expected, 5.0),
        detail: format!(
            "|empirical - analytic| = {deviation:.3e}, 5 stderr = {:.3e}",
            5.0 * r.stderr
        ),
    })
}

fn unitary_from_exponential() -> Result<Check> {
    let mut rng = seeded(SELFTEST_SEED + 4);
    let mut worst: f64 = 0.0;
    for dim in [2, 4, 8] {
        let h = random_hermitian(&mut rng, dim);
        let u = hermitian_eig(&h)?.exp_i();
        let gram = u.dagger().matmul(&u)?;
        worst = worst.max(gram.max_abs_diff(&ComplexMatrix::identity(dim)));
    }
    Ok(check("exp(iH) is unitary", worst, 1e-10))
}

/// Runs every check; errors inside a check are reported as failures.
pub fn run_selftest() -> Vec<Check> {
    let mut out = Vec::new();
    let single: [(&'static str, CheckFn); 5] = [
        (
            "eigendecomposition reconstructs input",
            eigen_reconstruction,
        ),
        ("exp(iH) is unitary", unitary_from_exponential),
        ("one-time pad cipher states are maximally mixed", qotp_mixes),
        (
            "Helstrom measurement is optimal and attains its bound",
            helstrom_optimality,
        ),
        (
            "distinguishing game agrees with the Helstrom bound",
            game_matches_analytic,
        ),
    ];
    for (name, f) in single {
        out.push(f().unwrap_or_else(|e| failed(name, e)));
    }
    match distance_properties() {
        Ok(checks) => out.extend(checks),
        Err(e) => out.push(failed("trace distance properties", e)),
    }
    out
}

fn failed(name: &'static str, e: crate::Error) -> Check {
    Check {
        name,
        passed: false,
        detail: format!("error: {e}"),
    }
}
