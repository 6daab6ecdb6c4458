use std::path::PathBuf;

use qindist_core::analysis::{indistinguishability_check, trace_distance, Verdict};
use qindist_core::game::{
    adversary_from_distinguisher, baseline_adversary, distinguisher_from_adversary,
    ind_success_probability, run_ind_game, run_semantic_game, semantic_success_probability,
    Distinguisher, GameResult, Hint, SemanticInstance,
};
use qindist_core::scheme::{
    cipher_state, joint_cipher_state_public, KeyModel, Limits, PlaintextSet, Scheme,
};
use qindist_core::selftest::run_selftest;
use qindist_core::state::{DensityOperator, PureState};

use crate::error::{CliError, CliResult};
use crate::report::{AnalyzeReport, Format, GameReport, Render, RunRow, SelftestReport};
use crate::schemefile::parse_scheme_file;

/// Monte Carlo runs pass when within this many standard errors of the exact value.
pub const BAND_STDERRS: f64 = 5.0;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
/// Distinguishable verdict, or a Monte Carlo run outside its band.
pub const EXIT_FLAGGED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Game,
    Semantic,
    Selftest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub scheme: Option<PathBuf>,
    pub threshold: f64,
    pub x: Option<String>,
    pub y: Option<String>,
    pub trials: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub limits: Limits,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            scheme: None,
            threshold: qindist_core::analysis::DEFAULT_THRESHOLD,
            x: None,
            y: None,
            trials: 100_000,
            seed: 0,
            output: None,
            format: Format::Text,
            limits: Limits::default(),
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(CliError::Usage(format!(
                "--threshold must be in (0, 1], got {}",
                self.threshold
            )));
        }
        if self.command != Command::Selftest && self.scheme.is_none() {
            return Err(CliError::Usage("--scheme <file> is required".into()));
        }
        Ok(())
    }
}

/// Rendered report, exit status and warnings for the error stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: String,
    pub warnings: Vec<String>,
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    match cfg.command {
        Command::Analyze => cmd_analyze(cfg),
        Command::Game => cmd_game(cfg),
        Command::Semantic => cmd_semantic(cfg),
        Command::Selftest => cmd_selftest(cfg),
    }
}

fn load(cfg: &RunConfig) -> CliResult<(Scheme, PlaintextSet)> {
    let path = cfg.scheme.as_ref().expect("validated");
    parse_scheme_file(path, cfg.limits)
}

pub fn cmd_analyze(cfg: &RunConfig) -> CliResult<Outcome> {
    let (scheme, plaintexts) = load(cfg)?;
    let report = indistinguishability_check(&scheme, &plaintexts, cfg.threshold)?;
    let exit_code = match report.verdict {
        Verdict::Indistinguishable => EXIT_OK,
        Verdict::Distinguishable => EXIT_FLAGGED,
    };
    Ok(Outcome {
        exit_code,
        report: AnalyzeReport::from(&report).render(cfg.format),
        warnings: scheme.warnings().to_vec(),
    })
}

/// The named plaintexts, defaulting to the first two in the file.
fn pick_pair(
    cfg: &RunConfig,
    plaintexts: &PlaintextSet,
) -> CliResult<(String, PureState, String, PureState)> {
    let entries = plaintexts.entries();
    let lookup =
        |flag: &str, name: &Option<String>, default: usize| -> CliResult<(String, PureState)> {
            match name {
                Some(n) => plaintexts
                    .get(n)
                    .map(|s| (n.clone(), s.clone()))
                    .ok_or_else(|| CliError::Usage(format!("{flag}: no plaintext named {n:?}"))),
                None => entries.get(default).cloned().ok_or_else(|| {
                    CliError::Usage(format!(
                        "{flag} not given and the file has fewer than two plaintexts"
                    ))
                }),
            }
        };
    let (xn, x) = lookup("--x", &cfg.x, 0)?;
    let (yn, y) = lookup("--y", &cfg.y, 1)?;
    if xn == yn {
        return Err(CliError::Usage(
            "--x and --y must name different plaintexts".into(),
        ));
    }
    Ok((xn, x, yn, y))
}

/// States the adversary holds: cipher states, or key register and cipher for public-key schemes.
fn observed_state(s: &Scheme, x: &PureState) -> CliResult<DensityOperator> {
    Ok(match s.key_model() {
        KeyModel::Private => cipher_state(s, x)?,
        KeyModel::Public => joint_cipher_state_public(s, x)?,
    })
}

fn row(
    role: &'static str,
    game: &'static str,
    r: &GameResult,
    analytic_success: f64,
    analytic_advantage: f64,
) -> RunRow {
    let band = BAND_STDERRS * r.stderr;
    RunRow {
        role,
        game,
        seed: r.seed,
        trials: r.trials,
        wins: r.wins,
        empirical_success: r.empirical_success,
        analytic_success,
        empirical_advantage: r.empirical_advantage,
        analytic_advantage,
        stderr: r.stderr,
        band,
        status: if r.within(analytic_success, BAND_STDERRS) {
            "PASS"
        } else {
            "FAIL"
        },
    }
}

fn game_outcome(report: GameReport, cfg: &RunConfig, scheme: &Scheme) -> Outcome {
    let passed = report.passed();
    let report = GameReport {
        status: if passed { "PASS" } else { "FAIL" },
        ..report
    };
    Outcome {
        exit_code: if passed { EXIT_OK } else { EXIT_FLAGGED },
        report: report.render(cfg.format),
        warnings: scheme.warnings().to_vec(),
    }
}

pub fn cmd_game(cfg: &RunConfig) -> CliResult<Outcome> {
    let (scheme, plaintexts) = load(cfg)?;
    let (xn, x, yn, y) = pick_pair(cfg, &plaintexts)?;
    let (rx, ry) = (observed_state(&scheme, &x)?, observed_state(&scheme, &y)?);
    let d = trace_distance(&rx, &ry)?;
    let helstrom = Distinguisher::helstrom(&rx, &ry)?;
    let r = run_ind_game(&scheme, &x, &y, &helstrom, cfg.trials, cfg.seed)?;
    let report = GameReport {
        command: "game",
        scheme: scheme.name().to_string(),
        key_model: scheme.key_model().as_str(),
        x: xn,
        y: yn,
        trace_distance: d,
        runs: vec![row(
            "Helstrom distinguisher",
            "distinguishing",
            &r,
            0.5 * (1.0 + d),
            d,
        )],
        status: "",
    };
    Ok(game_outcome(report, cfg, &scheme))
}

/// Runs the adversary built from the Helstrom distinguisher, the coin-flip
/// baseline, and the distinguisher recovered from that adversary. Run `j`
/// uses master seed `seed + j`.
pub fn cmd_semantic(cfg: &RunConfig) -> CliResult<Outcome> {
    let (scheme, plaintexts) = load(cfg)?;
    let (xn, x, yn, y) = pick_pair(cfg, &plaintexts)?;
    let (rx, ry) = (observed_state(&scheme, &x)?, observed_state(&scheme, &y)?);
    let d = trace_distance(&rx, &ry)?;
    let inst = SemanticInstance::new(
        x.clone(),
        y.clone(),
        Hint::Distinguisher(Distinguisher::helstrom(&rx, &ry)?),
    )?;
    let seed = |j: u64| cfg.seed.wrapping_add(j);

    let adversary = adversary_from_distinguisher(&inst)?;
    let adv_exact = semantic_success_probability(&scheme, &inst, &adversary)?;
    let adv_run = run_semantic_game(&scheme, &inst, &adversary, cfg.trials, seed(0))?;

    let baseline = baseline_adversary(&inst);
    let base_run = run_semantic_game(&scheme, &inst, &baseline, cfg.trials, seed(1))?;

    let recovered = distinguisher_from_adversary(&adversary, &inst)?;
    let rec_exact = ind_success_probability(&scheme, &x, &y, &recovered)?;
    let rec_run = run_ind_game(&scheme, &x, &y, &recovered, cfg.trials, seed(2))?;

    let report = GameReport {
        command: "semantic",
        scheme: scheme.name().to_string(),
        key_model: scheme.key_model().as_str(),
        x: xn,
        y: yn,
        trace_distance: d,
        runs: vec![
            row(
                "adversary from distinguisher",
                "semantic",
                &adv_run,
                adv_exact,
                adv_exact - 0.5,
            ),
            row("baseline adversary", "semantic", &base_run, 0.5, 0.0),
            row(
                "distinguisher from adversary",
                "distinguishing",
                &rec_run,
                rec_exact,
                (2.0 * rec_exact - 1.0).abs(),
            ),
        ],
        status: "",
    };
    Ok(game_outcome(report, cfg, &scheme))
}

pub fn cmd_selftest(cfg: &RunConfig) -> CliResult<Outcome> {
    let report = SelftestReport::new(run_selftest());
    Ok(Outcome {
        exit_code: if report.status == "PASS" {
            EXIT_OK
        } else {
            EXIT_FLAGGED
        },
        report: report.render(cfg.format),
        warnings: Vec::new(),
    })
}
