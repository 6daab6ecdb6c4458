//! Report structures and their text and JSON renderings.
//!
//! JSON output is byte-stable: fields are emitted in declaration order and
//! every float is printed in scientific notation with 17 significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use qindist_core::analysis::{AdvantageReport, DistanceTable};
use qindist_core::linalg::ComplexMatrix;
use qindist_core::selftest::Check;

use crate::schemefile::MatrixSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Pretty JSON with floats written as `{:.16e}`.
struct ReportFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for ReportFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_stable_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut out, ReportFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("reports always serialize");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

pub trait Render: Serialize {
    fn text(&self) -> String;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => to_stable_json(self),
        }
    }
}

fn matrix_spec(m: &ComplexMatrix) -> MatrixSpec {
    (0..m.dim())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PairRow {
    pub x: String,
    pub y: String,
    pub trace_distance: f64,
    pub helstrom_success: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub pairs: Vec<PairRow>,
    pub max_distance: f64,
}

impl From<&DistanceTable> for TableRow {
    fn from(t: &DistanceTable) -> Self {
        Self {
            pairs: t
                .pairs
                .iter()
                .map(|p| PairRow {
                    x: p.x.clone(),
                    y: p.y.clone(),
                    trace_distance: p.trace_distance,
                    helstrom_success: p.helstrom_success,
                })
                .collect(),
            max_distance: t.max_distance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EffectRow {
    pub label: String,
    pub matrix: MatrixSpec,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessRow {
    pub x: String,
    pub y: String,
    /// Outcome `"rho"` guesses `x`.
    pub success: f64,
    pub effects: Vec<EffectRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub command: &'static str,
    pub scheme: String,
    pub key_model: &'static str,
    pub qubits: usize,
    pub threshold: f64,
    pub tier: &'static str,
    pub not_evaluated: Vec<&'static str>,
    pub states: &'static str,
    pub pairs: Vec<PairRow>,
    pub max_distance: f64,
    pub verdict: &'static str,
    pub key_averaged: Option<TableRow>,
    pub witness: Option<WitnessRow>,
    pub warnings: Vec<String>,
}

impl From<&AdvantageReport> for AnalyzeReport {
    fn from(r: &AdvantageReport) -> Self {
        let table = TableRow::from(&r.distances);
        Self {
            command: "analyze",
            scheme: r.scheme.clone(),
            key_model: r.key_model.as_str(),
            qubits: r.qubits,
            threshold: r.threshold,
            tier: AdvantageReport::TIER,
            not_evaluated: AdvantageReport::NOT_EVALUATED.to_vec(),
            states: match r.key_averaged {
                None => "key-averaged cipher states",
                Some(_) => "key register with cipher state",
            },
            pairs: table.pairs,
            max_distance: table.max_distance,
            verdict: r.verdict.as_str(),
            key_averaged: r.key_averaged.as_ref().map(TableRow::from),
            witness: r.witness.as_ref().map(|w| WitnessRow {
                x: w.x.clone(),
                y: w.y.clone(),
                success: w.success,
                effects: w
                    .povm
                    .labels()
                    .iter()
                    .zip(w.povm.effects())
                    .map(|(label, e)| EffectRow {
                        label: label.clone(),
                        matrix: matrix_spec(e),
                    })
                    .collect(),
            }),
            warnings: r.warnings.clone(),
        }
    }
}

fn pair_lines(out: &mut String, pairs: &[PairRow]) {
    for p in pairs {
        out.push_str(&format!(
            "  {:<12} {:<12} D = {:.12}  Helstrom success = {:.12}\n",
            p.x, p.y, p.trace_distance, p.helstrom_success
        ));
    }
}

impl Render for AnalyzeReport {
    fn text(&self) -> String {
        let mut out = format!(
            "scheme {} ({} key, {} qubit{})\ntier: {} (not evaluated: {})\ndistances between {}:\n",
            self.scheme,
            self.key_model,
            self.qubits,
            if self.qubits == 1 { "" } else { "s" },
            self.tier,
            self.not_evaluated.join(", "),
            self.states,
        );
        pair_lines(&mut out, &self.pairs);
        out.push_str(&format!(
            "max distance {:.12} vs threshold {:e}: {}\n",
            self.max_distance, self.threshold, self.verdict
        ));
        if let Some(t) = &self.key_averaged {
            out.push_str("distances between key-averaged cipher states:\n");
            pair_lines(&mut out, &t.pairs);
            out.push_str(&format!("  max distance {:.12}\n", t.max_distance));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!(
                "attack: Helstrom measurement on ({}, {}) succeeds with probability {:.12}\n",
                w.x, w.y, w.success
            ));
        }
        out
    }
}

/// One Monte Carlo run next to its exact value.
#[derive(Debug, Clone, Serialize)]
pub struct RunRow {
    pub role: &'static str,
    pub game: &'static str,
    pub seed: u64,
    pub trials: u64,
    pub wins: u64,
    pub empirical_success: f64,
    pub analytic_success: f64,
    pub empirical_advantage: f64,
    pub analytic_advantage: f64,
    pub stderr: f64,
    pub band: f64,
    pub status: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct GameReport {
    pub command: &'static str,
    pub scheme: String,
    pub key_model: &'static str,
    pub x: String,
    pub y: String,
    pub trace_distance: f64,
    pub runs: Vec<RunRow>,
    pub status: &'static str,
}

impl GameReport {
    pub fn passed(&self) -> bool {
        self.runs.iter().all(|r| r.status == "PASS")
    }
}

impl Render for GameReport {
    fn text(&self) -> String {
        let mut out = format!(
            "scheme {} ({} key), x = {}, y = {}, D = {:.12}\n",
            self.scheme, self.key_model, self.x, self.y, self.trace_distance
        );
        for r in &self.runs {
            out.push_str(&format!(
                "{} [{} game, {} trials, seed {}]\n  success   empirical {:.6}  analytic {:.6}  (5 stderr = {:.6})\n  advantage empirical {:.6}  analytic {:.6}\n  {}\n",
                r.role,
                r.game,
                r.trials,
                r.seed,
                r.empirical_success,
                r.analytic_success,
                r.band,
                r.empirical_advantage,
                r.analytic_advantage,
                r.status
            ));
        }
        out.push_str(&format!("overall: {}\n", self.status));
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub command: &'static str,
    pub checks: Vec<CheckRow>,
    pub status: &'static str,
}

impl SelftestReport {
    pub fn new(checks: Vec<Check>) -> Self {
        let checks: Vec<CheckRow> = checks
            .into_iter()
            .map(|c| CheckRow {
                name: c.name,
                passed: c.passed,
                detail: c.detail,
            })
            .collect();
        let status = if checks.iter().all(|c| c.passed) {
            "PASS"
        } else {
            "FAIL"
        };
        Self {
            command: "selftest",
            checks,
            status,
        }
    }
}

impl Render for SelftestReport {
    fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {} ({})\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        out.push_str(&format!("overall: {}\n", self.status));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        b: f64,
        a: Vec<f64>,
        s: &'static str,
    }

    #[test]
    fn floats_have_seventeen_significant_digits() {
        let json = to_stable_json(&Sample {
            b: 0.1,
            a: vec![1.0, -2.5e-12, 0.0],
            s: "x",
        });
        assert!(json.contains("\"b\": 1.0000000000000001e-1"), "{json}");
        assert!(json.contains("-2.4999999999999998e-12"), "{json}");
        assert!(json.contains("0.0000000000000000e0"), "{json}");
        assert!(json.find("\"b\"").unwrap() < json.find("\"a\"").unwrap());
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back["b"].as_f64().unwrap(), 0.1);
    }
}
