//! JSON file formats.
//!
//! Every document is written with a fixed key order and a trailing newline,
//! so identical values serialize to identical bytes. Gates are written with
//! rows in lexicographic input order; on load rows may come in any order.

use serde::{Deserialize, Serialize};

use crate::conscomp::{ConsCompInstance, Permutation, StoredTrace};
use crate::conserve::{ConservativenessReport, ExtensionReport};
use crate::error::{Error, Result};
use crate::logic::{Gate, Pattern};
use crate::movement::{Line, LineRole, MoveProgram, MoveStep, RunOutcome};
use crate::quantum::{LadderReport, OperatorMatrix, OperatorVerification};

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

/// Pretty JSON plus a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types always serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowFile {
    #[serde(rename = "in")]
    pub input: Vec<u32>,
    #[serde(rename = "out")]
    pub output: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateFile {
    pub d: u32,
    pub n: usize,
    pub m: usize,
    pub rows: Vec<RowFile>,
}

impl GateFile {
    pub fn from_gate(g: &Gate) -> Self {
        let rows = g
            .rows()
            .map(|(x, y)| RowFile {
                input: x.into_levels(),
                output: y.into_levels(),
            })
            .collect();
        Self {
            d: g.radix(),
            n: g.inputs(),
            m: g.outputs(),
            rows,
        }
    }

    pub fn to_gate(&self) -> Result<Gate> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            rows.push((
                Pattern::new(self.d, row.input.clone())?,
                Pattern::new(self.d, row.output.clone())?,
            ));
        }
        Gate::from_rows(self.d, self.n, self.m, rows)
    }
}

pub fn parse_gate(text: &str) -> Result<Gate> {
    parse::<GateFile>(text)?.to_gate()
}

pub fn write_gate(g: &Gate) -> String {
    to_json(&GateFile::from_gate(g))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReportFile {
    pub o_units: u64,
    pub z_units: u64,
    pub ones_pads: usize,
    pub zeros_pads: usize,
}

impl From<&ExtensionReport> for ExtensionReportFile {
    fn from(r: &ExtensionReport) -> Self {
        Self {
            o_units: r.o_units,
            z_units: r.z_units,
            ones_pads: r.ones_pads,
            zeros_pads: r.zeros_pads,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub input: Vec<u32>,
    /// Exact rationals as `"p/q"` (or `"p"`).
    pub input_energy: String,
    pub output_energy: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConservativenessFile {
    pub conservative: bool,
    pub witness: Option<WitnessFile>,
}

impl From<&ConservativenessReport> for ConservativenessFile {
    fn from(r: &ConservativenessReport) -> Self {
        Self {
            conservative: r.conservative,
            witness: r.witness.as_ref().map(|w| WitnessFile {
                input: w.input.levels().to_vec(),
                input_energy: w.input_energy.to_string(),
                output_energy: w.output_energy.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub e: Vec<i64>,
    #[serde(rename = "C")]
    pub capacity: u64,
}

impl From<&ConsCompInstance> for InstanceFile {
    fn from(i: &ConsCompInstance) -> Self {
        Self {
            e: i.deltas().to_vec(),
            capacity: i.capacity(),
        }
    }
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<ConsCompInstance> {
        ConsCompInstance::new(self.e.clone(), self.capacity)
    }
}

pub fn parse_instance(text: &str) -> Result<ConsCompInstance> {
    parse::<InstanceFile>(text)?.to_instance()
}

pub fn write_instance(i: &ConsCompInstance) -> String {
    to_json(&InstanceFile::from(i))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverOutput {
    pub feasible: bool,
    pub order: Option<Vec<usize>>,
    pub trace: Option<Vec<i64>>,
}

impl SolverOutput {
    pub fn infeasible() -> Self {
        Self {
            feasible: false,
            order: None,
            trace: None,
        }
    }

    pub fn feasible(p: &Permutation, trace: &StoredTrace) -> Self {
        Self {
            feasible: true,
            order: Some(p.order().to_vec()),
            trace: Some(trace.st.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineFile {
    pub name: String,
    pub role: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFile {
    pub when: Vec<(String, u32)>,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramFile {
    pub d: u32,
    pub lines: Vec<LineFile>,
    pub steps: Vec<StepFile>,
}

impl ProgramFile {
    pub fn from_program(p: &MoveProgram) -> Self {
        let lines = p
            .lines()
            .iter()
            .map(|l| match l.role {
                LineRole::Io => LineFile {
                    name: l.name.clone(),
                    role: "io".into(),
                    init: None,
                },
                LineRole::Ancilla { init } => LineFile {
                    name: l.name.clone(),
                    role: "ancilla".into(),
                    init: Some(init),
                },
            })
            .collect();
        let steps = p
            .steps()
            .iter()
            .map(|s| StepFile {
                when: s.when.clone(),
                from: s.from.clone(),
                to: s.to.clone(),
            })
            .collect();
        Self {
            d: p.radix(),
            lines,
            steps,
        }
    }

    pub fn to_program(&self) -> Result<MoveProgram> {
        let mut lines = Vec::with_capacity(self.lines.len());
        for l in &self.lines {
            let role = match (l.role.as_str(), l.init) {
                ("io", None) => LineRole::Io,
                ("io", Some(_)) => {
                    return Err(Error::InvalidProgram(format!(
                        "io line {:?} has an init",
                        l.name
                    )))
                }
                ("ancilla", Some(init)) => LineRole::Ancilla { init },
                ("ancilla", None) => {
                    return Err(Error::InvalidProgram(format!(
                        "ancilla {:?} has no init",
                        l.name
                    )))
                }
                (other, _) => {
                    return Err(Error::InvalidProgram(format!(
                        "unknown line role {other:?}"
                    )))
                }
            };
            lines.push(Line {
                name: l.name.clone(),
                role,
            });
        }
        let steps = self
            .steps
            .iter()
            .map(|s| MoveStep {
                when: s.when.clone(),
                from: s.from.clone(),
                to: s.to.clone(),
            })
            .collect();
        MoveProgram::new(self.d, lines, steps)
    }
}

pub fn parse_program(text: &str) -> Result<MoveProgram> {
    parse::<ProgramFile>(text)?.to_program()
}

pub fn write_program(p: &MoveProgram) -> String {
    to_json(&ProgramFile::from_program(p))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunFile {
    pub output: Vec<u32>,
    pub ancillas: Vec<u32>,
    pub fired: Vec<usize>,
}

impl From<&RunOutcome> for RunFile {
    fn from(r: &RunOutcome) -> Self {
        Self {
            output: r.output.levels().to_vec(),
            ancillas: r.ancillas.clone(),
            fired: r.fired.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&OperatorMatrix> for OperatorFile {
    fn from(op: &OperatorMatrix) -> Self {
        let n = op.dim();
        let part = |f: fn(&num_complex::Complex64) -> f64| {
            (0..n).map(|r| op.row(r).iter().map(f).collect()).collect()
        };
        Self {
            dim: n,
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }
}

impl OperatorFile {
    pub fn to_operator(&self) -> Result<OperatorMatrix> {
        let n = self.dim;
        let bad = |what: &str| Error::Format(format!("operator {what} must be {n}x{n}"));
        if self.re.len() != n || self.re.iter().any(|r| r.len() != n) {
            return Err(bad("re"));
        }
        if self.im.len() != n || self.im.iter().any(|r| r.len() != n) {
            return Err(bad("im"));
        }
        let entries = self
            .re
            .iter()
            .flatten()
            .zip(self.im.iter().flatten())
            .map(|(&re, &im)| num_complex::Complex64::new(re, im))
            .collect();
        OperatorMatrix::from_entries(n, entries)
    }
}

pub fn parse_operator(text: &str) -> Result<OperatorMatrix> {
    parse::<OperatorFile>(text)?.to_operator()
}

pub fn write_operator(op: &OperatorMatrix) -> String {
    to_json(&OperatorFile::from(op))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationFile {
    pub passed: bool,
    pub failing: Vec<usize>,
}

impl From<&OperatorVerification> for VerificationFile {
    fn from(v: &OperatorVerification) -> Self {
        Self {
            passed: v.passed,
            failing: v.failing.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderEntryFile {
    pub i: u32,
    pub j: u32,
    pub case: Option<usize>,
    pub matching_cases: Vec<usize>,
    pub error: Option<f64>,
    pub overlap_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReportFile {
    pub d: u32,
    pub tolerance: f64,
    pub clean: bool,
    pub mismatches: Vec<(u32, u32)>,
    pub gaps: Vec<(u32, u32)>,
    pub inconsistent_overlaps: Vec<(u32, u32)>,
    pub entries: Vec<LadderEntryFile>,
}

impl From<&LadderReport> for LadderReportFile {
    fn from(r: &LadderReport) -> Self {
        Self {
            d: r.d,
            tolerance: r.tolerance,
            clean: r.clean(),
            mismatches: r.mismatches.clone(),
            gaps: r.gaps.clone(),
            inconsistent_overlaps: r.inconsistent_overlaps.clone(),
            entries: r
                .entries
                .iter()
                .map(|e| LadderEntryFile {
                    i: e.i,
                    j: e.j,
                    case: e.case,
                    matching_cases: e.matching_cases.clone(),
                    error: e.error,
                    overlap_spread: e.overlap_spread,
                })
                .collect(),
        }
    }
}
