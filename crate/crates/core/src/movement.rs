//! Conditional energy movement.
//!
//! `CUp` and `CDown` move one quantum between two lines when a control line
//! is at the top level. More generally a [`MoveProgram`] is a list of guarded
//! moves over named lines, some of them ancillas with fixed initial levels.
//! Steps run sequentially against the current state; a move whose source is
//! empty or whose destination is full is a no-op.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::logic::{row_count, Gate, Pattern};

/// Largest input space `program_conserves` and `gate_of_program` enumerate.
pub const MAX_PROGRAM_STATES: u128 = 1 << 20;

/// `(c, a, b) -> (c, a+1, b-1)` when `c` is top, `a` not full and `b` not empty.
pub fn cup(d: u32) -> Result<Gate> {
    let top = d.saturating_sub(1);
    Gate::from_fn(d, 3, 3, |x| {
        let (c, a, b) = (x[0], x[1], x[2]);
        if c == top && a < top && b > 0 {
            vec![c, a + 1, b - 1]
        } else {
            x.to_vec()
        }
    })
}

/// `(c, a, b) -> (c, a-1, b+1)` when `c` is top, `a` not empty and `b` not full.
pub fn cdown(d: u32) -> Result<Gate> {
    let top = d.saturating_sub(1);
    Gate::from_fn(d, 3, 3, |x| {
        let (c, a, b) = (x[0], x[1], x[2]);
        if c == top && a > 0 && b < top {
            vec![c, a - 1, b + 1]
        } else {
            x.to_vec()
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineRole {
    Io,
    Ancilla { init: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub name: String,
    pub role: LineRole,
}

impl Line {
    pub fn io(name: &str) -> Self {
        Self {
            name: name.to_string(),
            role: LineRole::Io,
        }
    }

    pub fn ancilla(name: &str, init: u32) -> Self {
        Self {
            name: name.to_string(),
            role: LineRole::Ancilla { init },
        }
    }
}

/// If every `(line, level)` in `when` holds, move one quantum `from -> to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveStep {
    pub when: Vec<(String, u32)>,
    pub from: String,
    pub to: String,
}

impl MoveStep {
    pub fn new(when: &[(&str, u32)], from: &str, to: &str) -> Self {
        Self {
            when: when.iter().map(|&(n, l)| (n.to_string(), l)).collect(),
            from: from.to_string(),
            to: to.to_string(),
        }
    }
}

/// A step with names resolved to line indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct CompiledStep {
    when: Vec<(usize, u32)>,
    from: usize,
    to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveProgram {
    d: u32,
    lines: Vec<Line>,
    steps: Vec<MoveStep>,
    compiled: Vec<CompiledStep>,
    io: Vec<usize>,
    ancillas: Vec<usize>,
}

impl MoveProgram {
    pub fn new(d: u32, lines: Vec<Line>, steps: Vec<MoveStep>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidRadix(d));
        }
        let mut index = HashMap::new();
        for (i, line) in lines.iter().enumerate() {
            if index.insert(line.name.as_str(), i).is_some() {
                return Err(Error::InvalidProgram(format!(
                    "duplicate line {:?}",
                    line.name
                )));
            }
            if let LineRole::Ancilla { init } = line.role {
                if init >= d {
                    return Err(Error::InvalidProgram(format!(
                        "ancilla {:?} init {init} out of range for radix {d}",
                        line.name
                    )));
                }
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidProgram(format!("unknown line {name:?}")))
        };
        let mut compiled = Vec::with_capacity(steps.len());
        for (k, step) in steps.iter().enumerate() {
            let from = lookup(&step.from)?;
            let to = lookup(&step.to)?;
            if from == to {
                return Err(Error::InvalidProgram(format!(
                    "step {k} moves {:?} onto itself",
                    step.from
                )));
            }
            let mut when = Vec::with_capacity(step.when.len());
            for (name, level) in &step.when {
                if *level >= d {
                    return Err(Error::InvalidProgram(format!(
                        "step {k} tests {name:?} against level {level} out of range"
                    )));
                }
                when.push((lookup(name)?, *level));
            }
            compiled.push(CompiledStep { when, from, to });
        }
        let io = lines
            .iter()
            .enumerate()
            .filter(|(_, l)| l.role == LineRole::Io)
            .map(|(i, _)| i)
            .collect();
        let ancillas = lines
            .iter()
            .enumerate()
            .filter(|(_, l)| l.role != LineRole::Io)
            .map(|(i, _)| i)
            .collect();
        Ok(Self {
            d,
            lines,
            steps,
            compiled,
            io,
            ancillas,
        })
    }

    pub fn radix(&self) -> u32 {
        self.d
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn steps(&self) -> &[MoveStep] {
        &self.steps
    }

    pub fn io_arity(&self) -> usize {
        self.io.len()
    }

    pub fn ancilla_count(&self) -> usize {
        self.ancillas.len()
    }

    pub fn ancilla_inits(&self) -> Vec<u32> {
        self.ancillas
            .iter()
            .map(|&i| match self.lines[i].role {
                LineRole::Ancilla { init } => init,
                LineRole::Io => unreachable!(),
            })
            .collect()
    }

    fn initial_state(&self, input: &Pattern) -> Result<Vec<u32>> {
        if input.radix() != self.d {
            return Err(Error::RadixMismatch {
                expected: self.d,
                found: input.radix(),
            });
        }
        if input.len() != self.io.len() {
            return Err(Error::ArityMismatch {
                expected: self.io.len(),
                found: input.len(),
            });
        }
        let mut state = vec![0; self.lines.len()];
        for (&line, &level) in self.io.iter().zip(input.levels()) {
            state[line] = level;
        }
        for (&line, init) in self.ancillas.iter().zip(self.ancilla_inits()) {
            state[line] = init;
        }
        Ok(state)
    }

    /// Runs every step, calling `observe` with the full line state after each.
    fn execute<F>(&self, input: &Pattern, mut observe: F) -> Result<(Vec<u32>, Vec<usize>)>
    where
        F: FnMut(&[u32]),
    {
        let top = self.d - 1;
        let mut state = self.initial_state(input)?;
        let mut fired = Vec::new();
        for (k, step) in self.compiled.iter().enumerate() {
            let enabled = step.when.iter().all(|&(line, level)| state[line] == level);
            if enabled && state[step.from] > 0 && state[step.to] < top {
                state[step.from] -= 1;
                state[step.to] += 1;
                fired.push(k);
            }
            observe(&state);
        }
        Ok((state, fired))
    }

    fn io_space(&self) -> Result<u64> {
        let rows = row_count(self.d, self.io.len())
            .map_err(|_| Error::StateSpaceTooLarge { states: u128::MAX })?;
        if rows as u128 > MAX_PROGRAM_STATES {
            return Err(Error::StateSpaceTooLarge {
                states: rows as u128,
            });
        }
        Ok(rows)
    }
}

/// Result of one run: io outputs, final ancilla levels and the indices of
/// the steps that fired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub output: Pattern,
    pub ancillas: Vec<u32>,
    pub fired: Vec<usize>,
}

pub fn run_program(prog: &MoveProgram, input: &Pattern) -> Result<RunOutcome> {
    let (state, fired) = prog.execute(input, |_| {})?;
    let output = Pattern::new(prog.d, prog.io.iter().map(|&i| state[i]).collect())?;
    let ancillas = prog.ancillas.iter().map(|&i| state[i]).collect();
    Ok(RunOutcome {
        output,
        ancillas,
        fired,
    })
}

/// Whether the total level over all lines is unchanged after every step of
/// every run.
pub fn program_conserves(prog: &MoveProgram) -> Result<bool> {
    let rows = prog.io_space()?;
    for input in (0..rows).map(|r| Pattern::from_rank(prog.d, prog.io.len(), r)) {
        let initial: u64 = prog.initial_state(&input)?.iter().map(|&l| l as u64).sum();
        let mut ok = true;
        prog.execute(&input, |state| {
            ok &= state.iter().map(|&l| l as u64).sum::<u64>() == initial;
        })?;
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The io gate computed by `prog`, provided every run restores its ancillas.
pub fn gate_of_program(prog: &MoveProgram) -> Result<Gate> {
    let rows = prog.io_space()?;
    let inits = prog.ancilla_inits();
    let n = prog.io.len();
    let mut table = Vec::with_capacity(rows as usize);
    for input in (0..rows).map(|r| Pattern::from_rank(prog.d, n, r)) {
        let run = run_program(prog, &input)?;
        if run.ancillas != inits {
            return Err(Error::AncillaNotRestored {
                input,
                ancillas: run.ancillas,
            });
        }
        table.push((input, run.output));
    }
    Gate::from_rows(prog.d, n, n, table)
}

/// `cup(d)` as a single guarded move on lines `c, a, b`.
pub fn cup_program(d: u32) -> Result<MoveProgram> {
    let lines = vec![Line::io("c"), Line::io("a"), Line::io("b")];
    MoveProgram::new(
        d,
        lines,
        vec![MoveStep::new(&[("c", d.saturating_sub(1))], "b", "a")],
    )
}

/// `cdown(d)` as a single guarded move on lines `c, a, b`.
pub fn cdown_program(d: u32) -> Result<MoveProgram> {
    let lines = vec![Line::io("c"), Line::io("a"), Line::io("b")];
    MoveProgram::new(
        d,
        lines,
        vec![MoveStep::new(&[("c", d.saturating_sub(1))], "a", "b")],
    )
}

/// The Boolean Fredkin gate built from conditional moves.
///
/// Flags `f` and `g` record which of the two swapping cases applies before
/// either target line changes; each flag is charged from its reservoir
/// (`r`, `s`), gates one move between `a` and `b`, and is then discharged.
pub fn fredkin_program() -> MoveProgram {
    let lines = vec![
        Line::io("c"),
        Line::io("a"),
        Line::io("b"),
        Line::ancilla("f", 0),
        Line::ancilla("g", 0),
        Line::ancilla("r", 1),
        Line::ancilla("s", 1),
    ];
    let steps = vec![
        MoveStep::new(&[("c", 1), ("a", 0), ("b", 1)], "r", "f"),
        MoveStep::new(&[("c", 1), ("a", 1), ("b", 0)], "s", "g"),
        MoveStep::new(&[("f", 1)], "b", "a"),
        MoveStep::new(&[("g", 1)], "a", "b"),
        MoveStep::new(&[("f", 1)], "f", "r"),
        MoveStep::new(&[("g", 1)], "g", "s"),
    ];
    MoveProgram::new(2, lines, steps).expect("Fredkin program is well formed")
}
