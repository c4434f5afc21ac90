//! `concomp`: command-line front end.
//!
//! Exit codes: 0 = yes/pass, 1 = no/fail, 2 = usage or format error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use concomp_core::conscomp::{
    brute_force_solve, min_capacity_with, random_instance, reduce_partition, stored_sequence,
    SubsetDp, DEFAULT_DP_LIMIT,
};
use concomp_core::conserve::{conservative_extension, is_conservative};
use concomp_core::formats::{
    parse_gate, parse_instance, parse_operator, parse_program, to_json, write_gate, write_instance,
    write_operator, write_program, ConservativenessFile, ExtensionReportFile, LadderReportFile,
    RunFile, SolverOutput, VerificationFile,
};
use concomp_core::logic::parse_rational;
use concomp_core::movement::{
    cdown, fredkin_program, gate_of_program, program_conserves, run_program,
};
use concomp_core::quantum::{
    cdown_operator_formula, cup_operator_formula, gate_operator, ladder_report, verify_operator,
};
use concomp_core::{EnergyModel, Error, Gate, Pattern, Permutation};

#[derive(Parser)]
#[command(name = "concomp", version, about = "Conservative computing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a gate conserves energy on every row
    CheckConservative {
        gate: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Build the padded conservative extension of a gate
    Extend {
        gate: PathBuf,
        /// Where to write the extended gate
        #[arg(long)]
        out: PathBuf,
        /// Also write the extension report here
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Ordering computation steps under a bounded energy store
    #[command(subcommand)]
    Conscomp(ConscompCommand),
    /// Conditional-move programs
    #[command(subcommand)]
    Movement(MovementCommand),
    /// Operator realizations on C^d registers
    #[command(subcommand)]
    Quantum(QuantumCommand),
}

#[derive(Args)]
struct ModelArgs {
    /// Energy of level 0, as "p/q" or an integer
    #[arg(long, default_value = "1")]
    eps0: String,
    /// Gap between adjacent levels, as "p/q" or an integer
    #[arg(long, default_value = "1")]
    delta: String,
}

impl ModelArgs {
    fn model(&self, d: u32) -> Result<EnergyModel> {
        Ok(EnergyModel::new(
            parse_rational(&self.eps0)?,
            parse_rational(&self.delta)?,
            d,
        )?)
    }
}

#[derive(Subcommand)]
enum ConscompCommand {
    /// Find a feasible order, if any
    Solve {
        instance: PathBuf,
        /// Largest instance the subset DP accepts
        #[arg(long, default_value_t = DEFAULT_DP_LIMIT)]
        limit: usize,
        /// Use exhaustive search instead of the DP (at most 9 steps)
        #[arg(long)]
        brute_force: bool,
    },
    /// Check a given order
    Verify {
        instance: PathBuf,
        /// Comma-separated step indices
        #[arg(long, value_delimiter = ',')]
        order: Vec<usize>,
    },
    /// Smallest capacity admitting a feasible order (the file's C is ignored)
    MinCapacity {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DP_LIMIT)]
        limit: usize,
    },
    /// Build the instance for a Partition input
    Reduce {
        #[arg(required = true, allow_negative_numbers = true)]
        values: Vec<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded random instance
    Gen {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        bound: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MovementCommand {
    /// Run a program on one input
    Run {
        program: PathBuf,
        /// Comma-separated io levels
        #[arg(long, value_delimiter = ',')]
        input: Vec<u32>,
    },
    /// Check conservation and ancilla restoration over all inputs
    Check { program: PathBuf },
    /// Emit the built-in Fredkin program
    Fredkin {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Formula {
    /// Pick cdown when the gate is the Boolean CDown table, cup otherwise
    Auto,
    Cup,
    Cdown,
}

#[derive(Subcommand)]
enum QuantumCommand {
    /// Emit the operator realizing a gate
    Op {
        gate: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify an operator against a gate on every basis configuration
    Verify {
        gate: PathBuf,
        /// Compare against a closed-form CUp/CDown operator
        #[arg(long, num_args = 0..=1, default_missing_value = "auto", conflicts_with = "operator")]
        formula: Option<Formula>,
        /// Compare against an operator file
        #[arg(long)]
        operator: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Compare the ladder expression of every E_{i,j} with |j><i|
    LadderReport {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

/// Verdict of a successful command.
enum Verdict {
    Yes,
    No,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(value: &T) {
    print!("{}", to_json(value));
}

fn load_gate(path: &Path) -> Result<Gate> {
    parse_gate(&read(path)?).with_context(|| format!("loading gate {}", path.display()))
}

fn run(cli: Cli) -> Result<Verdict> {
    match cli.command {
        Command::CheckConservative { gate, model } => {
            let g = load_gate(&gate)?;
            let report = is_conservative(&g, &model.model(g.radix())?)?;
            print_json(&ConservativenessFile::from(&report));
            Ok(report.conservative.into())
        }
        Command::Extend {
            gate,
            out,
            report,
            model,
        } => {
            let g = load_gate(&gate)?;
            let ext = conservative_extension(&g, &model.model(g.radix())?)?;
            emit(&write_gate(&ext.gate), Some(&out))?;
            let text = to_json(&ExtensionReportFile::from(&ext));
            if let Some(path) = report {
                emit(&text, Some(&path))?;
            }
            print!("{text}");
            Ok(Verdict::Yes)
        }
        Command::Conscomp(cmd) => conscomp(cmd),
        Command::Movement(cmd) => movement(cmd),
        Command::Quantum(cmd) => quantum(cmd),
    }
}

fn conscomp(cmd: ConscompCommand) -> Result<Verdict> {
    match cmd {
        ConscompCommand::Solve {
            instance,
            limit,
            brute_force,
        } => {
            let inst = parse_instance(&read(&instance)?)?;
            let found = if brute_force {
                brute_force_solve(&inst)?
            } else {
                SubsetDp::with_limit(limit).solve(&inst)?
            };
            let output = match &found {
                Some(p) => SolverOutput::feasible(p, &stored_sequence(inst.deltas(), p)?),
                None => SolverOutput::infeasible(),
            };
            print_json(&output);
            Ok(found.is_some().into())
        }
        ConscompCommand::Verify { instance, order } => {
            let inst = parse_instance(&read(&instance)?)?;
            let p = Permutation::new(order)?;
            let trace = stored_sequence(inst.deltas(), &p)?;
            let feasible = trace.within(inst.capacity());
            print_json(&SolverOutput {
                feasible,
                order: Some(p.order().to_vec()),
                trace: Some(trace.st),
            });
            Ok(feasible.into())
        }
        ConscompCommand::MinCapacity { instance, limit } => {
            let inst = parse_instance(&read(&instance)?)?;
            let c = min_capacity_with(inst.deltas(), SubsetDp::with_limit(limit))?;
            print_json(&serde_json::json!({ "min_capacity": c }));
            Ok(Verdict::Yes)
        }
        ConscompCommand::Reduce { values, out } => {
            emit(&write_instance(&reduce_partition(&values)?), out.as_deref())?;
            Ok(Verdict::Yes)
        }
        ConscompCommand::Gen {
            k,
            bound,
            seed,
            out,
        } => {
            if k == 0 || bound < 1 {
                bail!("--k and --bound must be at least 1");
            }
            emit(
                &write_instance(&random_instance(k, bound, seed)),
                out.as_deref(),
            )?;
            Ok(Verdict::Yes)
        }
    }
}

#[derive(Serialize)]
struct CheckFile {
    conserves: bool,
    ancillas_restored: bool,
    witness: Option<WitnessFile>,
}

#[derive(Serialize)]
struct WitnessFile {
    input: Vec<u32>,
    ancillas: Vec<u32>,
}

fn movement(cmd: MovementCommand) -> Result<Verdict> {
    match cmd {
        MovementCommand::Run { program, input } => {
            let prog = parse_program(&read(&program)?)?;
            let input = Pattern::new(prog.radix(), input)?;
            print_json(&RunFile::from(&run_program(&prog, &input)?));
            Ok(Verdict::Yes)
        }
        MovementCommand::Check { program } => {
            let prog = parse_program(&read(&program)?)?;
            let conserves = program_conserves(&prog)?;
            let witness = match gate_of_program(&prog) {
                Ok(_) => None,
                Err(Error::AncillaNotRestored { input, ancillas }) => Some(WitnessFile {
                    input: input.into_levels(),
                    ancillas,
                }),
                Err(e) => return Err(e.into()),
            };
            let ok = conserves && witness.is_none();
            print_json(&CheckFile {
                conserves,
                ancillas_restored: witness.is_none(),
                witness,
            });
            Ok(ok.into())
        }
        MovementCommand::Fredkin { out } => {
            emit(&write_program(&fredkin_program()), out.as_deref())?;
            Ok(Verdict::Yes)
        }
    }
}

fn quantum(cmd: QuantumCommand) -> Result<Verdict> {
    match cmd {
        QuantumCommand::Op { gate, out } => {
            let g = load_gate(&gate)?;
            emit(&write_operator(&gate_operator(&g)?), out.as_deref())?;
            Ok(Verdict::Yes)
        }
        QuantumCommand::Verify {
            gate,
            formula,
            operator,
            tol,
        } => {
            let g = load_gate(&gate)?;
            let op = match (formula, operator) {
                (Some(f), _) => {
                    let use_cdown = match f {
                        Formula::Cup => false,
                        Formula::Cdown => true,
                        Formula::Auto => g == cdown(2)?,
                    };
                    if use_cdown {
                        cdown_operator_formula()
                    } else {
                        cup_operator_formula()
                    }
                }
                (None, Some(path)) => parse_operator(&read(&path)?)?,
                (None, None) => gate_operator(&g)?,
            };
            let v = verify_operator(&g, &op, tol)?;
            print_json(&VerificationFile::from(&v));
            Ok(v.passed.into())
        }
        QuantumCommand::LadderReport { d, tol } => {
            let report = ladder_report(d, tol)?;
            print_json(&LadderReportFile::from(&report));
            Ok(report.clean().into())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Yes) => ExitCode::from(0),
        Ok(Verdict::No) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
