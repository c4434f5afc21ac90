//! Conservative computing over d-valued logic.
//!
//! Truth values are integer levels `0..d`, energies are exact rationals, and
//! gates are total truth tables indexed by the lexicographic rank of their
//! input pattern (leftmost line most significant). On top of these sit:
//!
//! * [`conserve`]: energy-conservation checks and padded conservative extensions,
//! * [`conscomp`]: ordering computation steps under a bounded energy store,
//! * [`movement`]: programs of guarded one-quantum energy moves,
//! * [`quantum`]: ladder-operator realizations of gates on `C^d` registers,
//! * [`formats`]: the JSON file formats shared with the command-line tool.

pub mod conscomp;
pub mod conserve;
mod error;
pub mod formats;
pub mod logic;
pub mod movement;
pub mod quantum;

pub use conscomp::{ConsCompInstance, Permutation, StoredTrace};
pub use conserve::{ConservativenessReport, ExtensionReport};
pub use error::{Error, Result};
pub use logic::{EnergyModel, Gate, Pattern, Rational, TruthValue};
pub use movement::{MoveProgram, MoveStep};
pub use quantum::{Ket, OperatorMatrix};
