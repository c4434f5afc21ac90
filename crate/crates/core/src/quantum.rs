//! Ladder-operator realizations of gates on registers of qudits.
//!
//! Level `l` of `L_d` is the basis vector `e_l` of `C^d`; an `n`-line pattern
//! is the tensor product of its lines with line 1 the leftmost (most
//! significant) factor, so basis index and lexicographic table rank agree.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::logic::{rank_of, Gate, Pattern, TruthValue};

/// Largest operator dimension [`gate_operator`] will build.
pub const MAX_OPERATOR_DIM: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
}

impl Ket {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            amplitudes: vec![ZERO; dim],
        }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut k = Self::zero(dim);
        k.amplitudes[index] = ONE;
        k
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn scale(&self, s: Complex64) -> Ket {
        Ket {
            amplitudes: self.amplitudes.iter().map(|a| a * s).collect(),
        }
    }

    /// `max_i |a_i - b_i|`.
    pub fn max_abs_diff(&self, other: &Ket) -> f64 {
        assert_eq!(self.dim(), other.dim(), "ket dimensions differ");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OperatorMatrix({})", self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = self.row(r).iter().map(|z| format!("{z:.4}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let entries = (0..dim * dim)
            .map(|i| Complex64::new(f(i / dim, i % dim), 0.0))
            .collect();
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.entries[r * self.dim..(r + 1) * self.dim]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.entries[c * n + r] = self.entries[r * n + c].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.dim), |acc, _| &acc * self)
    }

    /// Kronecker product `self ⊗ other`; `self` indexes the high digits.
    pub fn kron(&self, other: &OperatorMatrix) -> Self {
        let (a, b) = (self.dim, other.dim);
        let n = a * b;
        let mut out = Self::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let s = self.entries[i * a + j];
                if s == ZERO {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.entries[(i * b + k) * n + j * b + l] = s * other.entries[k * b + l];
                    }
                }
            }
        }
        out
    }

    pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a OperatorMatrix>) -> Self {
        factors
            .into_iter()
            .fold(Self::identity(1), |acc, f| acc.kron(f))
    }

    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        if ket.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: ket.dim(),
            });
        }
        let amplitudes = (0..self.dim)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(ket.amplitudes())
                    .map(|(m, v)| m * v)
                    .sum()
            })
            .collect();
        Ok(Ket { amplitudes })
    }

    /// Entrywise `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Exactly one entry equal to 1 in every row and column, zeros elsewhere.
    pub fn is_permutation_matrix(&self) -> bool {
        let n = self.dim;
        let mut col_hits = vec![0usize; n];
        for r in 0..n {
            let mut row_hits = 0;
            for (c, &z) in self.row(r).iter().enumerate() {
                if z == ONE {
                    row_hits += 1;
                    col_hits[c] += 1;
                } else if z != ZERO {
                    return false;
                }
            }
            if row_hits != 1 {
                return false;
            }
        }
        col_hits.iter().all(|&h| h == 1)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim)) <= tol
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        let n = self.dim;
        let mut out = OperatorMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        OperatorMatrix {
            dim: self.dim,
            entries,
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        OperatorMatrix {
            dim: self.dim,
            entries,
        }
    }
}

pub fn basis_ket(d: u32, v: TruthValue) -> Result<Ket> {
    if v.level() >= d {
        return Err(Error::LevelOutOfRange {
            level: v.level(),
            d,
        });
    }
    Ok(Ket::basis(d as usize, v.level() as usize))
}

/// `|x_1, ..., x_n>` for a pattern.
pub fn configuration_ket(p: &Pattern) -> Ket {
    let dim = (p.radix() as usize).pow(p.len() as u32);
    Ket::basis(dim, p.rank() as usize)
}

/// `a† e_k = sqrt(k+1) e_{k+1}`, with the top level sent to zero.
pub fn creation(d: u32) -> OperatorMatrix {
    OperatorMatrix::from_real_fn(
        d as usize,
        |r, c| if r == c + 1 { (r as f64).sqrt() } else { 0.0 },
    )
}

/// `a e_k = sqrt(k) e_{k-1}`.
pub fn annihilation(d: u32) -> OperatorMatrix {
    OperatorMatrix::from_real_fn(
        d as usize,
        |r, c| if c == r + 1 { (c as f64).sqrt() } else { 0.0 },
    )
}

/// `E_{x,y} = |y><x|`.
pub fn e_matrix(d: u32, x: u32, y: u32) -> Result<OperatorMatrix> {
    for level in [x, y] {
        if level >= d {
            return Err(Error::LevelOutOfRange { level, d });
        }
    }
    let mut m = OperatorMatrix::zeros(d as usize);
    m.set(y as usize, x as usize, ONE);
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    Creation,
    Annihilation,
}

impl Ladder {
    pub fn adjoint(self) -> Ladder {
        match self {
            Ladder::Creation => Ladder::Annihilation,
            Ladder::Annihilation => Ladder::Creation,
        }
    }

    pub fn matrix(self, d: u32) -> OperatorMatrix {
        match self {
            Ladder::Creation => creation(d),
            Ladder::Annihilation => annihilation(d),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Ladder::Creation => "a+",
            Ladder::Annihilation => "a",
        }
    }
}

/// `v^r (v*)^q v^p u`, applied right to left.
pub fn a_expression(d: u32, u: Ladder, v: Ladder, p: u32, q: u32, r: u32) -> OperatorMatrix {
    let vm = v.matrix(d);
    let vs = v.adjoint().matrix(d);
    let tail = &vm.pow(p) * &u.matrix(d);
    let mid = &vs.pow(q) * &tail;
    &vm.pow(r) * &mid
}

/// One branch of the ladder expression for `E_{i,j}`: a scalar times
/// `A^{p,q,r}_{u,v}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderCase {
    /// Position of the branch in the case list, from 0.
    pub case: usize,
    pub prefactor: f64,
    pub u: Ladder,
    pub v: Ladder,
    pub p: u32,
    pub q: u32,
    pub r: u32,
}

impl LadderCase {
    pub fn evaluate(&self, d: u32) -> OperatorMatrix {
        a_expression(d, self.u, self.v, self.p, self.q, self.r).scale_real(self.prefactor)
    }
}

fn factorial(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Every branch of the six-case formula whose condition holds at `(d, i, j)`,
/// in listed order. Branches whose exponents would be negative are dropped.
pub fn ladder_cases(d: u32, i: u32, j: u32) -> Vec<LadderCase> {
    use Ladder::{Annihilation as A, Creation as C};
    let (dd, ii, jj) = (d as i64, i as i64, j as i64);
    let top = factorial(dd - 1);
    let sj = factorial(jj).sqrt();
    let si = factorial(ii).sqrt();
    let mut raw: Vec<(usize, f64, Ladder, Ladder, i64, i64, i64)> = Vec::new();

    if ii == 0 {
        raw.push((0, sj / top, C, C, dd - 2, dd - 1 - jj, 0));
    }
    if ii == 1 && jj >= 1 {
        raw.push((1, sj / top, A, C, dd - 1, dd - 1 - jj, 0));
    }
    if (ii == 1 && jj == 0 && dd >= 3) || (1 < ii && ii < dd - 2 && jj <= ii) {
        raw.push((2, si / (top * sj), C, C, dd - 2 - ii, dd - 1, jj));
    }
    if (ii == dd - 2 && jj == dd - 1 && dd >= 3) || (1 < ii && ii < dd - 2 && jj > ii) {
        raw.push((3, sj / (top * si), A, A, ii - 1, dd - 1, dd - 1 - jj));
    }
    if ii == dd - 2 && jj <= dd - 2 {
        raw.push((
            4,
            1.0 / (top * factorial(jj) * (dd - 1) as f64).sqrt(),
            C,
            A,
            dd - 1,
            jj,
            0,
        ));
    }
    if ii == dd - 1 {
        raw.push((5, 1.0 / (top * factorial(jj)).sqrt(), A, A, dd - 2, jj, 0));
    }

    raw.into_iter()
        .filter(|&(_, _, _, _, p, q, r)| p >= 0 && q >= 0 && r >= 0)
        .map(|(case, prefactor, u, v, p, q, r)| LadderCase {
            case,
            prefactor,
            u,
            v,
            p: p as u32,
            q: q as u32,
            r: r as u32,
        })
        .collect()
}

/// `E_{i/(d-1), j/(d-1)}` from the first applicable ladder branch.
pub fn e_via_ladder(d: u32, i: u32, j: u32) -> Result<OperatorMatrix> {
    if d < 2 {
        return Err(Error::InvalidRadix(d));
    }
    for level in [i, j] {
        if level >= d {
            return Err(Error::LevelOutOfRange { level, d });
        }
    }
    ladder_cases(d, i, j)
        .first()
        .map(|c| c.evaluate(d))
        .ok_or(Error::FormulaGap { d, i, j })
}

/// Outcome of comparing one `(i, j)` against `|j><i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderEntry {
    pub i: u32,
    pub j: u32,
    /// Branch used (the first applicable one), absent for a gap.
    pub case: Option<usize>,
    /// All applicable branches.
    pub matching_cases: Vec<usize>,
    /// Error of the first applicable branch against the direct matrix.
    pub error: Option<f64>,
    /// Largest pairwise difference among applicable branches.
    pub overlap_spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderReport {
    pub d: u32,
    pub tolerance: f64,
    pub entries: Vec<LadderEntry>,
    pub mismatches: Vec<(u32, u32)>,
    pub gaps: Vec<(u32, u32)>,
    pub inconsistent_overlaps: Vec<(u32, u32)>,
}

impl LadderReport {
    pub fn clean(&self) -> bool {
        self.mismatches.is_empty() && self.gaps.is_empty() && self.inconsistent_overlaps.is_empty()
    }
}

/// Sweeps every `(i, j)` for radix `d`, comparing each applicable branch to
/// the direct `|j><i|`.
pub fn ladder_report(d: u32, tolerance: f64) -> Result<LadderReport> {
    if d < 2 {
        return Err(Error::InvalidRadix(d));
    }
    let mut report = LadderReport {
        d,
        tolerance,
        entries: Vec::new(),
        mismatches: Vec::new(),
        gaps: Vec::new(),
        inconsistent_overlaps: Vec::new(),
    };
    for i in 0..d {
        for j in 0..d {
            let direct = e_matrix(d, i, j)?;
            let cases = ladder_cases(d, i, j);
            let evaluated: Vec<OperatorMatrix> = cases.iter().map(|c| c.evaluate(d)).collect();
            let error = evaluated.first().map(|m| m.max_abs_diff(&direct));
            let mut spread: f64 = 0.0;
            for a in 0..evaluated.len() {
                for b in a + 1..evaluated.len() {
                    spread = spread.max(evaluated[a].max_abs_diff(&evaluated[b]));
                }
            }
            match error {
                None => report.gaps.push((i, j)),
                Some(e) if e > tolerance => report.mismatches.push((i, j)),
                Some(_) => {}
            }
            if spread > tolerance {
                report.inconsistent_overlaps.push((i, j));
            }
            report.entries.push(LadderEntry {
                i,
                j,
                case: cases.first().map(|c| c.case),
                matching_cases: cases.iter().map(|c| c.case).collect(),
                error,
                overlap_spread: spread,
            });
        }
    }
    Ok(report)
}

fn check_square(g: &Gate) -> Result<usize> {
    if g.inputs() != g.outputs() {
        return Err(Error::NonSquareGate {
            n: g.inputs(),
            m: g.outputs(),
        });
    }
    let dim = (g.radix() as u128)
        .checked_pow(g.inputs() as u32)
        .unwrap_or(u128::MAX);
    if dim > MAX_OPERATOR_DIM as u128 {
        return Err(Error::DimensionTooLarge {
            dim,
            limit: MAX_OPERATOR_DIM,
        });
    }
    Ok(dim as usize)
}

/// `sum over rows of E_{x1,y1} ⊗ ... ⊗ E_{xn,yn}`. Each term is the single
/// entry at (rank of output, rank of input), so terms are added in row order
/// without forming the products.
pub fn gate_operator(g: &Gate) -> Result<OperatorMatrix> {
    let dim = check_square(g)?;
    let mut op = OperatorMatrix::zeros(dim);
    for input in 0..dim {
        let output = rank_of(g.radix(), g.output_of_rank(input)) as usize;
        op.entries[output * dim + input] += ONE;
    }
    Ok(op)
}

fn boolean_line_operators() -> (OperatorMatrix, OperatorMatrix, OperatorMatrix) {
    (OperatorMatrix::identity(2), creation(2), annihilation(2))
}

/// `Id⊗Id⊗Id − c†c⊗aa†⊗b†b + (Id⊗a†⊗b)(c†c⊗aa†⊗b†b)`.
pub fn cup_operator_formula() -> OperatorMatrix {
    let (id, up, down) = boolean_line_operators();
    let projector = OperatorMatrix::kron_all([&(&up * &down), &(&down * &up), &(&up * &down)]);
    let mover = OperatorMatrix::kron_all([&id, &up, &down]);
    let identity = OperatorMatrix::kron_all([&id, &id, &id]);
    &(&identity - &projector) + &(&mover * &projector)
}

/// `Id⊗Id⊗Id − c†c⊗a†a⊗bb† + (Id⊗a⊗b†)(c†c⊗a†a⊗bb†)`.
pub fn cdown_operator_formula() -> OperatorMatrix {
    let (id, up, down) = boolean_line_operators();
    let projector = OperatorMatrix::kron_all([&(&up * &down), &(&up * &down), &(&down * &up)]);
    let mover = OperatorMatrix::kron_all([&id, &down, &up]);
    let identity = OperatorMatrix::kron_all([&id, &id, &id]);
    &(&identity - &projector) + &(&mover * &projector)
}

/// Basis configurations on which an operator disagrees with a gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorVerification {
    pub passed: bool,
    pub failing: Vec<usize>,
}

/// Checks `||op |x> - |g(x)>||_inf <= tol` for every basis configuration.
pub fn verify_operator(g: &Gate, op: &OperatorMatrix, tol: f64) -> Result<OperatorVerification> {
    let dim = check_square(g)?;
    if op.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: op.dim(),
        });
    }
    let mut failing = Vec::new();
    for input in 0..dim {
        let expected = Ket::basis(dim, rank_of(g.radix(), g.output_of_rank(input)) as usize);
        // column `input` of op is op |input>
        let err = (0..dim)
            .map(|r| (op.get(r, input) - expected.amplitudes()[r]).norm())
            .fold(0.0, f64::max);
        if err > tol {
            failing.push(input);
        }
    }
    Ok(OperatorVerification {
        passed: failing.is_empty(),
        failing,
    })
}
