//! Truth values, patterns, energy models and truth-table gates.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact energy arithmetic.
pub type Rational = num_rational::Ratio<i64>;

/// Largest truth table we are willing to materialise (rows).
pub const MAX_TABLE_ROWS: u128 = 1 << 24;

fn check_radix(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidRadix(d));
    }
    Ok(())
}

/// An element of `L_d`, stored as its level index. Level `l` stands for the
/// rational truth value `l / (d - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthValue {
    level: u32,
    d: u32,
}

impl TruthValue {
    pub fn new(level: u32, d: u32) -> Result<Self> {
        check_radix(d)?;
        if level >= d {
            return Err(Error::LevelOutOfRange { level, d });
        }
        Ok(Self { level, d })
    }

    pub fn falsity(d: u32) -> Result<Self> {
        Self::new(0, d)
    }

    pub fn truth(d: u32) -> Result<Self> {
        check_radix(d)?;
        Self::new(d - 1, d)
    }

    pub fn level(self) -> u32 {
        self.level
    }

    pub fn radix(self) -> u32 {
        self.d
    }

    pub fn is_top(self) -> bool {
        self.level == self.d - 1
    }

    /// The rational truth value `level / (d - 1)`.
    pub fn value(self) -> Rational {
        Rational::new(self.level as i64, (self.d - 1) as i64)
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A tuple over `L_d` with a single shared radix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    d: u32,
    levels: Vec<u32>,
}

impl Pattern {
    pub fn new(d: u32, levels: Vec<u32>) -> Result<Self> {
        check_radix(d)?;
        if let Some(&level) = levels.iter().find(|&&l| l >= d) {
            return Err(Error::LevelOutOfRange { level, d });
        }
        Ok(Self { d, levels })
    }

    pub fn empty(d: u32) -> Result<Self> {
        Self::new(d, Vec::new())
    }

    pub fn from_values(values: &[TruthValue]) -> Result<Self> {
        let Some(first) = values.first() else {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: 0,
            });
        };
        let d = first.radix();
        let mut levels = Vec::with_capacity(values.len());
        for v in values {
            if v.radix() != d {
                return Err(Error::RadixMismatch {
                    expected: d,
                    found: v.radix(),
                });
            }
            levels.push(v.level());
        }
        Ok(Self { d, levels })
    }

    /// Pattern of arity `n` whose lexicographic rank is `rank`.
    pub fn from_rank(d: u32, n: usize, mut rank: u64) -> Self {
        let mut levels = vec![0; n];
        for slot in levels.iter_mut().rev() {
            *slot = (rank % d as u64) as u32;
            rank /= d as u64;
        }
        Self { d, levels }
    }

    /// All `d^n` patterns of arity `n` in lexicographic order.
    pub fn all(d: u32, n: usize) -> Result<impl Iterator<Item = Pattern>> {
        let rows = row_count(d, n)?;
        Ok((0..rows).map(move |r| Pattern::from_rank(d, n, r)))
    }

    pub fn radix(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn into_levels(self) -> Vec<u32> {
        self.levels
    }

    pub fn get(&self, i: usize) -> Option<TruthValue> {
        self.levels
            .get(i)
            .map(|&level| TruthValue { level, d: self.d })
    }

    pub fn values(&self) -> impl Iterator<Item = TruthValue> + '_ {
        self.levels
            .iter()
            .map(|&level| TruthValue { level, d: self.d })
    }

    pub fn level_sum(&self) -> u64 {
        self.levels.iter().map(|&l| l as u64).sum()
    }

    /// Lexicographic rank with the leftmost line most significant.
    pub fn rank(&self) -> u64 {
        rank_of(self.d, &self.levels)
    }

    pub fn concat(&self, other: &Pattern) -> Result<Pattern> {
        if other.d != self.d {
            return Err(Error::RadixMismatch {
                expected: self.d,
                found: other.d,
            });
        }
        let mut levels = self.levels.clone();
        levels.extend_from_slice(&other.levels);
        Ok(Pattern { d: self.d, levels })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn rank_of(d: u32, levels: &[u32]) -> u64 {
    levels
        .iter()
        .fold(0u64, |acc, &l| acc * d as u64 + l as u64)
}

/// `d^n`, refusing tables beyond [`MAX_TABLE_ROWS`].
pub fn row_count(d: u32, n: usize) -> Result<u64> {
    check_radix(d)?;
    let rows = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if rows > MAX_TABLE_ROWS {
        return Err(Error::TableTooLarge { rows });
    }
    Ok(rows as u64)
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::InvalidRational(s.to_string()))
}

/// Equispaced positive energy levels: level `l` carries `epsilon0 + delta * l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnergyModel {
    epsilon0: Rational,
    delta: Rational,
    d: u32,
}

impl EnergyModel {
    pub fn new(epsilon0: Rational, delta: Rational, d: u32) -> Result<Self> {
        check_radix(d)?;
        if epsilon0 <= Rational::zero() || delta <= Rational::zero() {
            return Err(Error::NonPositiveEnergy);
        }
        Ok(Self { epsilon0, delta, d })
    }

    /// The canonical model `epsilon0 = delta = 1`.
    pub fn unit(d: u32) -> Result<Self> {
        Self::new(Rational::one(), Rational::one(), d)
    }

    pub fn from_integers(epsilon0: i64, delta: i64, d: u32) -> Result<Self> {
        Self::new(
            Rational::from_integer(epsilon0),
            Rational::from_integer(delta),
            d,
        )
    }

    pub fn epsilon0(&self) -> Rational {
        self.epsilon0
    }

    pub fn delta(&self) -> Rational {
        self.delta
    }

    pub fn radix(&self) -> u32 {
        self.d
    }

    /// Energy of the truth value 1.
    pub fn epsilon1(&self) -> Rational {
        self.epsilon0 + self.delta * Rational::from_integer((self.d - 1) as i64)
    }

    fn energy_of_level(&self, level: u32) -> Rational {
        self.epsilon0 + self.delta * Rational::from_integer(level as i64)
    }

    pub fn energy_of_value(&self, v: TruthValue) -> Result<Rational> {
        if v.radix() != self.d {
            return Err(Error::RadixMismatch {
                expected: self.d,
                found: v.radix(),
            });
        }
        Ok(self.energy_of_level(v.level()))
    }

    pub fn energy_of_pattern(&self, p: &Pattern) -> Result<Rational> {
        if p.radix() != self.d {
            return Err(Error::RadixMismatch {
                expected: self.d,
                found: p.radix(),
            });
        }
        Ok(p.levels().iter().map(|&l| self.energy_of_level(l)).sum())
    }

    /// `epsilon0 / delta` as an integer, when it is one.
    pub fn unit_scale(&self) -> Result<i64> {
        let beta = self.epsilon0 / self.delta;
        if !beta.is_integer() || beta <= Rational::zero() {
            return Err(Error::NotUnitScalable {
                ratio: beta.to_string(),
            });
        }
        Ok(beta.to_integer())
    }
}

/// A total `(n, m, d)` truth table. Row `r` holds the output for the input
/// pattern of lexicographic rank `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    d: u32,
    n: usize,
    m: usize,
    rows: usize,
    table: Vec<u32>,
}

impl Gate {
    /// Builds a gate from explicit rows in any order, checking totality.
    pub fn from_rows<I>(d: u32, n: usize, m: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Pattern, Pattern)>,
    {
        let count = row_count(d, n)? as usize;
        let mut table = vec![0u32; count * m];
        let mut seen = vec![false; count];
        for (input, output) in rows {
            for p in [&input, &output] {
                if p.radix() != d {
                    return Err(Error::RadixMismatch {
                        expected: d,
                        found: p.radix(),
                    });
                }
            }
            if input.len() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: input.len(),
                });
            }
            if output.len() != m {
                return Err(Error::ArityMismatch {
                    expected: m,
                    found: output.len(),
                });
            }
            let r = input.rank() as usize;
            if std::mem::replace(&mut seen[r], true) {
                return Err(Error::DuplicateInput {
                    input: input.into_levels(),
                });
            }
            table[r * m..(r + 1) * m].copy_from_slice(output.levels());
        }
        if let Some(r) = seen.iter().position(|s| !s) {
            let missing = Pattern::from_rank(d, n, r as u64).into_levels();
            return Err(Error::IncompleteTable { missing });
        }
        Ok(Self {
            d,
            n,
            m,
            rows: count,
            table,
        })
    }

    /// Tabulates `f` over every input pattern.
    pub fn from_fn<F>(d: u32, n: usize, m: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[u32]) -> Vec<u32>,
    {
        let rows = row_count(d, n)? as usize;
        let mut table = Vec::with_capacity(rows * m);
        for input in Pattern::all(d, n)? {
            let out = f(input.levels());
            if out.len() != m {
                return Err(Error::ArityMismatch {
                    expected: m,
                    found: out.len(),
                });
            }
            if let Some(&level) = out.iter().find(|&&l| l >= d) {
                return Err(Error::LevelOutOfRange { level, d });
            }
            table.extend(out);
        }
        Ok(Self {
            d,
            n,
            m,
            rows,
            table,
        })
    }

    pub fn identity(d: u32, n: usize) -> Result<Self> {
        Self::from_fn(d, n, n, |x| x.to_vec())
    }

    /// The `(n, n, d)` gate routing input line `perm[i]` to output line `i`.
    pub fn wiring(d: u32, perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(Error::MalformedPermutation(format!("{perm:?}")));
        }
        Self::from_fn(d, n, n, |x| perm.iter().map(|&p| x[p]).collect())
    }

    pub fn radix(&self) -> u32 {
        self.d
    }

    pub fn inputs(&self) -> usize {
        self.n
    }

    pub fn outputs(&self) -> usize {
        self.m
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    /// Output levels for the input of the given rank.
    pub fn output_of_rank(&self, rank: usize) -> &[u32] {
        &self.table[rank * self.m..(rank + 1) * self.m]
    }

    pub fn apply(&self, p: &Pattern) -> Result<Pattern> {
        if p.radix() != self.d {
            return Err(Error::RadixMismatch {
                expected: self.d,
                found: p.radix(),
            });
        }
        if p.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        let out = self.output_of_rank(p.rank() as usize);
        Ok(Pattern {
            d: self.d,
            levels: out.to_vec(),
        })
    }

    /// `(input, output)` pairs in lexicographic input order.
    pub fn rows(&self) -> impl Iterator<Item = (Pattern, Pattern)> + '_ {
        (0..self.row_count()).map(move |r| {
            let input = Pattern::from_rank(self.d, self.n, r as u64);
            let output = Pattern {
                d: self.d,
                levels: self.output_of_rank(r).to_vec(),
            };
            (input, output)
        })
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &Gate) -> Result<Gate> {
        if then.d != self.d {
            return Err(Error::RadixMismatch {
                expected: self.d,
                found: then.d,
            });
        }
        if then.n != self.m {
            return Err(Error::ArityMismatch {
                expected: self.m,
                found: then.n,
            });
        }
        Gate::from_fn(self.d, self.n, then.m, |x| {
            let mid = self.output_of_rank(rank_of(self.d, x) as usize);
            then.output_of_rank(rank_of(self.d, mid) as usize).to_vec()
        })
    }

    pub fn is_bijective(&self) -> bool {
        if self.n != self.m {
            return false;
        }
        let mut hit = vec![false; self.row_count()];
        (0..self.row_count()).all(|r| {
            let out = rank_of(self.d, self.output_of_rank(r)) as usize;
            !std::mem::replace(&mut hit[out], true)
        })
    }
}

/// The Boolean Fredkin gate: line 1 controls whether lines 2 and 3 swap.
pub fn fredkin_gate() -> Gate {
    Gate::from_fn(2, 3, 3, |x| {
        let (c, a, b) = (x[0] == 1, x[1] == 1, x[2] == 1);
        let y2 = (!c && a) || (c && b);
        let y3 = (c && a) || (!c && b);
        vec![x[0], y2 as u32, y3 as u32]
    })
    .expect("Fredkin table is well formed")
}
