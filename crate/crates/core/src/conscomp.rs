//! Conservative computations and the ConsComp feasibility problem.
//!
//! A computation is a multiset of integer energy deltas `e_i` summing to
//! zero. Executed in some order, the energy held in the gate's store after
//! step `i` is the prefix sum `st_i`; an order is `C`-feasible when every
//! prefix sum lies in `[0, C]`.
//!
//! The exact solver is a subset dynamic program: the store level after
//! executing a set `S` of steps is `sum(S)` whatever their order, so a set is
//! reachable iff its sum is in range and it is reachable from some subset one
//! element smaller.

use num_integer::Integer;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::logic::{EnergyModel, Gate, Pattern, Rational};

/// Default element limit for [`solve_conscomp`].
pub const DEFAULT_DP_LIMIT: usize = 24;
/// Hard ceiling for any configured DP limit (`2^k` bytes of state).
pub const MAX_DP_LIMIT: usize = 30;
/// Factorial guard for [`brute_force_solve`].
pub const BRUTE_FORCE_LIMIT: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsCompInstance {
    e: Vec<i64>,
    capacity: u64,
}

impl ConsCompInstance {
    pub fn new(e: Vec<i64>, capacity: u64) -> Result<Self> {
        let sum: i64 = e.iter().sum();
        if sum != 0 {
            return Err(Error::NotConservative { sum });
        }
        Ok(Self { e, capacity })
    }

    pub fn deltas(&self) -> &[i64] {
        &self.e
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    pub fn with_capacity(&self, capacity: u64) -> Self {
        Self {
            e: self.e.clone(),
            capacity,
        }
    }
}

/// An execution order: `order[j]` is the index of the `j`-th step executed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            match seen.get_mut(i) {
                None => {
                    return Err(Error::MalformedPermutation(format!(
                        "index {i} out of range for {} elements",
                        order.len()
                    )))
                }
                Some(s) if *s => {
                    return Err(Error::MalformedPermutation(format!("index {i} repeated")))
                }
                Some(s) => *s = true,
            }
        }
        Ok(Self { order })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            order: (0..k).collect(),
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Energy held in the store after each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredTrace {
    pub st: Vec<i64>,
}

impl StoredTrace {
    pub fn within(&self, capacity: u64) -> bool {
        self.st.iter().all(|&s| s >= 0 && s as u64 <= capacity)
    }

    pub fn last(&self) -> Option<i64> {
        self.st.last().copied()
    }
}

/// Integer deltas together with the energy carried by one integer unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyDeltas {
    pub deltas: Vec<i64>,
    pub unit: Rational,
}

/// `e_i = E(x_i) - E(g(x_i))`, rescaled to integers. Deltas are first taken
/// in `delta` units, then multiplied by the lcm of their denominators.
pub fn energy_deltas(g: &Gate, model: &EnergyModel, inputs: &[Pattern]) -> Result<EnergyDeltas> {
    if g.radix() != model.radix() {
        return Err(Error::RadixMismatch {
            expected: g.radix(),
            found: model.radix(),
        });
    }
    let mut raw = Vec::with_capacity(inputs.len());
    for x in inputs {
        let y = g.apply(x)?;
        let diff = model.energy_of_pattern(x)? - model.energy_of_pattern(&y)?;
        raw.push(diff / model.delta());
    }
    let scale = raw.iter().fold(1i64, |acc, r| acc.lcm(r.denom()));
    let deltas = raw
        .iter()
        .map(|r| (r * Rational::from(scale)).to_integer())
        .collect();
    Ok(EnergyDeltas {
        deltas,
        unit: model.delta() / Rational::from(scale),
    })
}

fn check_permutation(e: &[i64], p: &Permutation) -> Result<()> {
    if p.len() != e.len() {
        return Err(Error::MalformedPermutation(format!(
            "permutation of {} indices for {} deltas",
            p.len(),
            e.len()
        )));
    }
    Ok(())
}

pub fn stored_sequence(e: &[i64], p: &Permutation) -> Result<StoredTrace> {
    check_permutation(e, p)?;
    let st = p
        .order()
        .iter()
        .scan(0i64, |acc, &i| {
            *acc += e[i];
            Some(*acc)
        })
        .collect();
    Ok(StoredTrace { st })
}

pub fn is_feasible(e: &[i64], p: &Permutation, capacity: u64) -> Result<bool> {
    Ok(stored_sequence(e, p)?.within(capacity))
}

/// Subset sums in O(1) per lookup from two half tables.
struct SplitSums {
    low_bits: usize,
    low: Vec<i64>,
    high: Vec<i64>,
}

impl SplitSums {
    fn new(e: &[i64]) -> Self {
        let low_bits = e.len() / 2;
        let table = |part: &[i64]| {
            let mut sums = vec![0i64; 1 << part.len()];
            for mask in 1..sums.len() {
                let bit = mask.trailing_zeros() as usize;
                sums[mask] = sums[mask & (mask - 1)] + part[bit];
            }
            sums
        };
        Self {
            low_bits,
            low: table(&e[..low_bits]),
            high: table(&e[low_bits..]),
        }
    }

    fn sum(&self, mask: usize) -> i64 {
        self.low[mask & ((1 << self.low_bits) - 1)] + self.high[mask >> self.low_bits]
    }
}

/// Exact subset-DP solver with a configurable element limit.
#[derive(Debug, Clone, Copy)]
pub struct SubsetDp {
    limit: usize,
}

impl Default for SubsetDp {
    fn default() -> Self {
        Self {
            limit: DEFAULT_DP_LIMIT,
        }
    }
}

impl SubsetDp {
    pub fn with_limit(limit: usize) -> Self {
        Self {
            limit: limit.min(MAX_DP_LIMIT),
        }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn reachable(&self, inst: &ConsCompInstance) -> Result<Vec<bool>> {
        let k = inst.len();
        if k > self.limit {
            return Err(Error::InstanceTooLarge {
                k,
                limit: self.limit,
            });
        }
        let sums = SplitSums::new(inst.deltas());
        let cap = inst.capacity() as i64;
        let mut reach = vec![false; 1 << k];
        reach[0] = true;
        for mask in 1..reach.len() {
            let s = sums.sum(mask);
            if s < 0 || s > cap {
                continue;
            }
            let mut rest = mask;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                if reach[mask ^ bit] {
                    reach[mask] = true;
                    break;
                }
                rest ^= bit;
            }
        }
        Ok(reach)
    }

    pub fn is_solvable(&self, inst: &ConsCompInstance) -> Result<bool> {
        let reach = self.reachable(inst)?;
        Ok(reach[reach.len() - 1])
    }

    /// A feasible order, reconstructed from the full set backwards by always
    /// removing the smallest index whose removal stays reachable.
    pub fn solve(&self, inst: &ConsCompInstance) -> Result<Option<Permutation>> {
        let reach = self.reachable(inst)?;
        let mut mask = reach.len() - 1;
        if !reach[mask] {
            return Ok(None);
        }
        let mut reversed = Vec::with_capacity(inst.len());
        while mask != 0 {
            let mut rest = mask;
            loop {
                let bit = rest & rest.wrapping_neg();
                if reach[mask ^ bit] {
                    reversed.push(bit.trailing_zeros() as usize);
                    mask ^= bit;
                    break;
                }
                rest ^= bit;
            }
        }
        reversed.reverse();
        Ok(Some(Permutation { order: reversed }))
    }
}

pub fn solve_conscomp(inst: &ConsCompInstance) -> Result<Option<Permutation>> {
    SubsetDp::default().solve(inst)
}

/// Exhaustive search of orders in lexicographic index order; the first
/// feasible one is returned. Prefixes that already leave `[0, C]` are cut,
/// which cannot change the first feasible permutation found.
pub fn brute_force_solve(inst: &ConsCompInstance) -> Result<Option<Permutation>> {
    let k = inst.len();
    if k > BRUTE_FORCE_LIMIT {
        return Err(Error::InstanceTooLarge {
            k,
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    fn extend(e: &[i64], cap: i64, level: i64, used: &mut [bool], order: &mut Vec<usize>) -> bool {
        if order.len() == e.len() {
            return true;
        }
        for i in 0..e.len() {
            if used[i] {
                continue;
            }
            let next = level + e[i];
            if next < 0 || next > cap {
                continue;
            }
            used[i] = true;
            order.push(i);
            if extend(e, cap, next, used, order) {
                return true;
            }
            order.pop();
            used[i] = false;
        }
        false
    }

    let mut used = vec![false; k];
    let mut order = Vec::with_capacity(k);
    let found = extend(
        inst.deltas(),
        inst.capacity() as i64,
        0,
        &mut used,
        &mut order,
    );
    Ok(found.then_some(Permutation { order }))
}

/// Smallest capacity admitting a feasible order.
pub fn min_capacity(e: &[i64]) -> Result<u64> {
    min_capacity_with(e, SubsetDp::default())
}

pub fn min_capacity_with(e: &[i64], solver: SubsetDp) -> Result<u64> {
    let inst = ConsCompInstance::new(e.to_vec(), 0)?;
    // any feasible store must hold the largest single gain; all gains first is always feasible
    let mut lo = e.iter().copied().max().unwrap_or(0).max(0) as u64;
    let mut hi = e.iter().filter(|&&x| x > 0).sum::<i64>() as u64;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if solver.is_solvable(&inst.with_capacity(mid))? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// The canonical negative instance used for odd-sum Partition inputs.
pub fn canonical_negative_instance() -> ConsCompInstance {
    ConsCompInstance {
        e: vec![2, -1, -1],
        capacity: 1,
    }
}

/// Maps a Partition instance `A` with sum `m` to `({-a_1, ..., -a_k, m/2, m/2}, m/2)`.
pub fn reduce_partition(a: &[i64]) -> Result<ConsCompInstance> {
    if a.is_empty() {
        return Err(Error::InvalidPartition("empty set".into()));
    }
    if let Some(bad) = a.iter().find(|&&x| x <= 0) {
        return Err(Error::InvalidPartition(format!(
            "nonpositive element {bad}"
        )));
    }
    let m: i64 = a.iter().sum();
    if m.is_odd() {
        return Ok(canonical_negative_instance());
    }
    let half = m / 2;
    let mut e: Vec<i64> = a.iter().map(|x| -x).collect();
    e.extend([half, half]);
    Ok(ConsCompInstance {
        e,
        capacity: half as u64,
    })
}

/// Seeded instance with `k` deltas in `[-bound, bound]` summing to zero and a
/// capacity uniform in `[0, sum of positive deltas]`.
pub fn random_instance(k: usize, bound: i64, seed: u64) -> ConsCompInstance {
    let k = k.max(1);
    let bound = bound.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = loop {
        let mut e: Vec<i64> = (0..k - 1).map(|_| rng.gen_range(-bound..=bound)).collect();
        let last = -e.iter().sum::<i64>();
        if last.abs() <= bound {
            e.push(last);
            break e;
        }
    };
    let positive: i64 = e.iter().filter(|x| x.is_positive()).sum();
    let capacity = rng.gen_range(0..=positive) as u64;
    ConsCompInstance { e, capacity }
}
