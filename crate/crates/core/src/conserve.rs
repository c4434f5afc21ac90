//! Energy conservation of gates and padded conservative extensions.
//!
//! A gate is conservative under a model when every row carries the same total
//! energy on its outputs as on its inputs. Any gate can be made conservative
//! by adding constant input lines that supply missing energy and extra output
//! lines that absorb the surplus.
//!
//! The extension works in *units*: with `beta = epsilon0 / delta` a positive
//! integer, the energy of a pattern of arity `k` is `delta * (beta * k + sum of
//! levels)`, so every energy difference is an integer number of `delta`s.

use crate::error::{Error, Result};
use crate::logic::{EnergyModel, Gate, Pattern, Rational};

/// First row (in lexicographic order) where a gate fails to conserve energy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub input: Pattern,
    pub input_energy: Rational,
    pub output_energy: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConservativenessReport {
    pub conservative: bool,
    pub witness: Option<Violation>,
}

fn check_model(g: &Gate, model: &EnergyModel) -> Result<()> {
    if g.radix() != model.radix() {
        return Err(Error::RadixMismatch {
            expected: g.radix(),
            found: model.radix(),
        });
    }
    Ok(())
}

fn check_rows<I>(model: &EnergyModel, rows: I) -> Result<ConservativenessReport>
where
    I: IntoIterator<Item = (Pattern, Pattern)>,
{
    for (input, output) in rows {
        let input_energy = model.energy_of_pattern(&input)?;
        let output_energy = model.energy_of_pattern(&output)?;
        if input_energy != output_energy {
            return Ok(ConservativenessReport {
                conservative: false,
                witness: Some(Violation {
                    input,
                    input_energy,
                    output_energy,
                }),
            });
        }
    }
    Ok(ConservativenessReport {
        conservative: true,
        witness: None,
    })
}

/// Exact check of `E(x) = E(g(x))` on every row.
pub fn is_conservative(g: &Gate, model: &EnergyModel) -> Result<ConservativenessReport> {
    check_model(g, model)?;
    check_rows(model, g.rows())
}

/// Bounds `(epsilon0 / epsilon1, epsilon1 / epsilon0)` on `m / n` for any
/// conservative gate.
pub fn ratio_bounds(model: &EnergyModel) -> (Rational, Rational) {
    let e0 = model.epsilon0();
    let e1 = model.epsilon1();
    (e0 / e1, e1 / e0)
}

/// Energy of a pattern in `delta` units, given `beta = epsilon0 / delta`.
fn unit_energy(beta: i64, p: &Pattern) -> i64 {
    beta * p.len() as i64 + p.level_sum() as i64
}

/// Per-row unit difference `output - input`.
fn unit_deltas(g: &Gate, beta: i64) -> impl Iterator<Item = i64> + '_ {
    g.rows()
        .map(move |(x, y)| unit_energy(beta, &y) - unit_energy(beta, &x))
}

/// `(O, Z)`: the largest energy surplus and deficit of any row, in units.
pub fn excess_deficit(g: &Gate, model: &EnergyModel) -> Result<(u64, u64)> {
    check_model(g, model)?;
    let beta = model.unit_scale()?;
    let (mut o, mut z) = (0i64, 0i64);
    for delta in unit_deltas(g, beta) {
        o = o.max(delta);
        z = z.max(-delta);
    }
    Ok((o as u64, z as u64))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionReport {
    pub gate: Gate,
    pub o_units: u64,
    pub z_units: u64,
    /// Input lines held at the top level.
    pub ones_pads: usize,
    /// Input lines held at level 0.
    pub zeros_pads: usize,
}

impl ExtensionReport {
    pub fn original_inputs(&self) -> usize {
        self.gate.inputs() - self.ones_pads - self.zeros_pads
    }

    /// `(x, top..., 0...)`, the only inputs the extension is specified on.
    pub fn padded_input(&self, x: &Pattern) -> Result<Pattern> {
        let d = self.gate.radix();
        if x.len() != self.original_inputs() {
            return Err(Error::ArityMismatch {
                expected: self.original_inputs(),
                found: x.len(),
            });
        }
        let mut pads = vec![d - 1; self.ones_pads];
        pads.resize(self.ones_pads + self.zeros_pads, 0);
        x.concat(&Pattern::new(d, pads)?)
    }

    /// Conservativeness restricted to correctly padded inputs.
    pub fn check_on_contract(&self, model: &EnergyModel) -> Result<ConservativenessReport> {
        check_model(&self.gate, model)?;
        let d = self.gate.radix();
        let mut rows = Vec::new();
        for x in Pattern::all(d, self.original_inputs())? {
            let padded = self.padded_input(&x)?;
            let out = self.gate.apply(&padded)?;
            rows.push((padded, out));
        }
        check_rows(model, rows)
    }
}

/// Greedy big-endian spread of `units` over `lines` lines of capacity `top`.
fn encode_units(mut units: u64, lines: usize, top: u32) -> Vec<u32> {
    (0..lines)
        .map(|_| {
            let level = units.min(top as u64);
            units -= level;
            level as u32
        })
        .collect()
}

/// Builds `G_f` from `f`: appends `A = ceil(O/(d-1))` lines fixed at the top
/// level and `B = ceil(Z/(d-1))` lines fixed at 0. On a correctly padded input
/// the output is `(f(x), pad)` where the pad absorbs `A(d-1) - D(x)` units,
/// `D(x)` being the row's unit difference. Every other input maps to the
/// all-zeros pattern.
pub fn conservative_extension(g: &Gate, model: &EnergyModel) -> Result<ExtensionReport> {
    let (o_units, z_units) = excess_deficit(g, model)?;
    let beta = model.unit_scale()?;
    let d = g.radix();
    let top = d - 1;
    let ones_pads = o_units.div_ceil(top as u64) as usize;
    let zeros_pads = z_units.div_ceil(top as u64) as usize;
    let pads = ones_pads + zeros_pads;
    let (n, m) = (g.inputs(), g.outputs());
    let supplied = ones_pads as i64 * top as i64;

    let gate = Gate::from_fn(d, n + pads, m + pads, |x| {
        let (orig, pad) = x.split_at(n);
        let on_contract =
            pad[..ones_pads].iter().all(|&l| l == top) && pad[ones_pads..].iter().all(|&l| l == 0);
        if !on_contract {
            return vec![0; m + pads];
        }
        let y = g.output_of_rank(crate::logic::rank_of(d, orig) as usize);
        let diff = (beta * m as i64 + y.iter().map(|&l| l as i64).sum::<i64>())
            - (beta * n as i64 + orig.iter().map(|&l| l as i64).sum::<i64>());
        let absorbed = supplied - diff;
        debug_assert!(absorbed >= 0 && absorbed <= pads as i64 * top as i64);
        let mut out = y.to_vec();
        out.extend(encode_units(absorbed as u64, pads, top));
        out
    })?;

    Ok(ExtensionReport {
        gate,
        o_units,
        z_units,
        ones_pads,
        zeros_pads,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::fredkin_gate;

    fn pat(d: u32, levels: &[u32]) -> Pattern {
        Pattern::new(d, levels.to_vec()).unwrap()
    }

    fn not_gate() -> Gate {
        Gate::from_fn(2, 1, 1, |x| vec![1 - x[0]]).unwrap()
    }

    fn and_gate() -> Gate {
        Gate::from_fn(2, 2, 1, |x| vec![x[0] & x[1]]).unwrap()
    }

    #[test]
    fn fredkin_conserves() {
        let r = is_conservative(&fredkin_gate(), &EnergyModel::unit(2).unwrap()).unwrap();
        assert!(r.conservative);
        assert!(r.witness.is_none());
    }

    #[test]
    fn not_gate_violates_on_first_row() {
        let r = is_conservative(&not_gate(), &EnergyModel::unit(2).unwrap()).unwrap();
        assert!(!r.conservative);
        let w = r.witness.unwrap();
        assert_eq!(w.input, pat(2, &[0]));
        assert_eq!(w.input_energy, Rational::from(1));
        assert_eq!(w.output_energy, Rational::from(2));
    }

    #[test]
    fn identity_on_ternary_pairs_conserves() {
        let id = Gate::identity(3, 2).unwrap();
        assert!(
            is_conservative(&id, &EnergyModel::unit(3).unwrap())
                .unwrap()
                .conservative
        );
    }

    #[test]
    fn model_radix_must_match() {
        let err = is_conservative(&fredkin_gate(), &EnergyModel::unit(3).unwrap()).unwrap_err();
        assert!(err.to_string().contains("radix mismatch"));
    }

    #[test]
    fn ratio_bounds_examples() {
        let r = |a, b| Rational::new(a, b);
        assert_eq!(
            ratio_bounds(&EnergyModel::unit(3).unwrap()),
            (r(1, 3), r(3, 1))
        );
        assert_eq!(
            ratio_bounds(&EnergyModel::unit(2).unwrap()),
            (r(1, 2), r(2, 1))
        );
        assert_eq!(
            ratio_bounds(&EnergyModel::from_integers(2, 1, 2).unwrap()),
            (r(2, 3), r(3, 2))
        );
    }

    #[test]
    fn excess_deficit_examples() {
        let unit = EnergyModel::unit(2).unwrap();
        assert_eq!(excess_deficit(&and_gate(), &unit).unwrap(), (0, 2));
        assert_eq!(excess_deficit(&not_gate(), &unit).unwrap(), (1, 1));
        assert_eq!(excess_deficit(&fredkin_gate(), &unit).unwrap(), (0, 0));
    }

    #[test]
    fn excess_deficit_needs_integer_beta() {
        let m = EnergyModel::new(Rational::new(1, 2), Rational::from(1), 2).unwrap();
        let err = excess_deficit(&and_gate(), &m).unwrap_err();
        assert!(matches!(err, Error::NotUnitScalable { .. }));
    }

    #[test]
    fn and_extension_rows() {
        let ext = conservative_extension(&and_gate(), &EnergyModel::unit(2).unwrap()).unwrap();
        assert_eq!(
            (ext.o_units, ext.z_units, ext.ones_pads, ext.zeros_pads),
            (0, 2, 0, 2)
        );
        assert_eq!((ext.gate.inputs(), ext.gate.outputs()), (4, 3));
        let g = &ext.gate;
        assert_eq!(g.apply(&pat(2, &[1, 1, 0, 0])).unwrap(), pat(2, &[1, 1, 1]));
        assert_eq!(g.apply(&pat(2, &[1, 0, 0, 0])).unwrap(), pat(2, &[0, 1, 1]));
        assert_eq!(g.apply(&pat(2, &[0, 0, 0, 0])).unwrap(), pat(2, &[0, 1, 0]));
        // off-contract rows collapse to zeros
        assert_eq!(g.apply(&pat(2, &[1, 1, 1, 0])).unwrap(), pat(2, &[0, 0, 0]));
        assert!(
            ext.check_on_contract(&EnergyModel::unit(2).unwrap())
                .unwrap()
                .conservative
        );
    }

    #[test]
    fn not_extension_rows() {
        let ext = conservative_extension(&not_gate(), &EnergyModel::unit(2).unwrap()).unwrap();
        assert_eq!(
            (ext.o_units, ext.z_units, ext.ones_pads, ext.zeros_pads),
            (1, 1, 1, 1)
        );
        assert_eq!(
            ext.gate.apply(&pat(2, &[0, 1, 0])).unwrap(),
            pat(2, &[1, 0, 0])
        );
        assert_eq!(
            ext.gate.apply(&pat(2, &[1, 1, 0])).unwrap(),
            pat(2, &[0, 1, 1])
        );
    }

    #[test]
    fn conservative_gate_is_its_own_extension() {
        let ext = conservative_extension(&fredkin_gate(), &EnergyModel::unit(2).unwrap()).unwrap();
        assert_eq!(
            (ext.o_units, ext.z_units, ext.ones_pads, ext.zeros_pads),
            (0, 0, 0, 0)
        );
        assert_eq!(ext.gate, fredkin_gate());
    }

    #[test]
    fn ternary_pads_are_ceil_of_units() {
        // constant (0,0) -> (2,2) needs 4 units, two ternary lines
        let g = Gate::from_fn(3, 2, 2, |_| vec![2, 2]).unwrap();
        let model = EnergyModel::unit(3).unwrap();
        let ext = conservative_extension(&g, &model).unwrap();
        assert_eq!((ext.o_units, ext.ones_pads), (4, 2));
        assert!(ext.check_on_contract(&model).unwrap().conservative);
    }

    #[test]
    fn unit_encoding_is_big_endian_greedy() {
        assert_eq!(encode_units(5, 3, 2), vec![2, 2, 1]);
        assert_eq!(encode_units(1, 3, 2), vec![1, 0, 0]);
        assert_eq!(encode_units(0, 2, 1), vec![0, 0]);
    }
}
