use concomp_core::conserve::{
    conservative_extension, excess_deficit, is_conservative, ratio_bounds,
};
use concomp_core::formats::{parse_gate, write_gate};
use concomp_core::logic::fredkin_gate;
use concomp_core::movement::{cdown, cup};
use concomp_core::{EnergyModel, Gate, Pattern, Rational, TruthValue};
use proptest::prelude::*;

fn random_gate(d: u32, n: usize, m: usize) -> impl Strategy<Value = Gate> {
    let rows = (d as usize).pow(n as u32);
    prop::collection::vec(0..d, rows * m).prop_map(move |flat| {
        let mut chunks = flat.chunks(m.max(1));
        Gate::from_fn(d, n, m, |_| {
            if m == 0 {
                vec![]
            } else {
                chunks.next().unwrap().to_vec()
            }
        })
        .unwrap()
    })
}

fn gate_shape() -> impl Strategy<Value = Gate> {
    (2u32..=4, 1usize..=3, 1usize..=3).prop_flat_map(|(d, n, m)| random_gate(d, n, m))
}

fn model_for(d: u32) -> impl Strategy<Value = EnergyModel> {
    (1i64..=4, 1i64..=3)
        .prop_map(move |(beta, delta)| EnergyModel::from_integers(beta * delta, delta, d).unwrap())
}

proptest! {
    #[test]
    fn consecutive_levels_differ_by_delta(e0n in 1i64..20, e0d in 1i64..7, dn in 1i64..20, dd in 1i64..7, d in 2u32..9) {
        let model = EnergyModel::new(Rational::new(e0n, e0d), Rational::new(dn, dd), d).unwrap();
        for l in 0..d - 1 {
            let lo = model.energy_of_value(TruthValue::new(l, d).unwrap()).unwrap();
            let hi = model.energy_of_value(TruthValue::new(l + 1, d).unwrap()).unwrap();
            prop_assert_eq!(hi - lo, model.delta());
        }
    }

    #[test]
    fn pattern_energy_ignores_order(levels in prop::collection::vec(0u32..5, 0..8), seed in any::<u64>()) {
        let model = EnergyModel::from_integers(2, 3, 5).unwrap();
        let mut shuffled = levels.clone();
        // deterministic shuffle from the seed
        let k = shuffled.len();
        for i in (1..k).rev() {
            let j = (seed.rotate_left(i as u32) as usize) % (i + 1);
            shuffled.swap(i, j);
        }
        let a = model.energy_of_pattern(&Pattern::new(5, levels).unwrap()).unwrap();
        let b = model.energy_of_pattern(&Pattern::new(5, shuffled).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn rows_reproduce_their_table(g in gate_shape()) {
        let rebuilt = Gate::from_rows(g.radix(), g.inputs(), g.outputs(), g.rows().collect::<Vec<_>>()).unwrap();
        for (x, y) in g.rows() {
            prop_assert_eq!(rebuilt.apply(&x).unwrap(), y);
        }
        let text = write_gate(&g);
        prop_assert_eq!(write_gate(&parse_gate(&text).unwrap()), text);
    }

    #[test]
    fn extension_conserves_on_contract((g, model) in gate_shape().prop_flat_map(|g| { let d = g.radix(); (Just(g), model_for(d)) })) {
        let ext = conservative_extension(&g, &model).unwrap();
        let top = g.radix() as u64 - 1;
        prop_assert_eq!(ext.ones_pads as u64, ext.o_units.div_ceil(top));
        prop_assert_eq!(ext.zeros_pads as u64, ext.z_units.div_ceil(top));
        prop_assert!(ext.check_on_contract(&model).unwrap().conservative);
        // original outputs are untouched
        for x in Pattern::all(g.radix(), g.inputs()).unwrap() {
            let out = ext.gate.apply(&ext.padded_input(&x).unwrap()).unwrap();
            let expected = g.apply(&x).unwrap();
            prop_assert_eq!(&out.levels()[..g.outputs()], expected.levels());
        }
    }

    #[test]
    fn zero_excess_iff_conservative((g, model) in gate_shape().prop_flat_map(|g| { let d = g.radix(); (Just(g), model_for(d)) })) {
        let conservative = is_conservative(&g, &model).unwrap().conservative;
        prop_assert_eq!(excess_deficit(&g, &model).unwrap() == (0, 0), conservative);
    }
}

#[test]
fn permutation_gates_are_conservative_and_within_ratio_bounds() {
    let mut corpus = vec![
        fredkin_gate(),
        Gate::identity(3, 2).unwrap(),
        Gate::wiring(4, &[2, 0, 1]).unwrap(),
    ];
    for d in 2..=5 {
        corpus.push(cup(d).unwrap());
        corpus.push(cdown(d).unwrap());
    }
    for g in &corpus {
        for (e0, delta) in [(1, 1), (2, 1), (1, 3)] {
            let model = EnergyModel::from_integers(e0, delta, g.radix()).unwrap();
            assert!(is_conservative(g, &model).unwrap().conservative);
            let (lo, hi) = ratio_bounds(&model);
            let ratio = Rational::new(g.outputs() as i64, g.inputs() as i64);
            assert!(lo <= ratio && ratio <= hi);
        }
    }
}

#[test]
fn extensions_respect_ratio_bounds() {
    // a total conservative gate always has n = m; the bound only bites on
    // extensions, which conserve on their padded inputs
    let model = EnergyModel::unit(2).unwrap();
    let (lo, hi) = ratio_bounds(&model);
    for code in 0u32..16 {
        let f = Gate::from_fn(2, 2, 1, |x| vec![(code >> (2 * x[0] + x[1])) & 1]).unwrap();
        let ext = conservative_extension(&f, &model).unwrap();
        let ratio = Rational::new(ext.gate.outputs() as i64, ext.gate.inputs() as i64);
        assert!(lo <= ratio && ratio <= hi, "function {code}");
    }
}
