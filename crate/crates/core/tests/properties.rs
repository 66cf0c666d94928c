//! Invariants checked on generated formulas and models.

use ilbench_core::decide::{bounded_refute, decide, DecideError, Mode, Verdict};
use ilbench_core::genveltman::{embed_veltman, GenFrame, GenModel};
use ilbench_core::kernel::Logic;
use ilbench_core::random::{random_gen_model, random_veltman_model};
use ilbench_core::syntax::{parse, Formula};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VARS: [&str; 3] = ["p", "q", "r"];

fn formula(vars: &'static [&'static str], depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(Formula::Top), Just(Formula::Bot), prop::sample::select(vars).prop_map(Formula::var)];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::boxed),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::rhd(a, b)),
        ]
    })
}

/// Formulas the exact procedure handles quickly: one variable and at most
/// two `▷` operands.
fn small_formula() -> impl Strategy<Value = Formula> {
    formula(&["p"], 3).prop_filter("at most two ▷ operands", |f| f.rhd_operands().len() <= 2)
}

fn registered_logic() -> impl Strategy<Value = Logic> {
    prop::sample::select(Logic::registry())
}

proptest! {
    #[test]
    fn printed_formulas_parse_back(f in formula(&VARS, 4)) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn embedding_preserves_extensions(seed in any::<u64>(), f in formula(&VARS, 4)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=5);
        let m = random_veltman_model(&mut rng, n, &VARS);
        prop_assert_eq!(m.extension(&f), embed_veltman(&m).extension(&f));
    }

    /// `□A` and `¬A ▷ ⊥` agree at every world of every model, whatever
    /// the frame conditions.
    #[test]
    fn box_is_interpreting_falsum(seed in any::<u64>(), a in formula(&VARS, 3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=5);
        let lhs = Formula::boxed(a.clone());
        let rhs = Formula::rhd(Formula::not(a), Formula::Bot);
        let v = random_veltman_model(&mut rng, n, &VARS);
        prop_assert_eq!(v.extension(&lhs), v.extension(&rhs));
        let g = random_gen_model(&mut rng, n, &VARS);
        prop_assert_eq!(g.extension(&lhs), g.extension(&rhs));
    }

    /// Generators stand for their upward closures, so adding a superset of
    /// a generator leaves every extension unchanged.
    #[test]
    fn superset_generators_change_nothing(seed in any::<u64>(), f in formula(&VARS, 4)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=5);
        let m = random_gen_model(&mut rng, n, &VARS);
        let sk = m.frame.skeleton().clone();
        let mut gens: Vec<Vec<Vec<_>>> =
            (0..n).map(|x| (0..n).map(|y| m.frame.generators(x, y).to_vec()).collect()).collect();
        for g in gens.iter_mut().flatten() {
            if let Some(mut bigger) = g.first().cloned() {
                bigger.insert(rng.gen_range(0..n));
                g.push(bigger);
            }
        }
        let padded = GenModel { frame: GenFrame::new(sk, gens, true).unwrap(), valuation: m.valuation.clone() };
        prop_assert_eq!(&padded.frame, &m.frame);
        prop_assert_eq!(padded.extension(&f), m.extension(&f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Exact theoremhood comes from the fixpoint alone; it must agree with
    /// countermodel search, and every exact refutation must check.
    #[test]
    fn exact_mode_agrees_with_search(l in registered_logic(), a in small_formula()) {
        match decide(&l, &a, Mode::Exact) {
            Ok(Verdict::Theorem) => {
                let r = bounded_refute(&l, &a, 4);
                prop_assert!(r.is_none(), "{l} proves {a}, refuted by {}", r.unwrap().to_json());
            }
            Ok(Verdict::NonTheorem(r)) => prop_assert!(r.verify(&l, &a), "{}", r.to_json()),
            Ok(Verdict::Unknown) => prop_assert!(false, "exact mode answered unknown"),
            Err(DecideError::Infeasible { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
