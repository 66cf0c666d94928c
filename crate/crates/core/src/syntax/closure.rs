use super::Formula;
use std::collections::{BTreeSet, HashMap};

/// A finite adequate set of formulas together with its `▷`-operands.
///
/// Both lists are sorted by the total order on formulas, so indices are
/// stable and every subformula of a member has a smaller index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdequateContext {
    phi: Vec<Formula>,
    rhd_ops: Vec<Formula>,
    index: HashMap<Formula, usize>,
}

impl AdequateContext {
    /// Members of the set, in increasing order.
    pub fn formulas(&self) -> &[Formula] {
        &self.phi
    }

    /// Every formula occurring on either side of a `▷` in the set.
    pub fn rhd_operands(&self) -> &[Formula] {
        &self.rhd_ops
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }

    pub fn get(&self, i: usize) -> &Formula {
        &self.phi[i]
    }
}

/// The formula `□(b → ⋁(cs ∪ ◊ds))` in canonical form.
///
/// The disjuncts `c` for `c ∈ cs` and `◊d` for `d ∈ ds` are pooled,
/// deduplicated, sorted by the total order and nested to the left; an
/// empty disjunction is `⊥`. Building it this way makes the result depend
/// only on the sets, not on how they were listed.
pub fn box_disjunction<'a>(
    b: &Formula,
    cs: impl IntoIterator<Item = &'a Formula>,
    ds: impl IntoIterator<Item = &'a Formula>,
) -> Formula {
    let disjuncts: BTreeSet<Formula> =
        cs.into_iter().cloned().chain(ds.into_iter().map(|d| Formula::dia(d.clone()))).collect();
    Formula::boxed(Formula::imp(b.clone(), Formula::big_or(disjuncts)))
}

/// Adds subformulas and formal negations until nothing new appears.
fn close(set: &mut BTreeSet<Formula>) {
    let mut frontier: Vec<Formula> = set.iter().cloned().collect();
    while let Some(f) = frontier.pop() {
        let mut new = vec![f.simneg()];
        new.extend(f.children().cloned());
        for g in new {
            if set.insert(g.clone()) {
                frontier.push(g);
            }
        }
    }
}

/// Number of formulas the box-disjunction step adds for `n` operands.
pub fn closure_box_count(n: usize) -> u128 {
    (n as u128) << (2 * n.min(63))
}

/// The `▷`-operands the closure of `seed` will have, without building it.
///
/// Closing under subformulas and formal negation never creates new `▷`
/// formulas, and the formulas added afterwards only combine existing
/// operands, so this is exact.
pub fn predicted_rhd_operands(seed: &[Formula]) -> BTreeSet<Formula> {
    let mut ops: BTreeSet<Formula> = seed.iter().flat_map(Formula::rhd_operands).collect();
    ops.insert(Formula::Bot);
    ops
}

/// The least adequate set containing `seed`.
///
/// Starting from `seed ∪ {⊥ ▷ ⊥}` closed under subformulas and formal
/// negation, with `Φ▷` its set of `▷`-operands, the following are added
/// for all `b, c ∈ Φ▷` and `X, Y ⊆ Φ▷`:
///
/// * `b ▷ c`;
/// * `□∼b`;
/// * `□(b → ⋁(X ∪ ◊Y))` as built by [`box_disjunction`];
///
/// after which the result is closed under subformulas and formal negation
/// once more. None of these steps introduces a new `▷`-operand, so the
/// result is adequate.
///
/// The third step adds `|Φ▷|·4^|Φ▷|` formulas; check
/// [`closure_box_count`] on [`predicted_rhd_operands`] before calling this
/// with a seed that has many distinct `▷`-operands.
pub fn adequate_closure(seed: &[Formula]) -> AdequateContext {
    let mut set: BTreeSet<Formula> = seed.iter().cloned().collect();
    set.insert(Formula::rhd(Formula::Bot, Formula::Bot));
    close(&mut set);
    let ops: Vec<Formula> = set.iter().flat_map(Formula::rhd_operands).collect::<BTreeSet<_>>().into_iter().collect();

    let n = ops.len();
    for b in &ops {
        for c in &ops {
            set.insert(Formula::rhd(b.clone(), c.clone()));
        }
        set.insert(Formula::boxed(b.simneg()));
        for xs in 0u64..(1 << n) {
            let cs = ops.iter().enumerate().filter(|(i, _)| xs >> i & 1 == 1).map(|(_, f)| f);
            for ys in 0u64..(1 << n) {
                let ds = ops.iter().enumerate().filter(|(i, _)| ys >> i & 1 == 1).map(|(_, f)| f);
                set.insert(box_disjunction(b, cs.clone(), ds));
            }
        }
    }
    close(&mut set);

    let phi: Vec<Formula> = set.into_iter().collect();
    let rhd_ops: Vec<Formula> =
        phi.iter().flat_map(Formula::rhd_operands).collect::<BTreeSet<_>>().into_iter().collect();
    debug_assert_eq!(rhd_ops, ops, "closure introduced a new interpretability operand");
    let index = phi.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    AdequateContext { phi, rhd_ops, index }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn closure_of_a_variable() {
        let ctx = adequate_closure(&[parse("p").unwrap()]);
        assert_eq!(ctx.rhd_operands(), &[Formula::Bot]);
        for f in ["p", "~p", "bot |> bot", "[]~bot", "[](bot -> bot)", "[](bot -> <>bot)", "[](bot -> bot | <>bot)"] {
            assert!(ctx.contains(&parse(f).unwrap()), "missing {f}");
        }
    }

    #[test]
    fn operand_prediction_matches() {
        for s in ["p |> q", "[](p |> q) -> r", "(p |> q) |> r", "<>(a & b) |> c"] {
            let f = parse(s).unwrap();
            let ctx = adequate_closure(std::slice::from_ref(&f));
            let predicted: Vec<_> = predicted_rhd_operands(&[f]).into_iter().collect();
            assert_eq!(ctx.rhd_operands(), predicted.as_slice(), "{s}");
        }
    }

    #[test]
    fn box_disjunction_is_set_canonical() {
        let (p, q) = (Formula::var("p"), Formula::var("q"));
        let a = box_disjunction(&p, [&q, &p, &q], [&p]);
        let b = box_disjunction(&p, [&p, &q], [&p, &p]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "[](p -> p | q | <>p)");
        assert_eq!(box_disjunction(&p, [], []).to_string(), "[](p -> bot)");
    }

    #[test]
    fn members_are_sorted_with_subformulas_first() {
        let ctx = adequate_closure(&[parse("p |> <>q").unwrap()]);
        for (i, f) in ctx.formulas().iter().enumerate() {
            assert_eq!(ctx.index_of(f), Some(i));
            for c in f.children() {
                assert!(ctx.index_of(c).unwrap() < i);
            }
        }
    }
}
