use super::proof::{Justification, Proof, ProofLine};
use super::scheme::Scheme;
use crate::syntax::Formula;
use std::collections::HashMap;

/// Incremental construction of proofs.
///
/// Every method appends (at most) one justified line and returns its
/// index; a formula that is already on a line is not derived twice. The
/// builder does not check anything; run [`super::check_proof`] on the
/// result.
#[derive(Debug, Default)]
pub struct ProofBuilder {
    lines: Vec<ProofLine>,
    known: HashMap<Formula, usize>,
}

impl ProofBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the lines of an existing proof, returning the index of its
    /// conclusion. References are shifted; duplicated formulas are merged.
    pub fn append(&mut self, proof: &Proof) -> usize {
        let mut map = Vec::with_capacity(proof.lines.len());
        for line in &proof.lines {
            let j = match &line.justification {
                Justification::Axiom { .. } => line.justification.clone(),
                Justification::Mp { minor, major } => Justification::Mp { minor: map[*minor], major: map[*major] },
                Justification::Nec(i) => Justification::Nec(map[*i]),
                Justification::R1(i, c) => Justification::R1(map[*i], c.clone()),
                Justification::R2(i, c) => Justification::R2(map[*i], c.clone()),
            };
            map.push(self.push(line.formula.clone(), j));
        }
        *map.last().expect("appending an empty proof")
    }

    fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        if let Some(&i) = self.known.get(&formula) {
            return i;
        }
        self.lines.push(ProofLine { formula: formula.clone(), justification });
        self.known.insert(formula, self.lines.len() - 1);
        self.lines.len() - 1
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.lines[i].formula
    }

    /// An instance of `scheme` with the given metavariable arguments.
    pub fn axiom(&mut self, scheme: Scheme, args: &[Formula]) -> usize {
        let f = scheme.instance(args).unwrap_or_else(|| panic!("{scheme} needs more arguments"));
        self.push(f, Justification::Axiom { scheme, args: args.to_vec() })
    }

    /// A propositional tautology, justified by G1.
    pub fn taut(&mut self, f: Formula) -> usize {
        self.push(f, Justification::Axiom { scheme: Scheme::G1, args: vec![] })
    }

    /// Modus ponens from `lines[minor] = A` and `lines[major] = A → B`.
    pub fn mp(&mut self, minor: usize, major: usize) -> usize {
        let Formula::Imp(_, b) = self.formula(major).clone() else {
            panic!("modus ponens with a major premise that is not an implication");
        };
        self.push(*b, Justification::Mp { minor, major })
    }

    pub fn nec(&mut self, i: usize) -> usize {
        let f = Formula::boxed(self.formula(i).clone());
        self.push(f, Justification::Nec(i))
    }

    /// From `A → B` on line `i`, `C ▷ A → C ▷ B`.
    pub fn r1(&mut self, i: usize, c: &Formula) -> usize {
        let (a, b) = self.implication(i);
        let f = Formula::imp(Formula::rhd(c.clone(), a), Formula::rhd(c.clone(), b));
        self.push(f, Justification::R1(i, c.clone()))
    }

    /// From `A → B` on line `i`, `B ▷ C → A ▷ C`.
    pub fn r2(&mut self, i: usize, c: &Formula) -> usize {
        let (a, b) = self.implication(i);
        let f = Formula::imp(Formula::rhd(b, c.clone()), Formula::rhd(a, c.clone()));
        self.push(f, Justification::R2(i, c.clone()))
    }

    fn implication(&self, i: usize) -> (Formula, Formula) {
        match self.formula(i) {
            Formula::Imp(a, b) => ((**a).clone(), (**b).clone()),
            f => panic!("line {i} is `{f}`, not an implication"),
        }
    }

    /// Derives `goal` from the premises on the given lines when
    /// `P1 → (P2 → … → goal)` is a tautology: one G1 line, then modus
    /// ponens once per premise.
    pub fn chain(&mut self, premises: &[usize], goal: Formula) -> usize {
        let mut f = goal;
        for &p in premises.iter().rev() {
            f = Formula::imp(self.formula(p).clone(), f);
        }
        let mut cur = self.taut(f);
        for &p in premises {
            cur = self.mp(p, cur);
        }
        cur
    }

    /// From `A → B` on line `i`, `□A → □B` (necessitation and G2).
    pub fn box_mono(&mut self, i: usize) -> usize {
        let (a, b) = self.implication(i);
        let n = self.nec(i);
        let k = self.axiom(Scheme::G2, &[a, b]);
        self.mp(n, k)
    }

    /// Proves the tautology `a → b` and lifts it under `□`.
    pub fn box_taut(&mut self, a: Formula, b: Formula) -> usize {
        let t = self.taut(Formula::imp(a, b));
        self.box_mono(t)
    }

    /// The proof ending with line `last`; later lines are dropped, which is
    /// safe because lines only ever depend on earlier ones.
    pub fn finish(mut self, last: usize) -> Proof {
        self.lines.truncate(last + 1);
        Proof { lines: self.lines }
    }
}
