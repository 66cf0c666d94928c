//! Derivations between the interpretability principles.
//!
//! [`Deriver`] produces instances of schemes a logic does not have as
//! axioms by following fixed routes (there is no proof search); the
//! [`theorem_library`] collects the derivations that relate the schemes
//! to each other, each with the logic it is checked in.

use super::builder::ProofBuilder;
use super::logic::Logic;
use super::proof::{check_proof, Proof, ProofError};
use super::scheme::Scheme;
use crate::syntax::Formula;

fn not(a: &Formula) -> Formula {
    Formula::not(a.clone())
}
fn and(a: &Formula, b: &Formula) -> Formula {
    Formula::and(a.clone(), b.clone())
}
fn or(a: &Formula, b: &Formula) -> Formula {
    Formula::or(a.clone(), b.clone())
}
fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::imp(a.clone(), b.clone())
}
fn rhd(a: &Formula, b: &Formula) -> Formula {
    Formula::rhd(a.clone(), b.clone())
}

/// A way of obtaining a scheme from others.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Route {
    J1FromJ1Prime,
    J1PrimeFromJ1,
    J2FromJ2Plus,
    J2PlusFromPrime,
    J2PlusFromJ1J2,
    J2PlusPrimeFromJ2Plus,
    J4FromJ4Prime,
    J4FromJ4Plus,
    J4FromJ2,
    J4PrimeFromJ4,
    J4PrimeFromJ2,
    J4PlusFromDoublePrime,
    J4PlusFromJ2Plus,
    J4PlusPrimeFromJ4Plus,
    J4PlusDoublePrimeFromPrime,
    J6FromJ1J4,
}

impl Route {
    fn candidates(s: Scheme) -> &'static [Route] {
        use Route::*;
        match s {
            Scheme::J1 => &[J1FromJ1Prime],
            Scheme::J1Prime => &[J1PrimeFromJ1],
            Scheme::J2 => &[J2FromJ2Plus],
            Scheme::J2Plus => &[J2PlusFromPrime, J2PlusFromJ1J2],
            Scheme::J2PlusPrime => &[J2PlusPrimeFromJ2Plus],
            Scheme::J4 => &[J4FromJ4Prime, J4FromJ4Plus, J4FromJ2],
            Scheme::J4Prime => &[J4PrimeFromJ4, J4PrimeFromJ2],
            Scheme::J4Plus => &[J4PlusFromDoublePrime, J4PlusFromJ2Plus],
            Scheme::J4PlusPrime => &[J4PlusPrimeFromJ4Plus],
            Scheme::J4PlusDoublePrime => &[J4PlusDoublePrimeFromPrime],
            Scheme::J6 => &[J6FromJ1J4],
            _ => &[],
        }
    }

    /// Schemes the route instantiates, and whether it also relies on the
    /// IL⁻ base (`J3`, `J6` and the rules R1, R2).
    fn needs(self) -> (&'static [Scheme], bool) {
        use Route::*;
        match self {
            J1FromJ1Prime => (&[Scheme::J1Prime], true),
            J1PrimeFromJ1 => (&[Scheme::J1], false),
            J2FromJ2Plus => (&[Scheme::J2Plus], true),
            J2PlusFromPrime => (&[Scheme::J2PlusPrime], true),
            J2PlusFromJ1J2 => (&[Scheme::J1Prime, Scheme::J2], true),
            J2PlusPrimeFromJ2Plus => (&[Scheme::J2Plus], true),
            J4FromJ4Prime => (&[Scheme::J4Prime], true),
            J4FromJ4Plus => (&[Scheme::J4Plus], true),
            J4FromJ2 => (&[Scheme::J2], true),
            J4PrimeFromJ4 => (&[Scheme::J4], true),
            J4PrimeFromJ2 => (&[Scheme::J2], false),
            J4PlusFromDoublePrime => (&[Scheme::J4PlusDoublePrime], true),
            J4PlusFromJ2Plus => (&[Scheme::J2Plus], true),
            J4PlusPrimeFromJ4Plus => (&[Scheme::J4Plus], false),
            J4PlusDoublePrimeFromPrime => (&[Scheme::J4PlusPrime], true),
            J6FromJ1J4 => (&[Scheme::J1, Scheme::J4], false),
        }
    }
}

/// Derives scheme instances in a fixed logic, appending to one proof.
pub struct Deriver<'a> {
    logic: &'a Logic,
    b: ProofBuilder,
    stack: Vec<Scheme>,
}

impl<'a> Deriver<'a> {
    pub fn new(logic: &'a Logic) -> Self {
        Deriver { logic, b: ProofBuilder::new(), stack: Vec::new() }
    }

    pub fn builder(&mut self) -> &mut ProofBuilder {
        &mut self.b
    }

    pub fn finish(self, last: usize) -> Proof {
        self.b.finish(last)
    }

    fn il_base(&self) -> bool {
        self.logic.has_axiom(Scheme::J3) && self.logic.has_axiom(Scheme::J6) && self.logic.has_monotonicity_rules()
    }

    fn route_applies(&mut self, r: Route) -> bool {
        let (schemes, base) = r.needs();
        (!base || self.il_base()) && schemes.iter().all(|&s| self.can(s))
    }

    /// Whether some route yields instances of `s`.
    pub fn can(&mut self, s: Scheme) -> bool {
        if self.logic.has_axiom(s) {
            return true;
        }
        if self.stack.contains(&s) {
            return false;
        }
        self.stack.push(s);
        let ok = Route::candidates(s).iter().any(|&r| self.route_applies(r));
        self.stack.pop();
        ok
    }

    /// Derives the instance of `s` with arguments `args` (in the order
    /// `A`, `B`, `C`), returning its line, or `None` if no route applies.
    pub fn instance(&mut self, s: Scheme, args: &[Formula]) -> Option<usize> {
        if self.logic.has_axiom(s) {
            return Some(self.b.axiom(s, args));
        }
        if self.stack.contains(&s) {
            return None;
        }
        self.stack.push(s);
        let route = Route::candidates(s).iter().copied().find(|&r| self.route_applies(r));
        let line = route.map(|r| self.run(r, args));
        self.stack.pop();
        line
    }

    fn sub(&mut self, s: Scheme, args: &[Formula]) -> usize {
        self.instance(s, args).expect("route requirements were checked")
    }

    fn run(&mut self, r: Route, args: &[Formula]) -> usize {
        let arg = |i: usize| args.get(i).cloned().unwrap_or(Formula::Top);
        let (a, b, c) = (arg(0), arg(1), arg(2));
        let goal = |s: Scheme| s.instance(args).expect("enough arguments");
        let bot = Formula::Bot;
        match r {
            Route::J1FromJ1Prime => {
                let bb = self.sub(Scheme::J1Prime, std::slice::from_ref(&b));
                let step = self.box_imp_rhd_left(&a, &b, &b);
                self.b.chain(&[bb, step], goal(Scheme::J1))
            }
            Route::J1PrimeFromJ1 => {
                let t = self.b.taut(imp(&a, &a));
                let n = self.b.nec(t);
                let j1 = self.sub(Scheme::J1, &[a.clone(), a.clone()]);
                self.b.mp(n, j1)
            }
            Route::J2FromJ2Plus => {
                let t = self.b.taut(imp(&b, &or(&b, &c)));
                let widen = self.b.r1(t, &a);
                let ax = self.sub(Scheme::J2Plus, &[a, b, c]);
                self.b.chain(&[widen, ax], goal(Scheme::J2))
            }
            Route::J2PlusFromPrime => {
                let t = self.b.taut(imp(&and(&or(&b, &c), &not(&c)), &b));
                let narrow = self.b.r2(t, &c);
                let ax = self.sub(Scheme::J2PlusPrime, &[a, or(&b, &c), c]);
                self.b.chain(&[narrow, ax], goal(Scheme::J2Plus))
            }
            Route::J2PlusFromJ1J2 => {
                let cc = self.sub(Scheme::J1Prime, std::slice::from_ref(&c));
                let j3 = self.b.axiom(Scheme::J3, &[b.clone(), c.clone(), c.clone()]);
                let j2 = self.sub(Scheme::J2, &[a, or(&b, &c), c]);
                self.b.chain(&[cc, j3, j2], goal(Scheme::J2Plus))
            }
            Route::J2PlusPrimeFromJ2Plus => {
                let split = and(&b, &not(&c));
                let t = self.b.taut(imp(&b, &or(&split, &c)));
                let widen = self.b.r1(t, &a);
                let ax = self.sub(Scheme::J2Plus, &[a, split, c]);
                self.b.chain(&[widen, ax], goal(Scheme::J2PlusPrime))
            }
            Route::J4FromJ4Prime => {
                let ax = self.sub(Scheme::J4Prime, &[a.clone(), b.clone()]);
                let ea = self.box_neg_iff_rhd_bot(&a);
                let eb = self.box_neg_iff_rhd_bot(&b);
                self.b.chain(&[ax, ea, eb], goal(Scheme::J4))
            }
            Route::J4FromJ4Plus => {
                let k = self.b.box_taut(not(&b), imp(&b, &bot));
                let ax = self.sub(Scheme::J4Plus, &[b, bot, a.clone()]);
                let ea = self.box_neg_iff_rhd_bot(&a);
                self.b.chain(&[k, ax, ea], goal(Scheme::J4))
            }
            Route::J4FromJ2 => {
                let ax = self.sub(Scheme::J2, &[a.clone(), b.clone(), bot]);
                let ea = self.box_neg_iff_rhd_bot(&a);
                let eb = self.box_neg_iff_rhd_bot(&b);
                self.b.chain(&[ax, ea, eb], goal(Scheme::J4))
            }
            Route::J4PrimeFromJ4 => {
                let ax = self.sub(Scheme::J4, &[a.clone(), b.clone()]);
                let ea = self.box_neg_iff_rhd_bot(&a);
                let eb = self.box_neg_iff_rhd_bot(&b);
                self.b.chain(&[ax, ea, eb], goal(Scheme::J4Prime))
            }
            Route::J4PrimeFromJ2 => {
                let ax = self.sub(Scheme::J2, &[a, b, bot]);
                self.b.chain(&[ax], goal(Scheme::J4Prime))
            }
            Route::J4PlusFromDoublePrime => {
                let ax = self.sub(Scheme::J4PlusDoublePrime, &[imp(&a, &b), a.clone(), c.clone()]);
                let t = self.b.taut(imp(&and(&imp(&a, &b), &a), &b));
                let narrow = self.b.r1(t, &c);
                self.b.chain(&[ax, narrow], goal(Scheme::J4Plus))
            }
            Route::J4PlusFromJ2Plus => {
                // The J2+' instance (C, A, B), assembled from J2+ …
                let split = and(&a, &not(&b));
                let t = self.b.taut(imp(&a, &or(&split, &b)));
                let widen = self.b.r1(t, &c);
                let ax = self.sub(Scheme::J2Plus, &[c.clone(), split.clone(), b.clone()]);
                // … and `□(A → B) → (A ∧ ¬B) ▷ B`.
                let k = self.b.box_taut(imp(&a, &b), not(&split));
                let z = self.box_neg_rhd(&split, &b);
                self.b.chain(&[widen, ax, k, z], goal(Scheme::J4Plus))
            }
            Route::J4PlusPrimeFromJ4Plus => {
                let ab = imp(&a, &b);
                let k = self.b.box_taut(a.clone(), imp(&ab, &b));
                let ax = self.sub(Scheme::J4Plus, &[ab, b, c]);
                self.b.chain(&[k, ax], goal(Scheme::J4PlusPrime))
            }
            Route::J4PlusDoublePrimeFromPrime => {
                let ab = and(&a, &b);
                let ax = self.sub(Scheme::J4PlusPrime, &[a.clone(), ab.clone(), c.clone()]);
                let t = self.b.taut(imp(&b, &imp(&a, &ab)));
                let widen = self.b.r1(t, &c);
                self.b.chain(&[ax, widen], goal(Scheme::J4PlusDoublePrime))
            }
            Route::J6FromJ1J4 => {
                let na = not(&a);
                let k1 = self.b.box_taut(a.clone(), imp(&na, &bot));
                let j1 = self.sub(Scheme::J1, &[na.clone(), bot.clone()]);
                let j4 = self.sub(Scheme::J4, &[na.clone(), bot.clone()]);
                let t = self.b.taut(not(&bot));
                let nb = self.b.nec(t);
                let k2 = self.b.box_taut(not(&na), a.clone());
                self.b.chain(&[k1, j1, j4, nb, k2], goal(Scheme::J6))
            }
        }
    }

    /// `□¬a ↔ a ▷ ⊥`, from J6 and R2.
    pub fn box_neg_iff_rhd_bot(&mut self, a: &Formula) -> usize {
        let bot = Formula::Bot;
        let j6 = self.b.axiom(Scheme::J6, &[not(a)]);
        let t1 = self.b.taut(imp(a, &not(&not(a))));
        let to = self.b.r2(t1, &bot);
        let t2 = self.b.taut(imp(&not(&not(a)), a));
        let from = self.b.r2(t2, &bot);
        self.b.chain(&[j6, to, from], Formula::iff(Formula::boxed(not(a)), rhd(a, &bot)))
    }

    /// `□¬a → a ▷ c`.
    pub fn box_neg_rhd(&mut self, a: &Formula, c: &Formula) -> usize {
        let t = self.b.taut(imp(&Formula::Bot, c));
        let widen = self.b.r1(t, a);
        let e = self.box_neg_iff_rhd_bot(a);
        self.b.chain(&[e, widen], imp(&Formula::boxed(not(a)), &rhd(a, c)))
    }

    /// `□(a → b) → (b ▷ c → a ▷ c)`.
    pub fn box_imp_rhd_left(&mut self, a: &Formula, b: &Formula, c: &Formula) -> usize {
        let split = and(a, &not(b));
        let k = self.b.box_taut(imp(a, b), not(&split));
        let z = self.box_neg_rhd(&split, c);
        let j3 = self.b.axiom(Scheme::J3, &[split.clone(), b.clone(), c.clone()]);
        let t = self.b.taut(imp(a, &or(&split, b)));
        let narrow = self.b.r2(t, c);
        let goal = imp(&Formula::boxed(imp(a, b)), &imp(&rhd(b, c), &rhd(a, c)));
        self.b.chain(&[k, z, j3, narrow], goal)
    }
}

/// A checked derivation relating the principles.
#[derive(Debug, Clone)]
pub struct LibraryEntry {
    pub name: &'static str,
    pub logic: Logic,
    pub statement: Formula,
    pub proof: Proof,
}

/// `GL + J1 + J2 + J3 + J4` with modus ponens and necessitation only: the
/// usual axiomatization of `CL`, which has neither `J6` nor R1, R2.
pub fn cl_original() -> Logic {
    Logic::bare("CL-orig", &[Scheme::G1, Scheme::G2, Scheme::G3, Scheme::J1, Scheme::J2, Scheme::J3, Scheme::J4])
}

/// All library derivations. Arguments are `A = p`, `B = q`, `C = r`.
pub fn theorem_library() -> Vec<LibraryEntry> {
    let (p, q, r) = (Formula::var("p"), Formula::var("q"), Formula::var("r"));
    let args = [p.clone(), q.clone(), r.clone()];
    let reg = |n: &str| Logic::by_name(n).expect("registered logic");
    let custom = |n: &str, s: Scheme| Logic::custom(n, &[s]);

    let scheme_entries: Vec<(&'static str, Logic, Scheme)> = vec![
        ("j1-from-j1-prime", custom("IL-(J1')", Scheme::J1Prime), Scheme::J1),
        ("j1-prime-from-j1", reg("IL-(J1)"), Scheme::J1Prime),
        ("j4-from-j4-prime", custom("IL-(J4')", Scheme::J4Prime), Scheme::J4),
        ("j4-prime-from-j4", reg("IL-(J4)"), Scheme::J4Prime),
        ("j4plus-prime-from-j4plus", reg("IL-(J4+)"), Scheme::J4PlusPrime),
        ("j4plus-double-prime-from-j4plus-prime", custom("IL-(J4+')", Scheme::J4PlusPrime), Scheme::J4PlusDoublePrime),
        ("j4plus-from-j4plus-double-prime", custom("IL-(J4+'')", Scheme::J4PlusDoublePrime), Scheme::J4Plus),
        ("j4-from-j4plus", reg("IL-(J4+)"), Scheme::J4),
        ("j2plus-prime-from-j2plus", reg("IL-(J2+)"), Scheme::J2PlusPrime),
        ("j2plus-from-j2plus-prime", custom("IL-(J2+')", Scheme::J2PlusPrime), Scheme::J2Plus),
        ("j2-from-j2plus", reg("IL-(J2+)"), Scheme::J2),
        ("j2plus-from-j1-j2", reg("CL"), Scheme::J2Plus),
        ("j4plus-from-j2plus", reg("IL-(J2+)"), Scheme::J4Plus),
        ("j4-from-j2", reg("IL-(J2)"), Scheme::J4),
        ("j4plus-from-j1-j2", reg("CL"), Scheme::J4Plus),
        ("cl-orig-proves-j6", cl_original(), Scheme::J6),
        ("j1-j2-proves-j4", Logic::custom("IL-(J1,J2)", &[Scheme::J1, Scheme::J2]), Scheme::J4),
    ];

    let mut out = Vec::new();
    {
        let l = Logic::il_minus();
        let mut d = Deriver::new(&l);
        let line = d.box_neg_rhd(&p, &q);
        let proof = d.finish(line);
        out.push(entry("box-neg-rhd", l, proof));
    }
    {
        let l = Logic::il_minus();
        let mut d = Deriver::new(&l);
        let line = d.box_imp_rhd_left(&p, &q, &r);
        let proof = d.finish(line);
        out.push(entry("box-imp-rhd-left", l, proof));
    }
    for (name, logic, scheme) in scheme_entries {
        let mut d = Deriver::new(&logic);
        let line = d.instance(scheme, &args).unwrap_or_else(|| panic!("{name}: no route to {scheme} in {logic}"));
        let proof = d.finish(line);
        out.push(entry(name, logic, proof));
    }
    // In CL-orig the two monotonicity rules become theorems via J1 and J2.
    for (name, j2_args, statement) in [
        ("cl-orig-right-monotone", [r.clone(), p.clone(), q.clone()], "[](p -> q) -> r |> p -> r |> q"),
        ("cl-orig-left-monotone", [p.clone(), q.clone(), r.clone()], "[](p -> q) -> q |> r -> p |> r"),
    ] {
        let logic = cl_original();
        let mut d = Deriver::new(&logic);
        let j1 = d.instance(Scheme::J1, &[p.clone(), q.clone()]).unwrap();
        let j2 = d.instance(Scheme::J2, &j2_args).unwrap();
        let goal = crate::syntax::parse(statement).expect("library statement parses");
        let line = d.builder().chain(&[j1, j2], goal);
        let proof = d.finish(line);
        out.push(entry(name, logic, proof));
    }
    out
}

impl LibraryEntry {
    /// The entry in the proof file format, headed by comments naming the
    /// logic (as accepted by [`Logic::axiomatized`]) and the statement.
    pub fn file_text(&self) -> String {
        format!("// {}\n// logic: {}\n// proves: {}\n{}", self.name, self.logic, self.statement, self.proof)
    }
}

/// The logic named by a `// logic: …` header line, if any.
pub fn declared_logic(text: &str) -> Option<&str> {
    text.lines().find_map(|l| l.trim().strip_prefix("// logic:")).map(str::trim)
}

fn entry(name: &'static str, logic: Logic, proof: Proof) -> LibraryEntry {
    let statement = proof.conclusion().expect("non-empty derivation").clone();
    LibraryEntry { name, logic, statement, proof }
}

/// From proofs of `a0 ↔ a1` and `b0 ↔ b1`, a proof of
/// `a0 ▷ b0 ↔ a1 ▷ b1` (via R1 and R2).
///
/// Both inputs are checked in `logic` first; `↔` is the conjunction of the
/// two implications.
pub fn congruence_proof(logic: &Logic, left: &Proof, right: &Proof) -> Result<Proof, ProofError> {
    let sides = |proof: &Proof| -> Result<(Formula, Formula), ProofError> {
        let concl = check_proof(logic, proof)?;
        let bad = || ProofError { line: proof.len(), reason: format!("`{concl}` is not a biconditional") };
        let Formula::And(x, y) = &concl else { return Err(bad()) };
        match (&**x, &**y) {
            (Formula::Imp(a0, a1), Formula::Imp(b1, b0)) if a0 == b0 && a1 == b1 => {
                Ok(((**a0).clone(), (**a1).clone()))
            }
            _ => Err(bad()),
        }
    };
    if !logic.has_monotonicity_rules() {
        return Err(ProofError { line: 0, reason: format!("{logic} does not have the rules R1 and R2") });
    }
    let ((a0, a1), (b0, b1)) = (sides(left)?, sides(right)?);
    let mut b = ProofBuilder::new();
    let l = b.append(left);
    let r = b.append(right);
    let a10 = b.chain(&[l], imp(&a1, &a0));
    let a01 = b.chain(&[l], imp(&a0, &a1));
    let b01 = b.chain(&[r], imp(&b0, &b1));
    let b10 = b.chain(&[r], imp(&b1, &b0));
    let x1 = b.r2(a10, &b0);
    let x2 = b.r1(b01, &a1);
    let y1 = b.r2(a01, &b1);
    let y2 = b.r1(b10, &a0);
    let last = b.chain(&[x1, x2, y1, y2], Formula::iff(rhd(&a0, &b0), rhd(&a1, &b1)));
    Ok(b.finish(last))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn every_entry_checks_in_its_logic() {
        let lib = theorem_library();
        assert_eq!(lib.len(), 21);
        for e in &lib {
            let concl = check_proof(&e.logic, &e.proof).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert_eq!(concl, e.statement, "{}", e.name);
        }
    }

    #[test]
    fn entries_state_the_expected_formulas() {
        let lib = theorem_library();
        let find = |n: &str| lib.iter().find(|e| e.name == n).unwrap().statement.clone();
        assert_eq!(find("box-neg-rhd"), parse("[]~p -> p |> q").unwrap());
        assert_eq!(find("box-imp-rhd-left"), parse("[](p -> q) -> q |> r -> p |> r").unwrap());
        assert_eq!(find("j4-from-j2"), parse("p |> q -> <>p -> <>q").unwrap());
        assert_eq!(find("cl-orig-proves-j6"), parse("([]p -> ~p |> bot) & (~p |> bot -> []p)").unwrap());
        assert_eq!(find("j4plus-from-j1-j2"), parse("[](p -> q) -> r |> p -> r |> q").unwrap());
    }

    #[test]
    fn statements_are_not_axioms_of_their_logic() {
        for e in theorem_library() {
            let direct = e.logic.axioms().iter().any(|s| *s != Scheme::G1 && s.is_instance(&e.statement));
            assert!(!direct, "{} is an axiom instance", e.name);
        }
    }

    #[test]
    fn deriver_refuses_missing_principles() {
        let l = Logic::by_name("IL-(J4+)").unwrap();
        let mut d = Deriver::new(&l);
        assert!(d.can(Scheme::J4));
        assert!(!d.can(Scheme::J2));
        assert!(d.instance(Scheme::J5, &[parse("p").unwrap()]).is_none());
    }

    #[test]
    fn congruence() {
        let l = Logic::il_minus();
        let mut b = ProofBuilder::new();
        let x = b.taut(parse("(p & q -> q & p) & (q & p -> p & q)").unwrap());
        let left = b.finish(x);
        let mut b = ProofBuilder::new();
        let y = b.taut(parse("(~~r -> r) & (r -> ~~r)").unwrap());
        let right = b.finish(y);
        let proof = congruence_proof(&l, &left, &right).unwrap();
        let concl = check_proof(&l, &proof).unwrap();
        assert_eq!(concl, parse("(p & q |> ~~r -> q & p |> r) & (q & p |> r -> p & q |> ~~r)").unwrap());

        let mut b = ProofBuilder::new();
        let z = b.taut(parse("p -> p").unwrap());
        let not_iff = b.finish(z);
        assert!(congruence_proof(&l, &not_iff, &right).is_err());
    }
}
