use super::taut::is_tautology;
use crate::syntax::{parse_pattern, Formula};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

/// An axiom scheme. Metavariables are written `A`, `B`, `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// All propositional tautologies.
    G1,
    /// `□(A → B) → (□A → □B)`
    G2,
    /// `□(□A → A) → □A`
    G3,
    /// `□(A → B) → A ▷ B`
    J1,
    /// `A ▷ A`
    J1Prime,
    /// `(A ▷ B) ∧ (B ▷ C) → A ▷ C`
    J2,
    /// `(A ▷ (B ∨ C)) ∧ (B ▷ C) → A ▷ C`
    J2Plus,
    /// `(A ▷ B) ∧ ((B ∧ ¬C) ▷ C) → A ▷ C`
    J2PlusPrime,
    /// `(A ▷ C) ∧ (B ▷ C) → (A ∨ B) ▷ C`
    J3,
    /// `A ▷ B → (◊A → ◊B)`
    J4,
    /// `A ▷ B → (B ▷ ⊥ → A ▷ ⊥)`
    J4Prime,
    /// `□(A → B) → (C ▷ A → C ▷ B)`
    J4Plus,
    /// `□A → (C ▷ (A → B) → C ▷ B)`
    J4PlusPrime,
    /// `□A → (C ▷ B → C ▷ (A ∧ B))`
    J4PlusDoublePrime,
    /// `◊A ▷ A`
    J5,
    /// `□A ↔ (¬A) ▷ ⊥`, written as a conjunction of two implications.
    J6,
}

impl Scheme {
    pub const ALL: [Scheme; 16] = [
        Scheme::G1,
        Scheme::G2,
        Scheme::G3,
        Scheme::J1,
        Scheme::J1Prime,
        Scheme::J2,
        Scheme::J2Plus,
        Scheme::J2PlusPrime,
        Scheme::J3,
        Scheme::J4,
        Scheme::J4Prime,
        Scheme::J4Plus,
        Scheme::J4PlusPrime,
        Scheme::J4PlusDoublePrime,
        Scheme::J5,
        Scheme::J6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::G1 => "G1",
            Scheme::G2 => "G2",
            Scheme::G3 => "G3",
            Scheme::J1 => "J1",
            Scheme::J1Prime => "J1'",
            Scheme::J2 => "J2",
            Scheme::J2Plus => "J2+",
            Scheme::J2PlusPrime => "J2+'",
            Scheme::J3 => "J3",
            Scheme::J4 => "J4",
            Scheme::J4Prime => "J4'",
            Scheme::J4Plus => "J4+",
            Scheme::J4PlusPrime => "J4+'",
            Scheme::J4PlusDoublePrime => "J4+''",
            Scheme::J5 => "J5",
            Scheme::J6 => "J6",
        }
    }

    fn source(self) -> Option<&'static str> {
        Some(match self {
            Scheme::G1 => return None,
            Scheme::G2 => "[](A -> B) -> []A -> []B",
            Scheme::G3 => "[]([]A -> A) -> []A",
            Scheme::J1 => "[](A -> B) -> A |> B",
            Scheme::J1Prime => "A |> A",
            Scheme::J2 => "(A |> B) & (B |> C) -> A |> C",
            Scheme::J2Plus => "(A |> B | C) & (B |> C) -> A |> C",
            Scheme::J2PlusPrime => "(A |> B) & (B & ~C |> C) -> A |> C",
            Scheme::J3 => "(A |> C) & (B |> C) -> A | B |> C",
            Scheme::J4 => "A |> B -> <>A -> <>B",
            Scheme::J4Prime => "A |> B -> B |> bot -> A |> bot",
            Scheme::J4Plus => "[](A -> B) -> C |> A -> C |> B",
            Scheme::J4PlusPrime => "[]A -> C |> (A -> B) -> C |> B",
            Scheme::J4PlusDoublePrime => "[]A -> C |> B -> C |> A & B",
            Scheme::J5 => "<>A |> A",
            Scheme::J6 => "([]A -> ~A |> bot) & (~A |> bot -> []A)",
        })
    }

    /// The scheme as a formula over the metavariables `A`, `B`, `C`;
    /// `None` for [`Scheme::G1`], which is not a single pattern.
    pub fn pattern(self) -> Option<&'static Formula> {
        static PATTERNS: OnceLock<Vec<Option<Formula>>> = OnceLock::new();
        PATTERNS.get_or_init(|| {
            Scheme::ALL
                .iter()
                .map(|s| s.source().map(|src| parse_pattern(src).expect("built-in scheme parses")))
                .collect()
        })[self as usize]
            .as_ref()
    }

    /// Metavariables occurring in the pattern, in order `A`, `B`, `C`.
    pub fn metavariables(self) -> &'static [char] {
        match self {
            Scheme::G1 => &[],
            Scheme::J1Prime | Scheme::J5 | Scheme::J6 | Scheme::G3 => &['A'],
            Scheme::G2 | Scheme::J1 | Scheme::J4 | Scheme::J4Prime => &['A', 'B'],
            _ => &['A', 'B', 'C'],
        }
    }

    /// The instance with `args[0]` for `A`, `args[1]` for `B` and so on.
    ///
    /// Returns `None` for [`Scheme::G1`] or when too few arguments are given.
    pub fn instance(self, args: &[Formula]) -> Option<Formula> {
        let pattern = self.pattern()?;
        if args.len() < self.metavariables().len() {
            return None;
        }
        Some(pattern.substitute(&|v| metavar_index(v).and_then(|i| args.get(i).cloned())))
    }

    /// Matches `f` against the pattern, returning the bindings of the
    /// metavariables in order. Tautologies match [`Scheme::G1`] with no
    /// bindings.
    pub fn match_instance(self, f: &Formula) -> Option<Vec<Formula>> {
        let Some(pattern) = self.pattern() else {
            return is_tautology(f).then(Vec::new);
        };
        let mut binds: [Option<Formula>; 3] = Default::default();
        if !unify(pattern, f, &mut binds) {
            return None;
        }
        Some(binds.into_iter().take(self.metavariables().len()).map(|b| b.unwrap_or(Formula::Top)).collect())
    }

    pub fn is_instance(self, f: &Formula) -> bool {
        self.match_instance(f).is_some()
    }
}

fn metavar_index(v: &str) -> Option<usize> {
    match v {
        "A" => Some(0),
        "B" => Some(1),
        "C" => Some(2),
        _ => None,
    }
}

fn unify(pattern: &Formula, f: &Formula, binds: &mut [Option<Formula>; 3]) -> bool {
    use Formula as F;
    match (pattern, f) {
        (F::Var(v), _) if metavar_index(v).is_some() => {
            let slot = &mut binds[metavar_index(v).unwrap()];
            match slot {
                Some(bound) => bound == f,
                None => {
                    *slot = Some(f.clone());
                    true
                }
            }
        }
        (F::Top, F::Top) | (F::Bot, F::Bot) => true,
        (F::Var(a), F::Var(b)) => a == b,
        (F::Neg(a), F::Neg(b)) | (F::Box(a), F::Box(b)) => unify(a, b, binds),
        (F::And(a, b), F::And(c, d))
        | (F::Or(a, b), F::Or(c, d))
        | (F::Imp(a, b), F::Imp(c, d))
        | (F::Rhd(a, b), F::Rhd(c, d)) => unify(a, c, binds) && unify(b, d, binds),
        _ => false,
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown axiom scheme `{0}`")]
pub struct UnknownScheme(pub String);

impl FromStr for Scheme {
    type Err = UnknownScheme;

    /// Accepts the names printed by [`Scheme::name`]; `+` may also be
    /// written `_+`, and each prime as `p` (`J4+pp` for `J4+''`).
    fn from_str(s: &str) -> Result<Scheme, UnknownScheme> {
        let norm = s.trim().replace("_+", "+").replace('’', "'");
        let stem = norm.trim_end_matches(['p', '\'']);
        let name = format!("{stem}{}", "'".repeat(norm.len() - stem.len()));
        Scheme::ALL.into_iter().find(|sc| sc.name() == name).ok_or_else(|| UnknownScheme(s.to_string()))
    }
}

impl Serialize for Scheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl Serialize for Principle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// The principles whose frame conditions are studied, each standing for a
/// family of deductively equivalent schemes (`J4` for `J4` and `J4'`, …).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Principle {
    J1,
    J2,
    J2Plus,
    J4,
    J4Plus,
    J5,
}

impl Principle {
    pub const ALL: [Principle; 6] =
        [Principle::J1, Principle::J2, Principle::J2Plus, Principle::J4, Principle::J4Plus, Principle::J5];

    pub fn name(self) -> &'static str {
        match self {
            Principle::J1 => "J1",
            Principle::J2 => "J2",
            Principle::J2Plus => "J2+",
            Principle::J4 => "J4",
            Principle::J4Plus => "J4+",
            Principle::J5 => "J5",
        }
    }

    /// The principle a scheme expresses, if any.
    pub fn of_scheme(s: Scheme) -> Option<Principle> {
        Some(match s {
            Scheme::J1 | Scheme::J1Prime => Principle::J1,
            Scheme::J2 => Principle::J2,
            Scheme::J2Plus | Scheme::J2PlusPrime => Principle::J2Plus,
            Scheme::J4 | Scheme::J4Prime => Principle::J4,
            Scheme::J4Plus | Scheme::J4PlusPrime | Scheme::J4PlusDoublePrime => Principle::J4Plus,
            Scheme::J5 => Principle::J5,
            _ => return None,
        })
    }

    /// The scheme used when a single representative is needed.
    pub fn scheme(self) -> Scheme {
        match self {
            Principle::J1 => Scheme::J1,
            Principle::J2 => Scheme::J2,
            Principle::J2Plus => Scheme::J2Plus,
            Principle::J4 => Scheme::J4,
            Principle::J4Plus => Scheme::J4Plus,
            Principle::J5 => Scheme::J5,
        }
    }

    /// The instance over distinct variables used to test frames:
    ///
    /// | principle | instance |
    /// |---|---|
    /// | J1  | `p ▷ p` |
    /// | J2  | `(p ▷ q) ∧ (q ▷ r) → p ▷ r` |
    /// | J2+ | `(p ▷ (q ∨ r)) ∧ (q ▷ r) → p ▷ r` |
    /// | J4  | `p ▷ q → (◊p → ◊q)` |
    /// | J4+ | `□(q → r) → (p ▷ q → p ▷ r)` |
    /// | J5  | `◊p ▷ p` |
    ///
    /// The `J1` instance is `p ▷ p` rather than an instance of the `J1`
    /// scheme: over frames both express the same condition and the shorter
    /// formula keeps valuation enumeration small.
    pub fn characteristic_instance(self) -> Formula {
        let (p, q, r) = (Formula::var("p"), Formula::var("q"), Formula::var("r"));
        match self {
            Principle::J1 => Formula::rhd(p.clone(), p),
            Principle::J2 => Scheme::J2.instance(&[p, q, r]).unwrap(),
            Principle::J2Plus => Scheme::J2Plus.instance(&[p, q, r]).unwrap(),
            Principle::J4 => Scheme::J4.instance(&[p, q]).unwrap(),
            Principle::J4Plus => Scheme::J4Plus.instance(&[q, r, p]).unwrap(),
            Principle::J5 => Scheme::J5.instance(&[p]).unwrap(),
        }
    }
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Principle {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> Result<Principle, UnknownScheme> {
        let scheme: Scheme = s.parse()?;
        Principle::of_scheme(scheme).ok_or_else(|| UnknownScheme(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn patterns_have_the_expected_shape() {
        let p = |s: &str| parse_pattern(s).unwrap();
        assert_eq!(Scheme::J2Plus.pattern().unwrap(), &p("(A |> (B | C)) & (B |> C) -> (A |> C)"));
        assert_eq!(Scheme::J4.pattern().unwrap(), &p("(A |> B) -> (<>A -> <>B)"));
        assert_eq!(Scheme::J6.pattern().unwrap(), &p("([]A -> ((~A) |> bot)) & (((~A) |> bot) -> []A)"));
        for s in Scheme::ALL {
            let mut used: Vec<char> =
                s.pattern().map(|f| f.vars().iter().map(|v| v.chars().next().unwrap()).collect()).unwrap_or_default();
            used.sort();
            assert_eq!(used, s.metavariables(), "{s}");
        }
    }

    #[test]
    fn matching_recovers_the_substitution() {
        let f = parse("[](p & q -> r) -> (p & q) |> r").unwrap();
        assert_eq!(Scheme::J1.match_instance(&f), Some(vec![parse("p & q").unwrap(), parse("r").unwrap()]));
        let bad = parse("(p |> q) & (r |> r) -> p |> r").unwrap();
        assert!(!Scheme::J2.is_instance(&bad));
        assert!(Scheme::G1.is_instance(&parse("p |> q -> p |> q").unwrap()));
        assert!(Scheme::J5.is_instance(&parse("<>(p |> q) |> (p |> q)").unwrap()));
    }

    #[test]
    fn names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>(), Ok(s));
        }
        assert_eq!("J4_+''".parse::<Scheme>(), Ok(Scheme::J4PlusDoublePrime));
        assert_eq!("J2+p".parse::<Scheme>(), Ok(Scheme::J2PlusPrime));
        assert!("J7".parse::<Scheme>().is_err());
    }

    #[test]
    fn characteristic_instances() {
        let expect = [
            (Principle::J1, "p |> p"),
            (Principle::J2, "(p |> q) & (q |> r) -> p |> r"),
            (Principle::J2Plus, "(p |> q | r) & (q |> r) -> p |> r"),
            (Principle::J4, "p |> q -> <>p -> <>q"),
            (Principle::J4Plus, "[](q -> r) -> p |> q -> p |> r"),
            (Principle::J5, "<>p |> p"),
        ];
        for (pr, s) in expect {
            assert_eq!(pr.characteristic_instance(), parse(s).unwrap(), "{pr}");
        }
    }
}
