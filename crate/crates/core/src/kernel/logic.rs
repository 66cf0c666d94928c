use super::scheme::{Principle, Scheme};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// The two relational semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameClass {
    Veltman,
    #[serde(rename = "gen")]
    Generalized,
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameClass::Veltman => "veltman",
            FrameClass::Generalized => "gen",
        })
    }
}

impl FromStr for FrameClass {
    type Err = String;

    fn from_str(s: &str) -> Result<FrameClass, String> {
        match s {
            "veltman" => Ok(FrameClass::Veltman),
            "gen" | "generalized" => Ok(FrameClass::Generalized),
            _ => Err(format!("unknown frame class `{s}` (expected `veltman` or `gen`)")),
        }
    }
}

/// A Hilbert-style logic: a set of axiom schemes closed under modus
/// ponens, necessitation and, when enabled, the two `▷`-monotonicity rules
///
/// * R1: from `A → B` infer `C ▷ A → C ▷ B`;
/// * R2: from `A → B` infer `B ▷ C → A ▷ C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Logic {
    name: String,
    axioms: BTreeSet<Scheme>,
    monotonicity_rules: bool,
}

/// Schemes every extension of IL⁻ contains.
const BASE: [Scheme; 5] = [Scheme::G1, Scheme::G2, Scheme::G3, Scheme::J3, Scheme::J6];

/// The registered logics: twelve complete for Veltman semantics followed
/// by eight complete only for generalized Veltman semantics.
const REGISTRY: [(&str, &[Scheme]); 20] = [
    ("IL-", &[]),
    ("IL-(J5)", &[Scheme::J5]),
    ("IL-(J1)", &[Scheme::J1]),
    ("IL-(J4+)", &[Scheme::J4Plus]),
    ("IL-(J1,J5)", &[Scheme::J1, Scheme::J5]),
    ("IL-(J4+,J5)", &[Scheme::J4Plus, Scheme::J5]),
    ("IL-(J1,J4+)", &[Scheme::J1, Scheme::J4Plus]),
    ("IL-(J2+)", &[Scheme::J2Plus]),
    ("IL-(J1,J4+,J5)", &[Scheme::J1, Scheme::J4Plus, Scheme::J5]),
    ("IL-(J2+,J5)", &[Scheme::J2Plus, Scheme::J5]),
    ("CL", &[Scheme::J1, Scheme::J2]),
    ("IL", &[Scheme::J1, Scheme::J2, Scheme::J5]),
    ("IL-(J4)", &[Scheme::J4]),
    ("IL-(J1,J4)", &[Scheme::J1, Scheme::J4]),
    ("IL-(J4,J5)", &[Scheme::J4, Scheme::J5]),
    ("IL-(J2)", &[Scheme::J2]),
    ("IL-(J1,J4,J5)", &[Scheme::J1, Scheme::J4, Scheme::J5]),
    ("IL-(J2,J5)", &[Scheme::J2, Scheme::J5]),
    ("IL-(J2,J4+)", &[Scheme::J2, Scheme::J4Plus]),
    ("IL-(J2,J4+,J5)", &[Scheme::J2, Scheme::J4Plus, Scheme::J5]),
];

/// Covering pairs of the inclusion order among registered logics, as
/// `(smaller, larger, principle separating them)`.
const EDGES: [(&str, &str, Principle); 30] = [
    ("IL-", "IL-(J5)", Principle::J5),
    ("IL-", "IL-(J1)", Principle::J1),
    ("IL-", "IL-(J4+)", Principle::J4Plus),
    ("IL-(J5)", "IL-(J1,J5)", Principle::J1),
    ("IL-(J5)", "IL-(J4+,J5)", Principle::J4Plus),
    ("IL-(J1)", "IL-(J1,J5)", Principle::J5),
    ("IL-(J1)", "IL-(J1,J4+)", Principle::J4Plus),
    ("IL-(J4+)", "IL-(J4+,J5)", Principle::J5),
    ("IL-(J4+)", "IL-(J1,J4+)", Principle::J1),
    ("IL-(J4+)", "IL-(J2+)", Principle::J2Plus),
    ("IL-(J1,J5)", "IL-(J1,J4+,J5)", Principle::J4Plus),
    ("IL-(J4+,J5)", "IL-(J1,J4+,J5)", Principle::J1),
    ("IL-(J1,J4+)", "IL-(J1,J4+,J5)", Principle::J5),
    ("IL-(J4+,J5)", "IL-(J2+,J5)", Principle::J2Plus),
    ("IL-(J2+)", "IL-(J2+,J5)", Principle::J5),
    ("IL-(J1,J4+)", "CL", Principle::J2),
    ("IL-(J2+)", "CL", Principle::J1),
    ("IL-(J1,J4+,J5)", "IL", Principle::J2),
    ("IL-(J2+,J5)", "IL", Principle::J1),
    ("CL", "IL", Principle::J5),
    ("IL-(J4)", "IL-(J1,J4)", Principle::J1),
    ("IL-(J4)", "IL-(J4,J5)", Principle::J5),
    ("IL-(J4)", "IL-(J2)", Principle::J2),
    ("IL-(J1,J4)", "IL-(J1,J4,J5)", Principle::J5),
    ("IL-(J4,J5)", "IL-(J1,J4,J5)", Principle::J1),
    ("IL-(J4,J5)", "IL-(J2,J5)", Principle::J2),
    ("IL-(J2)", "IL-(J2,J5)", Principle::J5),
    ("IL-(J2)", "IL-(J2,J4+)", Principle::J4Plus),
    ("IL-(J2,J5)", "IL-(J2,J4+,J5)", Principle::J4Plus),
    ("IL-(J2,J4+)", "IL-(J2,J4+,J5)", Principle::J5),
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogicError {
    #[error("unknown logic `{0}`; expected `IL-`, `IL-(J1,J5)`, …, `CL` or `IL`")]
    Unknown(String),
    #[error("`{0}` is not one of the principles J1, J2, J2+, J4, J4+, J5 (or their variants)")]
    BadPrinciple(String),
}

impl Logic {
    /// IL⁻ extended with `extra`, under the given display name.
    pub fn custom(name: impl Into<String>, extra: &[Scheme]) -> Logic {
        Logic { name: name.into(), axioms: BASE.iter().chain(extra).copied().collect(), monotonicity_rules: true }
    }

    /// A logic given by exactly the listed schemes, closed under modus
    /// ponens and necessitation only. Used for axiomatizations that do not
    /// build on IL⁻, such as `GL + J1 + J2 + J3 + J4`.
    pub fn bare(name: impl Into<String>, axioms: &[Scheme]) -> Logic {
        Logic { name: name.into(), axioms: axioms.iter().copied().collect(), monotonicity_rules: false }
    }

    /// All registered logics, in registry order.
    pub fn registry() -> Vec<Logic> {
        REGISTRY.iter().map(|(name, extra)| Logic::custom(*name, extra)).collect()
    }

    /// `IL⁻` itself.
    pub fn il_minus() -> Logic {
        Logic::custom("IL-", &[])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn axioms(&self) -> &BTreeSet<Scheme> {
        &self.axioms
    }

    pub fn has_axiom(&self, s: Scheme) -> bool {
        self.axioms.contains(&s)
    }

    pub fn has_monotonicity_rules(&self) -> bool {
        self.monotonicity_rules
    }

    /// Principles given directly by an axiom; these determine the frame
    /// conditions.
    pub fn primitive_principles(&self) -> BTreeSet<Principle> {
        self.axioms.iter().filter_map(|&s| Principle::of_scheme(s)).collect()
    }

    /// Principles the logic proves, closing the primitive ones under the
    /// derivations `J2+ ⊢ J2, J4+`, `J4+ ⊢ J4`, `J2 ⊢ J4` and
    /// `J1, J2 ⊢ J2+` (each checked by the derivation library).
    pub fn principles(&self) -> BTreeSet<Principle> {
        let mut ps = self.primitive_principles();
        loop {
            let before = ps.len();
            let has = |p| ps.contains(&p);
            let mut add = Vec::new();
            if has(Principle::J2Plus) {
                add.extend([Principle::J2, Principle::J4Plus]);
            }
            if has(Principle::J4Plus) || has(Principle::J2) {
                add.push(Principle::J4);
            }
            if has(Principle::J1) && has(Principle::J2) {
                add.push(Principle::J2Plus);
            }
            ps.extend(add);
            if ps.len() == before {
                return ps;
            }
        }
    }

    pub fn has(&self, p: Principle) -> bool {
        self.principles().contains(&p)
    }

    /// The semantics the logic is complete for: generalized Veltman
    /// frames when it has `J4` without `J4+` or `J2` without `J2+`,
    /// ordinary Veltman frames otherwise.
    pub fn complete_class(&self) -> FrameClass {
        let ps = self.principles();
        let gen = (ps.contains(&Principle::J4) && !ps.contains(&Principle::J4Plus))
            || (ps.contains(&Principle::J2) && !ps.contains(&Principle::J2Plus));
        if gen {
            FrameClass::Generalized
        } else {
            FrameClass::Veltman
        }
    }

    /// Resolves a name to a registered logic.
    ///
    /// Accepts registry names, `IL⁻` for `IL-`, whitespace, any order of
    /// principles, scheme variants (`J4'`, `J2+'`, …) and any combination
    /// deductively equivalent to a registered logic, such as `IL-(J1,J2)`
    /// for `CL` or `IL-(J2+,J4+)` for `IL-(J2+)`.
    pub fn by_name(name: &str) -> Result<Logic, LogicError> {
        let norm: String = name.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('⁻', "-");
        let registry = Logic::registry();
        if let Some(l) = registry.iter().find(|l| l.name == norm) {
            return Ok(l.clone());
        }
        let inner = norm
            .strip_prefix("IL-(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| LogicError::Unknown(name.to_string()))?;
        let mut extra = Vec::new();
        for part in inner.split(',').filter(|p| !p.is_empty()) {
            let p: Principle = part.parse().map_err(|_| LogicError::BadPrinciple(part.to_string()))?;
            extra.push(p.scheme());
        }
        let wanted = Logic::custom(name, &extra).principles();
        registry.into_iter().find(|l| l.principles() == wanted).ok_or_else(|| LogicError::Unknown(name.to_string()))
    }

    /// Resolves a name to exactly the axiomatization it spells out:
    /// `IL-(J4')` is IL⁻ plus the scheme `J4'` rather than the registered
    /// `IL-(J4)`, and `CL-orig` is `GL + J1 + J2 + J3 + J4` without R1, R2.
    /// Other names resolve as in [`Logic::by_name`].
    pub fn axiomatized(name: &str) -> Result<Logic, LogicError> {
        let norm: String = name.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('⁻', "-");
        if norm == "CL-orig" {
            return Ok(super::library::cl_original());
        }
        let Some(inner) = norm.strip_prefix("IL-(").and_then(|s| s.strip_suffix(')')) else {
            return Logic::by_name(name);
        };
        let extra = inner
            .split(',')
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<Scheme>().map_err(|_| LogicError::BadPrinciple(p.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if extra.iter().any(|&s| Principle::of_scheme(s).is_none()) {
            return Err(LogicError::BadPrinciple(inner.to_string()));
        }
        Ok(Logic::custom(norm, &extra))
    }

    /// Covering pairs among registered logics of the given completeness
    /// class, with a principle the larger logic proves and the smaller
    /// does not.
    pub fn hasse_edges(class: FrameClass) -> Vec<(Logic, Logic, Principle)> {
        EDGES
            .iter()
            .map(|(a, b, p)| (Logic::by_name(a).unwrap(), Logic::by_name(b).unwrap(), *p))
            .filter(|(a, _, _)| a.complete_class() == class)
            .collect()
    }
}

/// The registry as JSON: each logic with its axioms, the principles it
/// proves and its completeness class, followed by the covering edges.
pub fn registry_dump() -> serde_json::Value {
    let logics: Vec<_> = Logic::registry()
        .iter()
        .map(|l| {
            serde_json::json!({
                "name": l.name(),
                "axioms": l.axioms(),
                "principles": l.principles(),
                "class": l.complete_class(),
            })
        })
        .collect();
    let edges: Vec<_> = EDGES.iter().map(|(a, b, p)| serde_json::json!({ "from": a, "to": b, "adds": p })).collect();
    serde_json::json!({ "logics": logics, "edges": edges })
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FromStr for Logic {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Logic, LogicError> {
        Logic::by_name(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axiomatized_names_keep_their_variants() {
        let l = Logic::axiomatized("IL-(J4')").unwrap();
        assert!(l.has_axiom(Scheme::J4Prime) && !l.has_axiom(Scheme::J4));
        assert_eq!(Logic::axiomatized("IL-(J1,J5)").unwrap().axioms(), Logic::by_name("IL-(J1,J5)").unwrap().axioms());
        assert!(!Logic::axiomatized("CL-orig").unwrap().has_monotonicity_rules());
        assert_eq!(Logic::axiomatized("IL").unwrap(), Logic::by_name("IL").unwrap());
        assert!(Logic::axiomatized("IL-(G1)").is_err());
    }

    #[test]
    fn registry_splits_twelve_and_eight() {
        let reg = Logic::registry();
        let veltman = reg.iter().filter(|l| l.complete_class() == FrameClass::Veltman).count();
        assert_eq!((reg.len(), veltman), (20, 12));
        assert!(reg[..12].iter().all(|l| l.complete_class() == FrameClass::Veltman));
        // No two registered logics prove the same principles.
        let distinct: BTreeSet<_> = reg.iter().map(|l| l.principles()).collect();
        assert_eq!(distinct.len(), 20);
    }

    #[test]
    fn derived_principles() {
        let cl = Logic::by_name("CL").unwrap();
        assert!(cl.has(Principle::J2Plus) && cl.has(Principle::J4Plus) && !cl.has(Principle::J5));
        let j2 = Logic::by_name("IL-(J2)").unwrap();
        assert!(j2.has(Principle::J4) && !j2.has(Principle::J4Plus));
        assert_eq!(j2.primitive_principles().into_iter().collect::<Vec<_>>(), vec![Principle::J2]);
    }

    #[test]
    fn names_resolve_modulo_equivalence() {
        assert_eq!(Logic::by_name("IL⁻( J1 , J2 )").unwrap().name(), "CL");
        assert_eq!(Logic::by_name("IL-(J5,J2,J1)").unwrap().name(), "IL");
        assert_eq!(Logic::by_name("IL-(J2+,J4+)").unwrap().name(), "IL-(J2+)");
        assert_eq!(Logic::by_name("IL-(J4')").unwrap().name(), "IL-(J4)");
        assert_eq!(Logic::by_name("IL-()").unwrap().name(), "IL-");
        assert!(matches!(Logic::by_name("IL-(J6)"), Err(LogicError::BadPrinciple(_))));
        assert!(Logic::by_name("GL").is_err());
    }

    #[test]
    fn edges_are_covering_pairs() {
        let all: Vec<_> = Logic::hasse_edges(FrameClass::Veltman)
            .into_iter()
            .chain(Logic::hasse_edges(FrameClass::Generalized))
            .collect();
        assert_eq!(all.len(), 30);
        for (a, b, p) in &all {
            let (pa, pb) = (a.principles(), b.principles());
            assert!(pa.is_subset(&pb) && pa != pb, "{a} < {b}");
            assert!(!a.has(*p) && b.has(*p), "{a} < {b} separated by {p}");
            assert_eq!(a.complete_class(), b.complete_class());
        }
    }
}
